//! Seeded verification campaigns.
//!
//! Sample `k` of a suite draws from its own ChaCha substream, so instances do
//! not depend on how rayon schedules the work. Aggregation is a sum of failure
//! counts and a minimum of margins, both order-independent.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{cone_contains, cone_action, decompose_general, decompose_j_fixed, recombine};
use crate::error::{Error, Result};
use crate::inequalities::{
    hoa_generalized, monotone_registry, norm_sandwich, ogata_modular, ozawa_s, phillips,
    powers_stormer, InequalityReport,
};
use crate::kms::{gibbs_hamiltonian, heisenberg_evolve, kms_boundary_value, kms_function};
use crate::matrix::{c64, hs_norm, ComplexMatrix};
use crate::modular::{
    connes_cocycle, modular_flow, polar_residual, relative_modular_from_s, relative_modular_operator,
    verify_tomita_takesaki,
};
use crate::random::{
    random_complex_matrix, random_density, random_hermitian, random_psd, substream, SeededRng,
};
use crate::states::{DensityMatrix, PositiveFunctional};
use crate::vec_ops::{kron, kron_apply_vec, vec, BipartiteVector};

/// Default residual tolerance, relative to the size of the compared objects.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Vec,
    Modular,
    Kms,
    Cone,
    Inequalities,
    All,
}

impl Suite {
    pub const ATOMIC: [Suite; 5] = [Suite::Vec, Suite::Modular, Suite::Kms, Suite::Cone, Suite::Inequalities];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Vec => "vec",
            Suite::Modular => "modular",
            Suite::Kms => "kms",
            Suite::Cone => "cone",
            Suite::Inequalities => "inequalities",
            Suite::All => "all",
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ATOMIC
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub seed: u64,
    /// Largest sampled dimension; each instance draws `d` from `2..=dimension`.
    pub dimension: usize,
    pub samples: usize,
    /// Residual tolerance for suites without an override.
    pub tol: f64,
    /// Per-suite tolerance, keyed by suite name.
    pub overrides: BTreeMap<String, f64>,
}

impl CampaignConfig {
    pub fn new(seed: u64, dimension: usize, samples: usize) -> Self {
        CampaignConfig {
            seed,
            dimension,
            samples,
            tol: DEFAULT_TOL,
            overrides: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::ShapeMismatch("samples must be at least 1".into()));
        }
        if !(2..=16).contains(&self.dimension) {
            return Err(Error::ShapeMismatch(format!(
                "dimension must lie in 2..=16, got {}",
                self.dimension
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::BadExponent(self.tol));
        }
        Ok(())
    }

    pub fn tol_for(&self, suite: Suite) -> f64 {
        self.overrides.get(suite.name()).copied().unwrap_or(self.tol)
    }
}

/// Aggregate over all samples. `worst_slack` is the smallest margin seen:
/// `tol − relative residual` for residual checks and the relative slack for
/// inequality checks. Equality cases can leave it a rounding error below zero
/// without failing, since inequalities pass down to `−SLACK_TOL`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub suite: String,
    pub samples: usize,
    pub failures: usize,
    pub worst_slack: f64,
    pub wall_time: f64,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Tally {
    failures: usize,
    worst: f64,
}

impl Tally {
    const EMPTY: Tally = Tally {
        failures: 0,
        worst: f64::INFINITY,
    };

    fn merge(self, other: Tally) -> Tally {
        Tally {
            failures: self.failures + other.failures,
            worst: self.worst.min(other.worst),
        }
    }

    fn margin(&mut self, m: f64) {
        // NaN counts as a failure and pins the margin at -inf
        let m = if m.is_nan() { f64::NEG_INFINITY } else { m };
        if m < 0.0 {
            self.failures += 1;
        }
        self.worst = self.worst.min(m);
    }

    fn residual(&mut self, value: f64, scale: f64, tol: f64) {
        self.margin(tol - value / scale.max(1.0));
    }

    fn inequality(&mut self, r: &InequalityReport) {
        self.failures += usize::from(!r.pass);
        self.worst = self.worst.min(r.relative_slack());
    }

    fn outcome<T>(&mut self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(_) => {
                self.margin(f64::NEG_INFINITY);
                None
            }
        }
    }
}

fn sample_dim(rng: &mut SeededRng, max: usize) -> usize {
    rng.random_range(2..=max)
}

fn density(rng: &mut SeededRng, d: usize) -> DensityMatrix {
    DensityMatrix::new(random_density(rng, d)).expect("sampled densities are valid")
}

fn vec_sample(rng: &mut SeededRng, d: usize, tol: f64, t: &mut Tally) {
    let rows = rng.random_range(1..=d);
    let cols = rng.random_range(1..=d);
    let a = random_complex_matrix(rng, d, rows);
    let b = random_complex_matrix(rng, d, cols);
    let x = random_complex_matrix(rng, rows, cols);
    // dense Kronecker product against the matrix form
    let dense = BipartiteVector::from_dvector(d, d, kron(&a, &b) * vec(&x).amplitudes);
    if let Some(rhs) = t.outcome(kron_apply_vec(&a, &b, &x)) {
        let scale = hs_norm(&a) * hs_norm(&b) * hs_norm(&x);
        t.residual(dense.distance(&rhs), scale, tol);
    }
}

fn modular_sample(rng: &mut SeededRng, d: usize, tol: f64, t: &mut Tally) {
    let phi = density(rng, d);
    let omega = density(rng, d);
    let (Some(kron), Some(first)) = (
        t.outcome(relative_modular_operator(&phi, &omega)),
        t.outcome(relative_modular_from_s(&phi, &omega)),
    ) else {
        return;
    };
    t.residual(kron.distance(&first), hs_norm(&kron.matrix), tol);
    if let Some(r) = t.outcome(polar_residual(&phi, &omega)) {
        t.residual(r, 1.0, tol);
    }

    let (s, u) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
    let cocycle = |x| connes_cocycle(&phi, &omega, x);
    if let (Some(us), Some(uu), Some(usu)) = (t.outcome(cocycle(s)), t.outcome(cocycle(u)), t.outcome(cocycle(s + u))) {
        if let Some(shifted) = t.outcome(modular_flow(&omega, &uu, s)) {
            t.residual(hs_norm(&(usu - &us * shifted)), 1.0, tol);
        }
        let a = random_complex_matrix(rng, d, d);
        if let (Some(lhs), Some(inner)) = (t.outcome(modular_flow(&phi, &a, s)), t.outcome(modular_flow(&omega, &a, s))) {
            t.residual(hs_norm(&(lhs - &us * inner * us.adjoint())), hs_norm(&a), tol);
        }
    }

    let samples: Vec<ComplexMatrix> = (0..3).map(|_| random_complex_matrix(rng, d, d)).collect();
    let scale: f64 = samples.iter().map(|m| hs_norm(m).powi(2)).fold(1.0, f64::max);
    if let Some(report) = t.outcome(verify_tomita_takesaki(&omega, &samples, &[0.3, 1.0, 2.7])) {
        t.residual(report.max_commutator, scale, tol);
        t.residual(report.max_commutant_form, scale.sqrt(), tol);
        t.residual(report.max_flow_residual, scale.sqrt(), tol);
    }
}

fn kms_sample(rng: &mut SeededRng, d: usize, tol: f64, t: &mut Tally) {
    let beta = [0.5, 1.0, 2.0][rng.random_range(0..3)];
    let state = density(rng, d);
    let Some(sys) = t.outcome(gibbs_hamiltonian(&state, beta)) else {
        return;
    };
    let a = random_complex_matrix(rng, d, d);
    let b = random_complex_matrix(rng, d, d);
    let time = rng.random_range(-5.0..5.0);
    let scale = hs_norm(&a) * hs_norm(&b);
    if let (Some(f), Some(g)) = (
        t.outcome(kms_function(&sys, &a, &b, c64::new(time, beta))),
        t.outcome(kms_boundary_value(&sys, &a, &b, time)),
    ) {
        t.residual((f - g).norm(), scale, tol);
    }
    if let Some(evolved) = t.outcome(heisenberg_evolve(&sys, &a, time)) {
        let drift = (sys.expectation(&evolved) - sys.expectation(&a)).norm();
        t.residual(drift, hs_norm(&a), tol);
    }
}

fn cone_sample(rng: &mut SeededRng, d: usize, tol: f64, t: &mut Tally) {
    let x = vec(&random_psd(rng, d));
    let y = vec(&random_psd(rng, d));
    t.margin(tol + x.inner(&y).re.min(0.0));

    let h = vec(&random_hermitian(rng, d));
    if let Some((plus, minus)) = t.outcome(decompose_j_fixed(&h)) {
        t.residual(plus.vector.inner(&minus.vector).norm(), h.norm().powi(2), tol);
        t.residual(plus.vector.sub(&minus.vector).distance(&h), h.norm(), tol);
    }

    let v = vec(&random_complex_matrix(rng, d, d));
    if let Some(parts) = t.outcome(decompose_general(&v)) {
        t.residual(recombine(&parts).distance(&v), v.norm(), tol);
    }

    let m = random_complex_matrix(rng, d, d);
    if let Some(moved) = t.outcome(cone_action(&m, &x)) {
        let scale = moved.norm().max(1.0);
        let inside = cone_contains(&moved, tol * scale).unwrap_or(false);
        t.margin(if inside { tol } else { -tol });
    }
}

fn inequality_sample(rng: &mut SeededRng, d: usize, t: &mut Tally) {
    let a = random_psd(rng, d);
    let b = random_psd(rng, d);
    if let Some((lo, hi)) = t.outcome(norm_sandwich(&a, &b)) {
        t.inequality(&lo);
        t.inequality(&hi);
    }
    if let Some(r) = t.outcome(powers_stormer(&a, &b)) {
        t.inequality(&r);
    }
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        if let Some(r) = t.outcome(ozawa_s(&a, &b, s)) {
            t.inequality(&r);
        }
    }

    let phi1 = PositiveFunctional::new(random_density(rng, d)).expect("density");
    let phi2 = PositiveFunctional::new(random_psd(rng, d)).expect("psd");
    let s = rng.random_range(0.0..=1.0);
    if let Some(r) = t.outcome(ogata_modular(&phi1, &phi2, s)) {
        t.inequality(&r.report);
        t.residual(r.route_gap, r.lhs_trace.abs(), DEFAULT_TOL);
    }

    let registry = monotone_registry(rng);
    if let Some(registry) = t.outcome(registry) {
        for mf in &registry {
            if let Some(r) = t.outcome(hoa_generalized(&a, &b, mf)) {
                t.inequality(&r);
            }
        }
    }

    let top = &b + random_psd(rng, d);
    for power in [1.0, 1.5, 2.0, 3.0] {
        if let Some(r) = t.outcome(phillips(&top, &b, power)) {
            t.inequality(&r);
        }
    }
}

fn run_sample(suite: Suite, config: &CampaignConfig, index: usize) -> Tally {
    let mut rng = substream(config.seed, suite.stream(), index as u64);
    let d = sample_dim(&mut rng, config.dimension);
    let tol = config.tol_for(suite);
    let mut tally = Tally::EMPTY;
    match suite {
        Suite::Vec => vec_sample(&mut rng, d, tol, &mut tally),
        Suite::Modular => modular_sample(&mut rng, d, tol, &mut tally),
        Suite::Kms => kms_sample(&mut rng, d, tol, &mut tally),
        Suite::Cone => cone_sample(&mut rng, d, tol, &mut tally),
        Suite::Inequalities => inequality_sample(&mut rng, d, &mut tally),
        Suite::All => unreachable!("expanded by run_campaign"),
    }
    tally
}

/// Runs `config.samples` instances of `suite` (of every suite for [`Suite::All`]).
pub fn run_campaign(config: &CampaignConfig, suite: Suite) -> Result<CampaignReport> {
    config.validate()?;
    let start = Instant::now();
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::ATOMIC.to_vec(),
        s => vec![s],
    };
    let jobs: Vec<(Suite, usize)> = suites
        .iter()
        .flat_map(|&s| (0..config.samples).map(move |k| (s, k)))
        .collect();
    let tally = jobs
        .par_iter()
        .map(|&(s, k)| run_sample(s, config, k))
        .reduce(|| Tally::EMPTY, Tally::merge);
    Ok(CampaignReport {
        suite: suite.name().to_string(),
        samples: jobs.len(),
        failures: tally.failures,
        worst_slack: tally.worst,
        wall_time: start.elapsed().as_secs_f64(),
    })
}
