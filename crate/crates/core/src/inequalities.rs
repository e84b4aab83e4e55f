//! Checkers for the Powers–Störmer family of trace inequalities.
//!
//! Every checker evaluates both sides and returns an [`InequalityReport`]; a
//! violation is reported, not raised. Errors are reserved for inputs outside
//! the hypotheses (non-PSD matrices, bad exponents, order violations).

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{
    ensure_psd, hs_norm, power_on_support, singular_values, sqrt_psd, trace, trace_norm,
    ComplexMatrix, Domain, SpectralDecomposition, HERMITIAN_TOL, RANK_TOL,
};
use crate::states::{PositiveFunctional, SINGULARITY_TOL};
use crate::vec_ops::vec;

/// Relative slack below which an inequality counts as violated.
pub const SLACK_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Direction {
    /// `lhs ≤ rhs`
    LessEq,
    /// `lhs ≥ rhs`
    GreaterEq,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct InequalityReport {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub direction: Direction,
    /// Margin in the direction of the inequality; negative means violated.
    pub slack: f64,
    pub pass: bool,
    pub instance_seed: u64,
}

impl InequalityReport {
    pub fn new(name: &'static str, lhs: f64, rhs: f64, direction: Direction) -> Self {
        let slack = match direction {
            Direction::LessEq => rhs - lhs,
            Direction::GreaterEq => lhs - rhs,
        };
        let scale = 1.0_f64.max(lhs.abs()).max(rhs.abs());
        InequalityReport {
            name,
            lhs,
            rhs,
            direction,
            slack,
            pass: slack >= -SLACK_TOL * scale,
            instance_seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.instance_seed = seed;
        self
    }

    /// Slack divided by the scale used for the pass threshold.
    pub fn relative_slack(&self) -> f64 {
        self.slack / 1.0_f64.max(self.lhs.abs()).max(self.rhs.abs())
    }
}

fn same_shape(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

fn psd_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    same_shape(a, b)?;
    ensure_psd(a)?;
    ensure_psd(b)
}

/// `Tr(A + B − |A − B|)`.
pub fn overlap_bound(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    trace(a).re + trace(b).re - trace_norm(&(a - b))
}

/// `‖X−Y‖²_HS ≤ ‖X²−Y²‖₁ ≤ ‖X−Y‖_HS ‖X+Y‖_HS` for PSD `X, Y`.
pub fn norm_sandwich(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<(InequalityReport, InequalityReport)> {
    psd_pair(x, y)?;
    let diff = hs_norm(&(x - y));
    let squares = trace_norm(&(x * x - y * y));
    let upper = diff * hs_norm(&(x + y));
    Ok((
        InequalityReport::new("norm_sandwich_lower", diff * diff, squares, Direction::LessEq),
        InequalityReport::new("norm_sandwich_upper", squares, upper, Direction::LessEq),
    ))
}

/// `‖√A − √B‖²₂ ≤ ‖A − B‖₁`.
pub fn powers_stormer(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<InequalityReport> {
    psd_pair(a, b)?;
    let lhs = hs_norm(&(sqrt_psd(a)? - sqrt_psd(b)?)).powi(2);
    Ok(InequalityReport::new(
        "powers_stormer",
        lhs,
        trace_norm(&(a - b)),
        Direction::LessEq,
    ))
}

fn check_unit_interval(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::BadExponent(s));
    }
    Ok(())
}

/// `2 Tr(B^s A^{1−s}) ≥ Tr(A + B − |A − B|)`, with `X⁰` the support projection.
pub fn ozawa_s(a: &ComplexMatrix, b: &ComplexMatrix, s: f64) -> Result<InequalityReport> {
    check_unit_interval(s)?;
    psd_pair(a, b)?;
    let lhs = 2.0 * trace(&(power_on_support(b, s, RANK_TOL)? * power_on_support(a, 1.0 - s, RANK_TOL)?)).re;
    Ok(InequalityReport::new("ozawa", lhs, overlap_bound(a, b), Direction::GreaterEq))
}

/// Ogata's inequality with its left side evaluated along two independent routes.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct OgataReport {
    pub report: InequalityReport,
    /// `2‖Δ^{s/2}_{φ₂,φ₁} vec(√D₁)‖²` from the superoperator.
    pub lhs_modular: f64,
    /// `2 Tr(D₂^s D₁^{1−s})`.
    pub lhs_trace: f64,
    pub route_gap: f64,
}

/// Right-hand side `φ₁(1) + φ₂(1) − |φ₁ − φ₂|(1)`.
fn ogata_rhs(phi1: &PositiveFunctional, phi2: &PositiveFunctional) -> Result<f64> {
    Ok(phi1.total_mass() + phi2.total_mass() - crate::states::functional_distance(phi1, phi2)?)
}

/// Trace-form route `2 Tr(D₂^s D₁^{1−s})`; needs no faithfulness.
pub fn ogata_trace_form(phi1: &PositiveFunctional, phi2: &PositiveFunctional, s: f64) -> Result<InequalityReport> {
    check_unit_interval(s)?;
    let rhs = ogata_rhs(phi1, phi2)?;
    let lhs = 2.0
        * trace(&(power_on_support(phi2.matrix(), s, RANK_TOL)?
            * power_on_support(phi1.matrix(), 1.0 - s, RANK_TOL)?))
        .re;
    Ok(InequalityReport::new("ogata", lhs, rhs, Direction::GreaterEq))
}

/// `2‖Δ^{s/2}_{φ₂,φ₁} Φ₁‖² ≥ φ₁(1) + φ₂(1) − |φ₁ − φ₂|(1)` with `Φ₁ = vec(√D₁)`.
///
/// The report's left side is the superoperator route; `route_gap` measures its
/// distance from the trace route.
pub fn ogata_modular(phi1: &PositiveFunctional, phi2: &PositiveFunctional, s: f64) -> Result<OgataReport> {
    check_unit_interval(s)?;
    phi1.ensure_faithful(SINGULARITY_TOL)?;
    let trace_route = ogata_trace_form(phi1, phi2, s)?;

    // Δ^{s/2}_{φ₂,φ₁} = D₂^{s/2} ⊗ (D₁^{-s/2})ᵀ; the D₂ power uses the support
    // convention so that s = 0 matches the trace route for singular φ₂.
    let left = power_on_support(phi2.matrix(), s / 2.0, RANK_TOL)?;
    let right = phi1.power(-s / 2.0)?.transpose();
    let delta = crate::superoperator::SuperOperator::linear(phi1.dim(), crate::vec_ops::kron(&left, &right));
    let image = delta.apply(&vec(&phi1.sqrt()));
    let lhs_modular = 2.0 * image.norm().powi(2);

    let report = InequalityReport::new("ogata", lhs_modular, trace_route.rhs, Direction::GreaterEq);
    Ok(OgataReport {
        report,
        lhs_modular,
        lhs_trace: trace_route.lhs,
        route_gap: (lhs_modular - trace_route.lhs).abs(),
    })
}

/// Operator monotone functions shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum MonotoneKind {
    /// `t^s`, `s ∈ [0, 1]`
    Power(f64),
    /// `t / (1 + t)`
    Ratio,
    /// `log(1 + t)`
    Log1p,
}

impl MonotoneKind {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            MonotoneKind::Power(s) => t.powf(s),
            MonotoneKind::Ratio => t / (1.0 + t),
            MonotoneKind::Log1p => t.ln_1p(),
        }
    }

    pub fn label(self) -> String {
        match self {
            MonotoneKind::Power(s) => format!("t^{s}"),
            MonotoneKind::Ratio => "t/(1+t)".to_string(),
            MonotoneKind::Log1p => "log(1+t)".to_string(),
        }
    }
}

/// `f` together with `g(t) = t / f(t)`, `g(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneFunction {
    pub name: String,
    pub kind: MonotoneKind,
}

/// Random pairs `A ≤ B` used for the monotonicity spot-check.
pub const MONOTONE_SPOT_CHECKS: usize = 20;

impl MonotoneFunction {
    /// Registers `kind` after checking positivity on a grid and operator
    /// monotonicity on random ordered pairs.
    pub fn register<R: Rng + ?Sized>(kind: MonotoneKind, rng: &mut R) -> Result<Self> {
        let name = kind.label();
        if let MonotoneKind::Power(s) = kind {
            check_unit_interval(s)?;
        }
        let grid_ok = (1..=200)
            .map(|k| 10f64.powf(-6.0 + 12.0 * k as f64 / 200.0))
            .all(|t| {
                let v = kind.eval(t);
                v.is_finite() && v > 0.0
            });
        if !grid_ok {
            return Err(Error::NotMonotone(name));
        }
        let mf = MonotoneFunction { name, kind };
        for k in 0..MONOTONE_SPOT_CHECKS {
            let d = 2 + k % 3;
            let a = crate::random::random_psd(rng, d);
            let b = &a + crate::random::random_psd(rng, d);
            let gap = mf.apply_f(&b)? - mf.apply_f(&a)?;
            if !crate::matrix::check_psd(&gap, HERMITIAN_TOL) {
                return Err(Error::NotMonotone(mf.name));
            }
        }
        Ok(mf)
    }

    pub fn f(&self, t: f64) -> f64 {
        self.kind.eval(t)
    }

    pub fn g(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            t / self.kind.eval(t)
        }
    }

    pub fn apply_f(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        crate::matrix::apply_spectral_function(a, Domain::NonNegative, |t| self.f(t))
    }

    /// `g(B)`, with eigenvalues at or below `RANK_TOL · λ_max` mapped to `g(0) = 0`.
    pub fn apply_g(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let spec = SpectralDecomposition::new(b)?;
        let cutoff = RANK_TOL * spec.max_eigenvalue().max(0.0);
        crate::matrix::spectral_map(&spec, Domain::NonNegative, "g", |t| {
            if t <= cutoff {
                0.0
            } else {
                self.g(t)
            }
        })
    }
}

/// The three registered functions: `t^{0.3}`, `t/(1+t)` and `log(1+t)`.
pub fn monotone_registry<R: Rng + ?Sized>(rng: &mut R) -> Result<Vec<MonotoneFunction>> {
    [MonotoneKind::Power(0.3), MonotoneKind::Ratio, MonotoneKind::Log1p]
        .into_iter()
        .map(|k| MonotoneFunction::register(k, rng))
        .collect()
}

/// `2 Tr(√f(A) g(B) √f(A)) ≥ Tr(A + B − |A − B|)`.
pub fn hoa_generalized(a: &ComplexMatrix, b: &ComplexMatrix, mf: &MonotoneFunction) -> Result<InequalityReport> {
    psd_pair(a, b)?;
    let root_fa = sqrt_psd(&mf.apply_f(a)?)?;
    let gb = mf.apply_g(b)?;
    let lhs = 2.0 * trace(&(&root_fa * gb * &root_fa)).re;
    Ok(InequalityReport::new("hoa", lhs, overlap_bound(a, b), Direction::GreaterEq))
}

/// `‖A^{1/t} − B^{1/t}‖_t^t ≤ ‖A − B‖₁` for `A ≥ B ≥ 0`, `t ≥ 1`.
pub fn phillips(a: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> Result<InequalityReport> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::BadExponent(t));
    }
    psd_pair(a, b)?;
    let gap = a - b;
    let gap_spec = SpectralDecomposition::new(&crate::matrix::hermitian_part(&gap))?;
    if gap_spec.min_eigenvalue() < -HERMITIAN_TOL * hs_norm(&gap).max(1.0) {
        return Err(Error::OrderViolation(gap_spec.min_eigenvalue()));
    }
    let root_diff = crate::matrix::psd_power(a, 1.0 / t)? - crate::matrix::psd_power(b, 1.0 / t)?;
    let lhs: f64 = singular_values(&root_diff).iter().map(|s| s.powf(t)).sum();
    Ok(InequalityReport::new("phillips", lhs, trace_norm(&gap), Direction::LessEq))
}

/// Scalar forms of the inequalities for simultaneously diagonal inputs.
///
/// Each function takes the two diagonals and returns `(lhs, rhs)` computed
/// without any matrix function, as an independent oracle for the checkers.
pub mod scalar {
    fn overlap(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| 2.0 * x.min(*y)).sum()
    }

    fn pow0(x: f64, s: f64) -> f64 {
        if s == 0.0 {
            if x > super::RANK_TOL * 1.0_f64.max(x) { 1.0 } else { 0.0 }
        } else {
            x.powf(s)
        }
    }

    pub fn norm_sandwich(x: &[f64], y: &[f64]) -> [f64; 3] {
        let diff2: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum();
        let squares: f64 = x.iter().zip(y).map(|(a, b)| (a * a - b * b).abs()).sum();
        let sum2: f64 = x.iter().zip(y).map(|(a, b)| (a + b).powi(2)).sum();
        [diff2, squares, diff2.sqrt() * sum2.sqrt()]
    }

    pub fn powers_stormer(a: &[f64], b: &[f64]) -> (f64, f64) {
        let lhs = a.iter().zip(b).map(|(x, y)| (x.sqrt() - y.sqrt()).powi(2)).sum();
        let rhs = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
        (lhs, rhs)
    }

    pub fn ozawa(a: &[f64], b: &[f64], s: f64) -> (f64, f64) {
        let lhs = a.iter().zip(b).map(|(x, y)| 2.0 * pow0(*y, s) * pow0(*x, 1.0 - s)).sum();
        (lhs, overlap(a, b))
    }

    pub fn hoa(a: &[f64], b: &[f64], f: impl Fn(f64) -> f64) -> (f64, f64) {
        let g = |t: f64| if t <= 0.0 { 0.0 } else { t / f(t) };
        let lhs = a.iter().zip(b).map(|(x, y)| 2.0 * f(*x) * g(*y)).sum();
        (lhs, overlap(a, b))
    }

    pub fn phillips(a: &[f64], b: &[f64], t: f64) -> (f64, f64) {
        let lhs = a.iter().zip(b).map(|(x, y)| (x.powf(1.0 / t) - y.powf(1.0 / t)).abs().powf(t)).sum();
        let rhs = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
        (lhs, rhs)
    }
}
