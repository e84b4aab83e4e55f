use std::io::Read;

use serde::Serialize;

use modkit::campaign::{run_campaign, CampaignConfig, Suite};
use modkit::cone::{cone_contains, decompose_general, dual_pairing_min, recombine};
use modkit::inequalities::{
    hoa_generalized, monotone_registry, norm_sandwich, ogata_modular, ozawa_s, phillips,
    powers_stormer, InequalityReport,
};
use modkit::kms::{gibbs_hamiltonian, heisenberg_evolve, kms_boundary_value, kms_function};
use modkit::matrix::{c64, check_psd, hermitian_defect, hs_norm, ComplexMatrix, RANK_TOL};
use modkit::modular::{
    connes_cocycle, matrix_unit_basis, modular_flow, polar_residual, relative_modular_from_s,
    relative_modular_operator, verify_tomita_takesaki,
};
use modkit::random::{random_complex_matrix, seeded_rng};
use modkit::schmidt::{is_cyclic_separating, schmidt_decompose};
use modkit::states::PositiveFunctional;
use modkit::vec_ops::unvec;
use modkit::{io, DensityMatrix, Error};

use crate::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Core(Error::Parse(_)) => 2,
            CliError::Usage(_) | CliError::Core(Error::UnknownSuite(_)) => 4,
            CliError::Core(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_source(path: &str) -> CliResult<String> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn read_matrix(path: &str) -> CliResult<ComplexMatrix> {
    Ok(io::parse_matrix(&read_source(path)?)?)
}

fn read_state(path: &str) -> CliResult<DensityMatrix> {
    Ok(DensityMatrix::new(read_matrix(path)?)?)
}

fn emit<T: Serialize>(json: bool, report: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string(report).expect("reports serialize"));
    } else {
        print!("{}", text());
    }
}

fn fmt_list(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(", ")
}

pub fn run(cli: &Cli) -> CliResult<bool> {
    if !(cli.tol > 0.0) || !cli.tol.is_finite() {
        return Err(CliError::Usage(format!("tolerance must be positive and finite, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Schmidt { input } => schmidt(cli, input),
        Command::Modular { phi, omega, time, verify, samples, seed } => {
            modular(cli, phi, omega, *time, *verify, *samples, seed.seed)
        }
        Command::KmsVerify { state, beta, samples, seed } => kms(cli, state, *beta, *samples, seed.seed),
        Command::Cone { input, samples, seed } => cone(cli, input, *samples, seed.seed),
        Command::Ineq { a, b } => ineq(cli, a, b),
        Command::Campaign { suite, dim, samples, seed } => campaign(cli, suite, *dim, *samples, seed.seed),
    }
}

#[derive(Serialize)]
struct SchmidtReport {
    dim_left: usize,
    dim_right: usize,
    rank: usize,
    coefficients: Vec<f64>,
    /// `None` when the factors have different dimensions.
    cyclic_separating: Option<bool>,
}

fn schmidt(cli: &Cli, input: &str) -> CliResult<bool> {
    let u = io::parse_bipartite(&read_source(input)?)?;
    let data = schmidt_decompose(&u, RANK_TOL)?;
    let report = SchmidtReport {
        dim_left: u.dim_left,
        dim_right: u.dim_right,
        rank: data.rank,
        coefficients: data.coefficients.clone(),
        cyclic_separating: is_cyclic_separating(&u, RANK_TOL).ok(),
    };
    emit(cli.json, &report, || {
        let verdict = match report.cyclic_separating {
            Some(true) => "yes",
            Some(false) => "no",
            None => "n/a (rectangular)",
        };
        format!(
            "dims: {}x{}\nrank: {}\ncoefficients: [{}]\ncyclic and separating: {verdict}\n",
            report.dim_left,
            report.dim_right,
            report.rank,
            fmt_list(&report.coefficients)
        )
    });
    Ok(true)
}

#[derive(Serialize)]
struct FlowReport {
    t: f64,
    cocycle_unitarity: f64,
    intertwining_residual: f64,
}

#[derive(Serialize)]
struct TomitaTakesakiSummary {
    samples: usize,
    max_commutator: f64,
    max_commutant_form: f64,
    max_flow_residual: f64,
}

#[derive(Serialize)]
struct ModularReport {
    dim: usize,
    spectrum: Vec<f64>,
    cross_route_residual: f64,
    polar_residual: f64,
    flow: Option<FlowReport>,
    tomita_takesaki: Option<TomitaTakesakiSummary>,
    pass: bool,
}

fn modular(
    cli: &Cli,
    phi_path: &str,
    omega_path: &str,
    time: Option<f64>,
    verify: bool,
    samples: usize,
    seed: u64,
) -> CliResult<bool> {
    let phi = read_state(phi_path)?;
    let omega = read_state(omega_path)?;
    let delta = relative_modular_operator(&phi, &omega)?;
    let scale = hs_norm(&delta.matrix).max(1.0);
    let cross = delta.distance(&relative_modular_from_s(&phi, &omega)?) / scale;
    let polar = polar_residual(&phi, &omega)?;

    // Δ_{φ,ω} = D_φ ⊗ (D_ω^{-1})ᵀ has eigenvalues λ_i / μ_j
    let mut spectrum: Vec<f64> = phi
        .spectrum()
        .eigenvalues
        .iter()
        .flat_map(|l| omega.spectrum().eigenvalues.iter().map(move |m| l / m))
        .collect();
    spectrum.sort_by(|a, b| b.total_cmp(a));

    let mut rng = seeded_rng(seed);
    let flow = match time {
        Some(t) => {
            let u = connes_cocycle(&phi, &omega, t)?;
            let a = random_complex_matrix(&mut rng, phi.dim(), phi.dim());
            let lhs = modular_flow(&phi, &a, t)?;
            let rhs = &u * modular_flow(&omega, &a, t)? * u.adjoint();
            Some(FlowReport {
                t,
                cocycle_unitarity: hs_norm(&(u.adjoint() * &u - ComplexMatrix::identity(phi.dim(), phi.dim()))),
                intertwining_residual: hs_norm(&(lhs - rhs)) / hs_norm(&a).max(1.0),
            })
        }
        None => None,
    };

    let tomita_takesaki = if verify {
        let basis = if omega.dim() <= 4 {
            matrix_unit_basis(omega.dim())
        } else {
            (0..samples.max(1))
                .map(|_| random_complex_matrix(&mut rng, omega.dim(), omega.dim()))
                .map(|m| m.unscale(hs_norm(&m)))
                .collect()
        };
        let r = verify_tomita_takesaki(&omega, &basis, &[0.3, 1.0, 2.7])?;
        Some(TomitaTakesakiSummary {
            samples: r.samples,
            max_commutator: r.max_commutator,
            max_commutant_form: r.max_commutant_form,
            max_flow_residual: r.max_flow_residual,
        })
    } else {
        None
    };

    let tol = cli.tol;
    let mut residuals = vec![cross, polar];
    if let Some(f) = &flow {
        residuals.extend([f.cocycle_unitarity, f.intertwining_residual]);
    }
    if let Some(tt) = &tomita_takesaki {
        residuals.extend([tt.max_commutator, tt.max_commutant_form, tt.max_flow_residual]);
    }
    let pass = residuals.iter().all(|r| *r < tol);

    let report = ModularReport {
        dim: phi.dim(),
        spectrum,
        cross_route_residual: cross,
        polar_residual: polar,
        flow,
        tomita_takesaki,
        pass,
    };
    emit(cli.json, &report, || {
        let mut out = format!(
            "spectrum of Delta: [{}]\nKronecker vs S*S residual: {:.3e}\npolar residual |S - J Delta^1/2|: {:.3e}\n",
            fmt_list(&report.spectrum),
            report.cross_route_residual,
            report.polar_residual
        );
        if let Some(f) = &report.flow {
            out += &format!(
                "t = {}: cocycle unitarity {:.3e}, intertwining {:.3e}\n",
                f.t, f.cocycle_unitarity, f.intertwining_residual
            );
        }
        if let Some(tt) = &report.tomita_takesaki {
            out += &format!(
                "Tomita-Takesaki over {} samples: commutator {:.3e}, commutant form {:.3e}, flow {:.3e}\n",
                tt.samples, tt.max_commutator, tt.max_commutant_form, tt.max_flow_residual
            );
        }
        out + if report.pass { "PASS\n" } else { "FAIL\n" }
    });
    Ok(pass)
}

#[derive(Serialize)]
struct KmsReport {
    beta: f64,
    energies: Vec<f64>,
    samples: usize,
    max_boundary_residual: f64,
    max_invariance_residual: f64,
    pass: bool,
}

const KMS_TIMES: [f64; 5] = [-2.0, -0.5, 0.0, 0.7, 3.1];

fn kms(cli: &Cli, path: &str, beta: f64, samples: usize, seed: u64) -> CliResult<bool> {
    let state = read_state(path)?;
    let sys = gibbs_hamiltonian(&state, beta)?;
    let d = sys.dim();
    let mut rng = seeded_rng(seed);
    let mut boundary = 0.0_f64;
    let mut invariance = 0.0_f64;
    for _ in 0..samples {
        let a = random_complex_matrix(&mut rng, d, d);
        let b = random_complex_matrix(&mut rng, d, d);
        let scale = (hs_norm(&a) * hs_norm(&b)).max(1.0);
        for &t in &KMS_TIMES {
            let f = kms_function(&sys, &a, &b, c64::new(t, beta))?;
            let g = kms_boundary_value(&sys, &a, &b, t)?;
            boundary = boundary.max((f - g).norm() / scale);
            let evolved = heisenberg_evolve(&sys, &a, t)?;
            invariance = invariance.max((sys.expectation(&evolved) - sys.expectation(&a)).norm() / hs_norm(&a).max(1.0));
        }
    }
    let pass = boundary < cli.tol && invariance < cli.tol;
    let report = KmsReport {
        beta,
        energies: sys.energies().to_vec(),
        samples,
        max_boundary_residual: boundary,
        max_invariance_residual: invariance,
        pass,
    };
    emit(cli.json, &report, || {
        format!(
            "beta: {}\nenergies: [{}]\nKMS boundary residual: {:.3e}\nstate invariance residual: {:.3e}\n{}\n",
            report.beta,
            fmt_list(&report.energies),
            report.max_boundary_residual,
            report.max_invariance_residual,
            if pass { "PASS" } else { "FAIL" }
        )
    });
    Ok(pass)
}

#[derive(Serialize)]
struct ConeReport {
    in_cone: bool,
    j_fixed: bool,
    part_norms: [f64; 4],
    recombination_residual: f64,
    dual_pairing_min: f64,
    pass: bool,
}

fn cone(cli: &Cli, path: &str, samples: usize, seed: u64) -> CliResult<bool> {
    let v = io::parse_bipartite(&read_source(path)?)?;
    let scale = v.norm().max(1.0);
    let in_cone = cone_contains(&v, cli.tol * scale)?;
    let j_fixed = hermitian_defect(&unvec(&v)) <= cli.tol;
    let parts = decompose_general(&v)?;
    let residual = recombine(&parts).distance(&v) / scale;
    let dual = dual_pairing_min(&v, samples, &mut seeded_rng(seed))?;
    let pass = residual < cli.tol;
    let report = ConeReport {
        in_cone,
        j_fixed,
        part_norms: parts.each_ref().map(|p| p.vector.norm()),
        recombination_residual: residual,
        dual_pairing_min: dual,
        pass,
    };
    emit(cli.json, &report, || {
        format!(
            "in natural cone: {}\nJ-fixed: {}\npart norms (c1, c2, c3, c4): [{}]\nrecombination residual: {:.3e}\nmin pairing over {samples} rays: {:.6}\n{}\n",
            report.in_cone,
            report.j_fixed,
            fmt_list(&report.part_norms),
            report.recombination_residual,
            report.dual_pairing_min,
            if pass { "PASS" } else { "FAIL" }
        )
    });
    Ok(pass)
}

#[derive(Serialize)]
struct IneqEntry {
    label: String,
    #[serde(flatten)]
    report: InequalityReport,
}

#[derive(Serialize)]
struct IneqReport {
    checks: Vec<IneqEntry>,
    skipped: Vec<String>,
    pass: bool,
}

fn ineq(cli: &Cli, a_path: &str, b_path: &str) -> CliResult<bool> {
    let a = read_matrix(a_path)?;
    let b = read_matrix(b_path)?;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let mut push = |label: String, report: InequalityReport| checks.push(IneqEntry { label, report });

    let (lo, hi) = norm_sandwich(&a, &b)?;
    push("norm sandwich (lower)".into(), lo);
    push("norm sandwich (upper)".into(), hi);
    push("Powers-Stormer".into(), powers_stormer(&a, &b)?);
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        push(format!("Ozawa s={s}"), ozawa_s(&a, &b, s)?);
    }
    for mf in monotone_registry(&mut seeded_rng(0))? {
        push(format!("Hoa f={}", mf.name), hoa_generalized(&a, &b, &mf)?);
    }
    let phi1 = PositiveFunctional::new(a.clone())?;
    let phi2 = PositiveFunctional::new(b.clone())?;
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        match ogata_modular(&phi1, &phi2, s) {
            Ok(r) if r.route_gap < cli.tol * r.lhs_trace.abs().max(1.0) => push(format!("Ogata s={s}"), r.report),
            Ok(r) => {
                let mut failed = r.report;
                failed.pass = false;
                push(format!("Ogata s={s} (routes disagree by {:.3e})", r.route_gap), failed);
            }
            Err(Error::SingularState { .. }) => {
                skipped.push("Ogata: A is not faithful".into());
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if check_psd(&(&a - &b), modkit::matrix::HERMITIAN_TOL) {
        for t in [1.0, 1.5, 2.0, 3.0] {
            push(format!("Phillips t={t}"), phillips(&a, &b, t)?);
        }
    } else {
        skipped.push("Phillips: A - B is not PSD".into());
    }

    let pass = checks.iter().all(|c| c.report.pass);
    let report = IneqReport { checks, skipped, pass };
    emit(cli.json, &report, || {
        let mut out = String::new();
        for c in &report.checks {
            out += &format!(
                "{:<4} {:<28} lhs {:>14.8} rhs {:>14.8} slack {:>11.3e}\n",
                if c.report.pass { "ok" } else { "FAIL" },
                c.label,
                c.report.lhs,
                c.report.rhs,
                c.report.slack
            );
        }
        for s in &report.skipped {
            out += &format!("skip {s}\n");
        }
        out
    });
    Ok(pass)
}

fn campaign(cli: &Cli, suite: &str, dim: usize, samples: usize, seed: u64) -> CliResult<bool> {
    let suite: Suite = suite.parse()?;
    let mut config = CampaignConfig::new(seed, dim, samples);
    config.tol = cli.tol;
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let report = run_campaign(&config, suite)?;
    emit(cli.json, &report, || {
        format!(
            "suite: {}\nsamples: {}\nfailures: {}\nworst slack: {:.3e}\nwall time: {:.3}s\n",
            report.suite, report.samples, report.failures, report.worst_slack, report.wall_time
        )
    });
    Ok(report.passed())
}
