//! Gibbs states, Heisenberg dynamics and the KMS boundary condition.
//!
//! Time here is physical: `σ_t(A) = e^{iHt} A e^{-iHt}` with `D = e^{-βH}`.
//! Since `e^{iHt} = D^{-it/β}`, the modular flow of [`crate::modular`] is
//! `σ^{modular}_s = σ_{-βs}`.

use crate::error::{Error, Result};
use crate::matrix::{c64, identity, ComplexMatrix};
use crate::states::{DensityMatrix, SINGULARITY_TOL};
use crate::superoperator::SuperOperator;
use crate::vec_ops::kron;

/// Default relative eigenvalue gap for grouping degenerate eigenvalues.
pub const GAP_TOL: f64 = 1e-9;

/// `D = e^{-βH}` with no partition function: `Tr D = 1` fixes the additive
/// constant of `H`.
#[derive(Debug, Clone)]
pub struct GibbsSystem {
    pub beta: f64,
    pub state: DensityMatrix,
    pub hamiltonian: ComplexMatrix,
    /// Eigenvectors shared by `D` and `H` (columns).
    basis: ComplexMatrix,
    /// `E_k = -ln(λ_k) / β`, aligned with `basis`.
    energies: Vec<f64>,
    populations: Vec<f64>,
}

impl GibbsSystem {
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `e^{iHt}`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        let mut scaled = self.basis.clone();
        for (k, e) in self.energies.iter().enumerate() {
            let phase = c64::new(0.0, e * t).exp();
            scaled.column_mut(k).iter_mut().for_each(|x| *x *= phase);
        }
        scaled * self.basis.adjoint()
    }

    /// `ω(A) = Tr(D A)`.
    pub fn expectation(&self, a: &ComplexMatrix) -> c64 {
        self.state.evaluate(a)
    }

    fn check_shape(&self, a: &ComplexMatrix) -> Result<()> {
        let d = self.dim();
        if a.shape() != (d, d) {
            return Err(Error::ShapeMismatch(format!(
                "operator is {}x{}, system has dimension {d}",
                a.nrows(),
                a.ncols()
            )));
        }
        Ok(())
    }
}

/// `H = -(1/β) ln D`.
pub fn gibbs_hamiltonian(d: &DensityMatrix, beta: f64) -> Result<GibbsSystem> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::BadBeta(beta));
    }
    d.ensure_faithful(SINGULARITY_TOL)?;
    let spec = d.spectrum();
    let energies: Vec<f64> = spec.eigenvalues.iter().map(|l| -l.ln() / beta).collect();
    let hamiltonian = spec.map(|l| -l.ln() / beta);
    Ok(GibbsSystem {
        beta,
        state: d.clone(),
        hamiltonian,
        basis: spec.eigenvectors.clone(),
        energies,
        populations: spec.eigenvalues.clone(),
    })
}

/// `e^{iHt} A e^{-iHt}`.
pub fn heisenberg_evolve(sys: &GibbsSystem, a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    sys.check_shape(a)?;
    let u = sys.propagator(t);
    Ok(&u * a * u.adjoint())
}

/// `𝐇 = H ⊗ 1 − 1 ⊗ Hᵀ`, acting as `X ↦ HX − XH`.
pub fn modular_hamiltonian(sys: &GibbsSystem) -> SuperOperator {
    let d = sys.dim();
    let h = &sys.hamiltonian;
    SuperOperator::linear(d, kron(h, &identity(d)) - kron(&identity(d), &h.transpose()))
}

/// `F_{A,B}(z) = ω(A σ_z(B)) = Σ_{jk} λ_j A_{jk} B_{kj} e^{iz(E_k − E_j)}` in the
/// eigenbasis of `H`, for `0 ≤ Im z ≤ β`.
pub fn kms_function(sys: &GibbsSystem, a: &ComplexMatrix, b: &ComplexMatrix, z: c64) -> Result<c64> {
    sys.check_shape(a)?;
    sys.check_shape(b)?;
    let slack = 1e-12 * sys.beta;
    if z.im < -slack || z.im > sys.beta + slack {
        return Err(Error::OutsideStrip {
            im: z.im,
            beta: sys.beta,
        });
    }
    let v = &sys.basis;
    let a_e = v.adjoint() * a * v;
    let b_e = v.adjoint() * b * v;
    let d = sys.dim();
    let mut total = c64::new(0.0, 0.0);
    for j in 0..d {
        for k in 0..d {
            let gap = sys.energies[k] - sys.energies[j];
            let phase = (c64::new(0.0, 1.0) * z * gap).exp();
            total += sys.populations[j] * a_e[(j, k)] * b_e[(k, j)] * phase;
        }
    }
    Ok(total)
}

/// `ω(σ_t(B) A)`, the right-hand side of the KMS boundary identity.
pub fn kms_boundary_value(sys: &GibbsSystem, a: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> Result<c64> {
    let evolved = heisenberg_evolve(sys, b, t)?;
    Ok(sys.expectation(&(evolved * a)))
}

/// Groups ascending eigenvalues whose neighbours differ by at most
/// `gap_tol · (λ_max − λ_min)`. Returns index ranges.
///
/// The diameter is floored at `1e-3 · max|λ|`: for a single repeated level it
/// is pure rounding noise and would otherwise split the eigenspace.
pub fn eigenvalue_groups(eigenvalues: &[f64], gap_tol: f64) -> Vec<std::ops::Range<usize>> {
    if eigenvalues.is_empty() {
        return Vec::new();
    }
    let diameter = eigenvalues[eigenvalues.len() - 1] - eigenvalues[0];
    let magnitude = eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let threshold = gap_tol * diameter.max(1e-3 * magnitude);
    let mut groups = Vec::new();
    let mut start = 0;
    for k in 1..eigenvalues.len() {
        if eigenvalues[k] - eigenvalues[k - 1] > threshold {
            groups.push(start..k);
            start = k;
        }
    }
    groups.push(start..eigenvalues.len());
    groups
}

/// Hilbert–Schmidt orthonormal basis of `{B : [B, D] = 0}` made of matrix
/// units `|v_a⟩⟨v_b|` inside each eigenspace of `D`.
pub fn centralizer_basis(d: &DensityMatrix, gap_tol: f64) -> Vec<ComplexMatrix> {
    let spec = d.spectrum();
    let v = &spec.eigenvectors;
    let mut basis = Vec::new();
    for group in eigenvalue_groups(&spec.eigenvalues, gap_tol) {
        for a in group.clone() {
            for b in group.clone() {
                basis.push(v.column(a) * v.column(b).adjoint());
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{diag, exp_hermitian, hs_norm, trace, unitary_exp, SpectralDecomposition};
    use crate::modular::modular_flow;
    use crate::random::{random_complex_matrix, random_density, random_with_spectrum, seeded_rng};
    use crate::vec_ops::{unvec, vec};

    fn system(seed: u64, d: usize, beta: f64) -> GibbsSystem {
        let rho = DensityMatrix::new(random_density(&mut seeded_rng(seed), d)).unwrap();
        gibbs_hamiltonian(&rho, beta).unwrap()
    }

    #[test]
    fn flat_spectrum_hamiltonian() {
        let sys = gibbs_hamiltonian(&DensityMatrix::maximally_mixed(4), 1.0).unwrap();
        assert!(hs_norm(&(&sys.hamiltonian - identity(4).scale(4f64.ln()))) < 1e-14);
    }

    #[test]
    fn diagonal_hamiltonian() {
        let rho = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        let sys = gibbs_hamiltonian(&rho, 1.0).unwrap();
        let expected = diag(&[-(0.75f64.ln()), -(0.25f64.ln())]);
        assert!(hs_norm(&(&sys.hamiltonian - expected)) < 1e-14);
    }

    #[test]
    fn exponential_round_trip() {
        for (seed, beta) in [(1, 0.5), (2, 1.0), (3, 2.0)] {
            let sys = system(seed, 4, beta);
            let back = exp_hermitian(&sys.hamiltonian.scale(-beta)).unwrap();
            assert!(hs_norm(&(back - sys.state.matrix())) < 1e-10);
            assert!(hs_norm(&crate::matrix::commutator(sys.state.matrix(), &sys.hamiltonian)) < 1e-12);
        }
    }

    #[test]
    fn bad_inputs() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(gibbs_hamiltonian(&rho, 0.0), Err(Error::BadBeta(_))));
        assert!(matches!(gibbs_hamiltonian(&rho, -1.0), Err(Error::BadBeta(_))));
        let pure = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        assert!(matches!(gibbs_hamiltonian(&pure, 1.0), Err(Error::SingularState { .. })));
        let sys = gibbs_hamiltonian(&rho, 1.0).unwrap();
        assert!(heisenberg_evolve(&sys, &identity(3), 1.0).is_err());
        let z = c64::new(0.0, 1.5);
        assert!(matches!(
            kms_function(&sys, &identity(2), &identity(2), z),
            Err(Error::OutsideStrip { .. })
        ));
        assert!(kms_function(&sys, &identity(2), &identity(2), c64::new(0.0, -0.1)).is_err());
    }

    #[test]
    fn evolution_cases() {
        let sys = system(4, 3, 1.0);
        let mut rng = seeded_rng(5);
        let a = random_complex_matrix(&mut rng, 3, 3);
        assert!(hs_norm(&(heisenberg_evolve(&sys, &a, 0.0).unwrap() - &a)) < 1e-14);
        let h = sys.hamiltonian.clone();
        assert!(hs_norm(&(heisenberg_evolve(&sys, &h, 3.3).unwrap() - &h)) < 1e-12);

        // dense oracle: exp(i 𝐇 t) on vec(A)
        let generator = modular_hamiltonian(&sys);
        let spec = SpectralDecomposition::new(&generator.matrix).unwrap();
        let dense = unitary_exp(&spec, 0.4);
        let via_dense = unvec(&crate::vec_ops::BipartiteVector::from_dvector(3, 3, dense * vec(&a).amplitudes));
        assert!(hs_norm(&(via_dense - heisenberg_evolve(&sys, &a, 0.4).unwrap())) < 1e-12);

        // generator acts as a commutator
        let x = random_complex_matrix(&mut rng, 3, 3);
        let expected = &h * &x - &x * &h;
        assert!(hs_norm(&(generator.apply_matrix(&x) - expected)) < 1e-12);
    }

    #[test]
    fn state_invariance() {
        let sys = system(6, 4, 2.0);
        let mut rng = seeded_rng(7);
        for t in [-2.0, -0.5, 0.0, 1.0, 2.7] {
            let a = random_complex_matrix(&mut rng, 4, 4);
            let evolved = heisenberg_evolve(&sys, &a, t).unwrap();
            assert!((sys.expectation(&evolved) - sys.expectation(&a)).norm() < 1e-12);
        }
    }

    #[test]
    fn kms_values() {
        let sys = system(8, 3, 1.0);
        let mut rng = seeded_rng(9);
        let a = random_complex_matrix(&mut rng, 3, 3);
        let b = random_complex_matrix(&mut rng, 3, 3);
        let at_zero = kms_function(&sys, &a, &b, c64::new(0.0, 0.0)).unwrap();
        assert!((at_zero - trace(&(sys.state.matrix() * &a * &b))).norm() < 1e-12);

        let t = 0.8;
        let real_axis = kms_function(&sys, &a, &b, c64::new(t, 0.0)).unwrap();
        let u = sys.propagator(t);
        let direct = trace(&(sys.state.matrix() * &a * &u * &b * u.adjoint()));
        assert!((real_axis - direct).norm() < 1e-12);

        for t in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let top = kms_function(&sys, &a, &b, c64::new(t, sys.beta)).unwrap();
            let boundary = kms_boundary_value(&sys, &a, &b, t).unwrap();
            assert!((top - boundary).norm() < 1e-10);
        }
    }

    #[test]
    fn physical_and_modular_time_bridge() {
        let sys = system(10, 3, 1.7);
        let mut rng = seeded_rng(11);
        let a = random_complex_matrix(&mut rng, 3, 3);
        let s = 0.6;
        let modular = modular_flow(&sys.state, &a, s).unwrap();
        let physical = heisenberg_evolve(&sys, &a, -sys.beta * s).unwrap();
        assert!(hs_norm(&(modular - physical)) < 1e-12);
    }

    #[test]
    fn centralizer_examples() {
        let generic = DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap();
        let basis = centralizer_basis(&generic, GAP_TOL);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(hs_norm(&(b - diag(&[b[(0, 0)].re, b[(1, 1)].re]))) < 1e-14);
        }
        assert_eq!(centralizer_basis(&DensityMatrix::maximally_mixed(3), GAP_TOL).len(), 9);
        let degenerate = DensityMatrix::from_diagonal(&[0.4, 0.4, 0.2]).unwrap();
        assert_eq!(centralizer_basis(&degenerate, GAP_TOL).len(), 5);
    }

    #[test]
    fn centralizer_elements_commute_and_are_orthonormal() {
        let mut rng = seeded_rng(12);
        let rho = DensityMatrix::new(random_with_spectrum(&mut rng, &[0.3, 0.3, 0.3, 0.1])).unwrap();
        let basis = centralizer_basis(&rho, GAP_TOL);
        assert_eq!(basis.len(), 10);
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((crate::matrix::hs_inner(x, y) - expected).norm() < 1e-12);
            }
            let a = random_complex_matrix(&mut rng, 4, 4);
            let c = crate::matrix::commutator(x, &a);
            assert!(rho.evaluate(&c).norm() < 1e-12);
        }
    }

    #[test]
    fn grouping() {
        assert_eq!(eigenvalue_groups(&[0.1, 0.1, 0.8], GAP_TOL), vec![0..2, 2..3]);
        assert_eq!(eigenvalue_groups(&[0.5, 0.5], GAP_TOL), vec![0..2]);
        assert!(eigenvalue_groups(&[], GAP_TOL).is_empty());
        // a single level in a rotated basis carries only rounding-level spread
        let flat = random_with_spectrum(&mut seeded_rng(77), &[0.25; 4]);
        let flat = DensityMatrix::new(flat).unwrap();
        assert_eq!(centralizer_basis(&flat, GAP_TOL).len(), 16);
    }
}
