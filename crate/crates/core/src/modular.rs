//! Modular theory of `M = B(H_d)` acting as `π(X) = X ⊗ 1` on `H_d ⊗ H_d`.
//!
//! Two independent routes to the relative modular operator are exposed:
//!
//! * first principles: assemble the antilinear `S_{φ,ω}` from its action
//!   `vec(X) ↦ vec(D_ω^{-1/2} X* D_φ^{1/2})` on matrix units, then `Δ = S*S`;
//! * closed form: `Δ_{φ,ω} = D_φ ⊗ (D_ω^{-1})ᵀ`.
//!
//! Transposes are taken in the standard basis, matching the row-major `vec`.
//!
//! Time conventions: this module uses modular time, `σ_t(A) = Δ^{it} A Δ^{-it}
//! = D^{it} A D^{-it}`. Physical (Hamiltonian) time in [`crate::kms`] is related by
//! `σ^{modular}_s = σ^{physical}_{-βs}`.

use crate::error::{Error, Result};
use crate::matrix::{hs_norm, identity, ComplexMatrix};
use crate::schmidt::is_cyclic_separating;
use crate::states::{DensityMatrix, PositiveFunctional, SINGULARITY_TOL};
use crate::superoperator::SuperOperator;
use crate::vec_ops::{kron, partial_trace, swap_operator, vec, BipartiteVector, TraceOut};

/// The standard form `(π(M), H_d ⊗ H_d, Ω)` with `Ω = vec(√D_ω)`.
#[derive(Debug, Clone)]
pub struct StandardForm {
    pub d: usize,
    pub omega_vec: BipartiteVector,
    pub d_omega: DensityMatrix,
    /// Norm of the vector the form was built from (1 when built from a state).
    pub scale: f64,
}

impl StandardForm {
    pub fn new(d_omega: DensityMatrix) -> Result<Self> {
        d_omega.ensure_faithful(SINGULARITY_TOL)?;
        let omega_vec = crate::states::purify(&d_omega);
        Ok(StandardForm {
            d: d_omega.dim(),
            omega_vec,
            d_omega,
            scale: 1.0,
        })
    }

    /// Builds the form from an arbitrary (possibly unnormalized) cyclic separating
    /// vector; the stored `Ω` is the cone representative of its reduced state.
    pub fn from_cyclic_vector(v: &BipartiteVector) -> Result<Self> {
        if !is_cyclic_separating(v, crate::matrix::RANK_TOL)? {
            return Err(Error::SingularState { ratio: 0.0 });
        }
        let scale = v.norm();
        let reduced = partial_trace(v, v, TraceOut::Right)?.unscale(scale * scale);
        let mut form = Self::new(DensityMatrix::new(reduced)?)?;
        form.scale = scale;
        Ok(form)
    }

    pub fn s_operator(&self) -> Result<SuperOperator> {
        relative_s_matrix(&self.d_omega, &self.d_omega)
    }

    pub fn modular_operator(&self) -> Result<SuperOperator> {
        relative_modular_operator(&self.d_omega, &self.d_omega)
    }

    pub fn modular_conjugation(&self) -> SuperOperator {
        modular_conjugation(self.d)
    }

    pub fn flow(&self, a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        modular_flow(&self.d_omega, a, t)
    }
}

fn same_dim(phi: &PositiveFunctional, omega: &PositiveFunctional) -> Result<usize> {
    if phi.dim() != omega.dim() {
        return Err(Error::ShapeMismatch(format!(
            "states have dimensions {} and {}",
            phi.dim(),
            omega.dim()
        )));
    }
    Ok(phi.dim())
}

/// Antilinear `S_{φ,ω}`: `vec(X) ↦ vec(D_ω^{-1/2} X* D_φ^{1/2})`, assembled from its basis action.
pub fn relative_s_matrix(phi: &DensityMatrix, omega: &DensityMatrix) -> Result<SuperOperator> {
    let d = same_dim(phi, omega)?;
    let omega_inv_sqrt = omega.power(-0.5)?;
    let phi_sqrt = phi.sqrt();
    Ok(SuperOperator::from_basis_action(d, true, |x| {
        &omega_inv_sqrt * x.adjoint() * &phi_sqrt
    }))
}

/// Antilinear `F_{φ,ω}`: `vec(Y) ↦ vec(D_φ^{1/2} Y* D_ω^{-1/2})`, the commutant counterpart of `S`.
pub fn relative_f_matrix(phi: &DensityMatrix, omega: &DensityMatrix) -> Result<SuperOperator> {
    let d = same_dim(phi, omega)?;
    let omega_inv_sqrt = omega.power(-0.5)?;
    let phi_sqrt = phi.sqrt();
    Ok(SuperOperator::from_basis_action(d, true, |y| {
        &phi_sqrt * y.adjoint() * &omega_inv_sqrt
    }))
}

/// `Δ_{φ,ω} = D_φ ⊗ (D_ω^{-1})ᵀ`.
pub fn relative_modular_operator(
    phi: &DensityMatrix,
    omega: &DensityMatrix,
) -> Result<SuperOperator> {
    relative_modular_power(phi, omega, 1.0)
}

/// `Δ_{φ,ω}^p = D_φ^p ⊗ (D_ω^{-p})ᵀ`. Nonnegative `p` only needs `ω` faithful.
///
/// Accepts unnormalized positive functionals as well as states.
pub fn relative_modular_power(
    phi: &PositiveFunctional,
    omega: &PositiveFunctional,
    p: f64,
) -> Result<SuperOperator> {
    let d = same_dim(phi, omega)?;
    omega.ensure_faithful(SINGULARITY_TOL)?;
    let left = phi.power(p)?;
    let right = omega.power(-p)?.transpose();
    Ok(SuperOperator::linear(d, kron(&left, &right)))
}

/// `Δ_{φ,ω}^{it} = D_φ^{it} ⊗ (D_ω^{-it})ᵀ`; both states must be faithful.
pub fn relative_modular_unitary(
    phi: &DensityMatrix,
    omega: &DensityMatrix,
    t: f64,
) -> Result<SuperOperator> {
    let d = same_dim(phi, omega)?;
    let left = phi.imaginary_power(t)?;
    let right = omega.imaginary_power(-t)?.transpose();
    Ok(SuperOperator::linear(d, kron(&left, &right)))
}

/// `Δ_{φ,ω} = S*S` from the first-principles `S`.
pub fn relative_modular_from_s(phi: &DensityMatrix, omega: &DensityMatrix) -> Result<SuperOperator> {
    let s = relative_s_matrix(phi, omega)?;
    Ok(s.adjoint().compose(&s))
}

/// `J vec(X) = vec(X*)`, i.e. swap composed with complex conjugation.
pub fn modular_conjugation(d: usize) -> SuperOperator {
    SuperOperator::antilinear(d, swap_operator(d).matrix)
}

/// `π(M) = M ⊗ 1`.
pub fn left_representation(m: &ComplexMatrix) -> SuperOperator {
    SuperOperator::linear(m.nrows(), kron(m, &identity(m.nrows())))
}

/// `1 ⊗ N`, an element of the commutant `π(M)'`.
pub fn commutant_element(n: &ComplexMatrix) -> SuperOperator {
    SuperOperator::linear(n.nrows(), kron(&identity(n.nrows()), n))
}

/// `σ^ω_t(A) = D_ω^{it} A D_ω^{-it}`.
pub fn modular_flow(omega: &DensityMatrix, a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if a.shape() != (omega.dim(), omega.dim()) {
        return Err(Error::ShapeMismatch(format!(
            "operator is {}x{}, state has dimension {}",
            a.nrows(),
            a.ncols(),
            omega.dim()
        )));
    }
    let u = omega.imaginary_power(t)?;
    Ok(&u * a * u.adjoint())
}

/// Connes cocycle `[Dφ : Dω]_t = D_φ^{it} D_ω^{-it}`.
///
/// Its image `U_t ⊗ 1` equals `Δ^{it}_{φ,ω} Δ^{-it}_{ω,ω}` because the right
/// Kronecker factors cancel.
pub fn connes_cocycle(phi: &DensityMatrix, omega: &DensityMatrix, t: f64) -> Result<ComplexMatrix> {
    same_dim(phi, omega)?;
    Ok(phi.imaginary_power(t)? * omega.imaginary_power(-t)?)
}

/// Residuals of the Tomita–Takesaki theorem on a set of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TomitaTakesakiReport {
    /// max over sample pairs of `‖[J π(M) J, π(N)]‖`.
    pub max_commutator: f64,
    /// max over samples of `‖J π(M) J − 1 ⊗ conj(M)‖`.
    pub max_commutant_form: f64,
    /// max over samples and times of `‖Δ^{it} π(M) Δ^{-it} − π(D^{it} M D^{-it})‖`.
    pub max_flow_residual: f64,
    pub samples: usize,
    pub pass: bool,
}

pub const TOMITA_TAKESAKI_TOL: f64 = 1e-10;

pub fn verify_tomita_takesaki(
    omega: &DensityMatrix,
    samples: &[ComplexMatrix],
    t_grid: &[f64],
) -> Result<TomitaTakesakiReport> {
    omega.ensure_faithful(SINGULARITY_TOL)?;
    let d = omega.dim();
    let j = modular_conjugation(d);
    let images: Vec<SuperOperator> = samples.iter().map(left_representation).collect();

    let mut max_commutator = 0.0_f64;
    let mut max_commutant_form = 0.0_f64;
    for (m, pm) in samples.iter().zip(&images) {
        let jmj = j.compose(pm).compose(&j);
        let expected = commutant_element(&m.map(|z| z.conj()));
        max_commutant_form = max_commutant_form.max(jmj.distance(&expected));
        for pn in &images {
            let comm = &jmj.matrix * &pn.matrix - &pn.matrix * &jmj.matrix;
            max_commutator = max_commutator.max(hs_norm(&comm));
        }
    }

    let mut max_flow_residual = 0.0_f64;
    for &t in t_grid {
        let forward = relative_modular_unitary(omega, omega, t)?;
        let backward = relative_modular_unitary(omega, omega, -t)?;
        for (m, pm) in samples.iter().zip(&images) {
            let conjugated = forward.compose(pm).compose(&backward);
            let expected = left_representation(&modular_flow(omega, m, t)?);
            max_flow_residual = max_flow_residual.max(conjugated.distance(&expected));
        }
    }

    let pass = max_commutator < TOMITA_TAKESAKI_TOL
        && max_commutant_form < TOMITA_TAKESAKI_TOL
        && max_flow_residual < TOMITA_TAKESAKI_TOL;
    Ok(TomitaTakesakiReport {
        max_commutator,
        max_commutant_form,
        max_flow_residual,
        samples: samples.len(),
        pass,
    })
}

/// Matrix units `E_{μν}` of `B(H_d)`.
pub fn matrix_unit_basis(d: usize) -> Vec<ComplexMatrix> {
    (0..d)
        .flat_map(|i| (0..d).map(move |j| crate::matrix::matrix_unit(d, d, i, j)))
        .collect()
}

/// `‖S − J Δ^{1/2}‖` for a pair of states.
pub fn polar_residual(phi: &DensityMatrix, omega: &DensityMatrix) -> Result<f64> {
    let s = relative_s_matrix(phi, omega)?;
    let half = relative_modular_power(phi, omega, 0.5)?;
    let polar = modular_conjugation(phi.dim()).compose(&half);
    Ok(s.distance(&polar))
}

/// `‖Δ^{1/2}_{φ,ω} vec(A √D_ω)‖²`, which equals `φ(A A*)`.
pub fn quadratic_form(phi: &DensityMatrix, omega: &DensityMatrix, a: &ComplexMatrix) -> Result<f64> {
    let half = relative_modular_power(phi, omega, 0.5)?;
    let v = vec(&(a * omega.sqrt()));
    Ok(half.apply(&v).norm().powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{diag, hs_norm, is_unitary, matrix_unit, trace};
    use crate::random::{random_complex_matrix, random_density, seeded_rng};
    use crate::vec_ops::conjugate_vec;

    fn state(rng: &mut crate::random::SeededRng, d: usize) -> DensityMatrix {
        DensityMatrix::new(random_density(rng, d)).unwrap()
    }

    #[test]
    fn trivial_state_gives_s_equal_pk() {
        let m = DensityMatrix::maximally_mixed(3);
        let s = relative_s_matrix(&m, &m).unwrap();
        let mut rng = seeded_rng(1);
        let x = random_complex_matrix(&mut rng, 3, 3);
        assert!(s.apply(&vec(&x)).distance(&vec(&x.adjoint())) < 1e-14);
        let pk = swap_operator(3).apply(&conjugate_vec(&vec(&x)));
        assert!(s.apply(&vec(&x)).distance(&pk) < 1e-14);
        let delta = relative_modular_operator(&m, &m).unwrap();
        assert!(delta.distance(&SuperOperator::identity(3)) < 1e-14);
    }

    #[test]
    fn s_maps_m_omega_to_m_star_omega() {
        let mut rng = seeded_rng(2);
        let d = state(&mut rng, 3);
        let s = relative_s_matrix(&d, &d).unwrap();
        let root = d.sqrt();
        for x in matrix_unit_basis(3) {
            let lhs = s.apply(&vec(&(&x * &root)));
            let rhs = vec(&(x.adjoint() * &root));
            assert!(lhs.distance(&rhs) < 1e-12);
        }
    }

    #[test]
    fn s_matches_kronecker_closed_form() {
        let mut rng = seeded_rng(3);
        let phi = state(&mut rng, 3);
        let omega = state(&mut rng, 3);
        let s = relative_s_matrix(&phi, &omega).unwrap();
        // vec(A X* B) = (A ⊗ Bᵀ) vec(X*) = (A ⊗ Bᵀ) P conj(vec X)
        let closed = kron(&omega.power(-0.5).unwrap(), &phi.sqrt().transpose()) * swap_operator(3).matrix;
        assert!(s.distance(&SuperOperator::antilinear(3, closed)) < 1e-10);
    }

    #[test]
    fn diagonal_relative_modular_operator() {
        let (a, b) = (0.3, 0.8);
        let phi = DensityMatrix::from_diagonal(&[a, 1.0 - a]).unwrap();
        let omega = DensityMatrix::from_diagonal(&[b, 1.0 - b]).unwrap();
        let expected = diag(&[a / b, a / (1.0 - b), (1.0 - a) / b, (1.0 - a) / (1.0 - b)]);
        let from_s = relative_modular_from_s(&phi, &omega).unwrap();
        assert!(hs_norm(&(&from_s.matrix - &expected)) < 1e-14);
        let closed = relative_modular_operator(&phi, &omega).unwrap();
        assert!(hs_norm(&(&closed.matrix - &expected)) < 1e-14);
    }

    #[test]
    fn half_power_maps_omega_to_phi() {
        let mut rng = seeded_rng(4);
        let phi = state(&mut rng, 3);
        let omega = state(&mut rng, 3);
        let half = relative_modular_power(&phi, &omega, 0.5).unwrap();
        let image = half.apply(&vec(&omega.sqrt()));
        assert!(image.distance(&vec(&phi.sqrt())) < 1e-10);
    }

    #[test]
    fn singular_omega_rejected() {
        let phi = DensityMatrix::maximally_mixed(2);
        let omega = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        assert!(matches!(relative_s_matrix(&phi, &omega), Err(Error::SingularState { .. })));
        assert!(matches!(
            relative_modular_operator(&phi, &omega),
            Err(Error::SingularState { .. })
        ));
        assert!(StandardForm::new(omega).is_err());
    }

    #[test]
    fn conjugation_cases() {
        let j = modular_conjugation(2);
        let mut rng = seeded_rng(5);
        let h = crate::random::random_hermitian(&mut rng, 2);
        assert!(j.apply(&vec(&h)).distance(&vec(&h)) < 1e-15);
        assert_eq!(j.apply(&vec(&matrix_unit(2, 2, 0, 1))), vec(&matrix_unit(2, 2, 1, 0)));
        assert!(j.compose(&j).distance(&SuperOperator::identity(2)) < 1e-15);
    }

    #[test]
    fn polar_decomposition_and_products() {
        let mut rng = seeded_rng(6);
        for d in 2..=4 {
            let phi = state(&mut rng, d);
            let omega = state(&mut rng, d);
            assert!(polar_residual(&phi, &omega).unwrap() < 1e-10);

            let s = relative_s_matrix(&phi, &omega).unwrap();
            let f = relative_f_matrix(&phi, &omega).unwrap();
            let delta = relative_modular_operator(&phi, &omega).unwrap();
            assert!(f.compose(&s).distance(&delta) < 1e-10);
            assert!(relative_modular_from_s(&phi, &omega).unwrap().distance(&delta) < 1e-10);
            // S F inverts the reversed pair: Δ_{ω,φ}^{-1}
            let reversed_inv = relative_modular_power(&omega, &phi, -1.0).unwrap();
            assert!(s.compose(&f).distance(&reversed_inv) < 1e-9);

            let s_abs = relative_s_matrix(&omega, &omega).unwrap();
            let f_abs = relative_f_matrix(&omega, &omega).unwrap();
            let inv = relative_modular_power(&omega, &omega, -1.0).unwrap();
            assert!(s_abs.compose(&f_abs).distance(&inv) < 1e-9);
        }
    }

    #[test]
    fn quadratic_form_identity() {
        let mut rng = seeded_rng(7);
        let phi = state(&mut rng, 3);
        let omega = state(&mut rng, 3);
        for _ in 0..5 {
            let a = random_complex_matrix(&mut rng, 3, 3);
            let lhs = quadratic_form(&phi, &omega, &a).unwrap();
            let rhs = trace(&(phi.matrix() * &a * a.adjoint())).re;
            assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1.0));
        }
    }

    #[test]
    fn flow_cases() {
        let mut rng = seeded_rng(8);
        let omega = state(&mut rng, 3);
        let a = random_complex_matrix(&mut rng, 3, 3);
        assert!(hs_norm(&(modular_flow(&omega, &a, 0.0).unwrap() - &a)) < 1e-14);
        let commuting = omega.power(2.0).unwrap();
        assert!(hs_norm(&(modular_flow(&omega, &commuting, 2.5).unwrap() - &commuting)) < 1e-12);

        // dense oracle: spectral calculus of the d² x d² matrix Δ
        let delta = relative_modular_operator(&omega, &omega).unwrap();
        let dense = delta.imaginary_power(1.3).unwrap();
        let via_dense = dense.apply(&vec(&a));
        let closed = vec(&modular_flow(&omega, &a, 1.3).unwrap());
        assert!(via_dense.distance(&closed) < 1e-8, "{}", via_dense.distance(&closed));

        let b = random_complex_matrix(&mut rng, 3, 3);
        let prod = modular_flow(&omega, &(&a * &b), 0.9).unwrap();
        let split = modular_flow(&omega, &a, 0.9).unwrap() * modular_flow(&omega, &b, 0.9).unwrap();
        assert!(hs_norm(&(prod - split)) < 1e-12);
        let adj = modular_flow(&omega, &a.adjoint(), 0.9).unwrap();
        assert!(hs_norm(&(adj - modular_flow(&omega, &a, 0.9).unwrap().adjoint())) < 1e-12);
    }

    #[test]
    fn cocycle_cases() {
        let mut rng = seeded_rng(9);
        let phi = state(&mut rng, 3);
        let omega = state(&mut rng, 3);
        assert!(hs_norm(&(connes_cocycle(&omega, &omega, 1.7).unwrap() - identity(3))) < 1e-12);
        assert!(hs_norm(&(connes_cocycle(&phi, &omega, 0.0).unwrap() - identity(3))) < 1e-14);
        let u = connes_cocycle(&phi, &omega, 0.7).unwrap();
        assert!(is_unitary(&u, 1e-12));
        let dense = relative_modular_unitary(&phi, &omega, 0.7)
            .unwrap()
            .compose(&relative_modular_unitary(&omega, &omega, -0.7).unwrap());
        assert!(dense.distance(&left_representation(&u)) < 1e-10);
    }

    #[test]
    fn tomita_takesaki_on_matrix_units() {
        let omega = DensityMatrix::new(random_density(&mut seeded_rng(10), 2)).unwrap();
        let report = verify_tomita_takesaki(&omega, &matrix_unit_basis(2), &[0.3, 1.0]).unwrap();
        assert!(report.pass);
        assert!(report.max_commutator < 1e-12);
        assert!(report.max_flow_residual < 1e-12);

        let flat = DensityMatrix::maximally_mixed(3);
        let report = verify_tomita_takesaki(&flat, &matrix_unit_basis(3), &[1.0]).unwrap();
        assert_eq!(report.max_commutator, 0.0);
        assert_eq!(report.max_commutant_form, 0.0);
    }

    #[test]
    fn standard_form_from_unnormalized_vector() {
        let form = StandardForm::from_cyclic_vector(&vec(&identity(3))).unwrap();
        assert!((form.scale - 3f64.sqrt()).abs() < 1e-14);
        assert!(form.modular_operator().unwrap().distance(&SuperOperator::identity(3)) < 1e-12);
        let s = form.s_operator().unwrap();
        assert!(s.distance(&form.modular_conjugation()) < 1e-12);
        assert!(is_cyclic_separating(&form.omega_vec, 1e-10).unwrap());
    }
}
