//! Multiplication superoperators.
//!
//! Two conventions coexist and are kept apart by name:
//! * [`BoxTimes`] `A ⊠ B` acts as `X ↦ A X B*` (note the adjoint);
//! * [`left_mult`] `L_A X = A X` and [`right_mult`] `R_B X = X B` (no adjoint).
//!
//! Operators are stored as their two factors and applied in `O(d³)`;
//! [`BoxTimes::to_dense`] exists for cross-checks only.

use crate::error::{Error, Result};
use crate::matrix::{apply_spectral_function, ensure_square, identity, ComplexMatrix, Domain};
use crate::vec_ops::kron;

/// `A ⊠ B : X ↦ A X B*`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxTimes {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

impl BoxTimes {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix) -> Self {
        BoxTimes { a, b }
    }

    pub fn identity(d: usize) -> Self {
        BoxTimes::new(identity(d), identity(d))
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        boxtimes_apply(self, x)
    }

    /// `(A₁⊠B₁)(A₂⊠B₂) = A₁A₂ ⊠ B₁B₂`.
    pub fn compose(&self, rhs: &BoxTimes) -> BoxTimes {
        BoxTimes::new(&self.a * &rhs.a, &self.b * &rhs.b)
    }

    /// Adjoint for the Hilbert–Schmidt inner product: `A* ⊠ B*`.
    pub fn adjoint(&self) -> BoxTimes {
        BoxTimes::new(self.a.adjoint(), self.b.adjoint())
    }

    /// `A⁻¹ ⊠ B⁻¹`, if both factors are invertible.
    pub fn inverse(&self) -> Option<BoxTimes> {
        Some(BoxTimes::new(
            self.a.clone().try_inverse()?,
            self.b.clone().try_inverse()?,
        ))
    }

    /// Dense matrix on row-major `vec`: `A ⊗ conj(B)`.
    pub fn to_dense(&self) -> ComplexMatrix {
        kron(&self.a, &self.b.map(|z| z.conj()))
    }
}

pub fn boxtimes_apply(op: &BoxTimes, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if op.a.ncols() != x.nrows() || op.b.ncols() != x.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "A is {}x{}, B is {}x{}, X is {}x{}",
            op.a.nrows(),
            op.a.ncols(),
            op.b.nrows(),
            op.b.ncols(),
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(&op.a * x * op.b.adjoint())
}

/// `L_A = A ⊠ 1`.
pub fn left_mult(a: &ComplexMatrix) -> Result<BoxTimes> {
    let d = ensure_square(a)?;
    Ok(BoxTimes::new(a.clone(), identity(d)))
}

/// `R_B = 1 ⊠ B*`.
pub fn right_mult(b: &ComplexMatrix) -> Result<BoxTimes> {
    let d = ensure_square(b)?;
    Ok(BoxTimes::new(identity(d), b.adjoint()))
}

/// A left or right multiplication by a fixed matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplication {
    Left(ComplexMatrix),
    Right(ComplexMatrix),
}

impl Multiplication {
    pub fn to_boxtimes(&self) -> Result<BoxTimes> {
        match self {
            Multiplication::Left(a) => left_mult(a),
            Multiplication::Right(b) => right_mult(b),
        }
    }
}

/// Functional calculus `f(L_A) = L_{f(A)}` and `f(R_A) = R_{f(A)}` for Hermitian `A`.
pub fn superop_function(
    op: &Multiplication,
    domain: Domain,
    f: impl Fn(f64) -> f64,
) -> Result<BoxTimes> {
    match op {
        Multiplication::Left(a) => left_mult(&apply_spectral_function(a, domain, f)?),
        Multiplication::Right(b) => right_mult(&apply_spectral_function(b, domain, f)?),
    }
}

/// `Δ_{A,B} = L_A R_B⁻¹`, i.e. `X ↦ A X B⁻¹`.
pub fn relative_modular_boxtimes(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<BoxTimes> {
    let b_inv = b
        .clone()
        .try_inverse()
        .ok_or(Error::SingularState { ratio: 0.0 })?;
    Ok(left_mult(a)?.compose(&right_mult(&b_inv)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{diag, hs_inner, hs_norm, psd_power};
    use crate::random::{random_complex_matrix, random_density, random_hermitian, random_psd, seeded_rng};
    use crate::states::DensityMatrix;
    use crate::vec_ops::{unvec, vec};

    fn close(a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
        hs_norm(&(a - b)) < 1e-12
    }

    #[test]
    fn identity_acts_trivially() {
        let mut rng = seeded_rng(1);
        let x = random_complex_matrix(&mut rng, 3, 3);
        assert!(close(&BoxTimes::identity(3).apply(&x).unwrap(), &x));
        assert!(close(&left_mult(&identity(3)).unwrap().apply(&x).unwrap(), &x));
        assert!(close(&right_mult(&identity(3)).unwrap().apply(&x).unwrap(), &x));
    }

    #[test]
    fn composition_and_adjoint() {
        let mut rng = seeded_rng(2);
        let op1 = BoxTimes::new(random_complex_matrix(&mut rng, 3, 3), random_complex_matrix(&mut rng, 3, 3));
        let op2 = BoxTimes::new(random_complex_matrix(&mut rng, 3, 3), random_complex_matrix(&mut rng, 3, 3));
        let x = random_complex_matrix(&mut rng, 3, 3);
        let y = random_complex_matrix(&mut rng, 3, 3);
        let seq = op1.apply(&op2.apply(&x).unwrap()).unwrap();
        assert!(hs_norm(&(seq - op1.compose(&op2).apply(&x).unwrap())) < 1e-11);
        let lhs = hs_inner(&y, &op1.apply(&x).unwrap());
        let rhs = hs_inner(&op1.adjoint().apply(&y).unwrap(), &x);
        assert!((lhs - rhs).norm() < 1e-11);
        let dense = unvec(&crate::vec_ops::BipartiteVector::from_dvector(
            3,
            3,
            op1.to_dense() * vec(&x).amplitudes,
        ));
        assert!(hs_norm(&(dense - op1.apply(&x).unwrap())) < 1e-11);
        assert!(matches!(
            op1.apply(&random_complex_matrix(&mut rng, 2, 3)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn left_and_right_always_commute() {
        let mut rng = seeded_rng(3);
        let a = random_complex_matrix(&mut rng, 3, 3);
        let b = random_complex_matrix(&mut rng, 3, 3);
        assert!(hs_norm(&crate::matrix::commutator(&a, &b)) > 1e-3);
        let l = left_mult(&a).unwrap();
        let r = right_mult(&b).unwrap();
        let x = random_complex_matrix(&mut rng, 3, 3);
        let lr = l.apply(&r.apply(&x).unwrap()).unwrap();
        let rl = r.apply(&l.apply(&x).unwrap()).unwrap();
        assert!(hs_norm(&(lr - rl)) < 1e-12);
        assert!(close(&l.apply(&x).unwrap(), &(&a * &x)));
        assert!(close(&r.apply(&x).unwrap(), &(&x * &b)));
        assert!(matches!(
            left_mult(&random_complex_matrix(&mut rng, 2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn inverse_of_left_multiplication() {
        let mut rng = seeded_rng(4);
        let a = random_complex_matrix(&mut rng, 3, 3);
        let inv = left_mult(&a).unwrap().inverse().unwrap();
        let direct = left_mult(&a.clone().try_inverse().unwrap()).unwrap();
        assert!(hs_norm(&(&inv.a - &direct.a)) < 1e-12);
        let x = random_complex_matrix(&mut rng, 3, 3);
        let round = inv.apply(&left_mult(&a).unwrap().apply(&x).unwrap()).unwrap();
        assert!(hs_norm(&(round - x)) < 1e-10);
        assert!(left_mult(&diag(&[1.0, 0.0])).unwrap().inverse().is_none());
    }

    #[test]
    fn functional_calculus() {
        let mut rng = seeded_rng(5);
        let a = random_psd(&mut rng, 3);
        let same = superop_function(&Multiplication::Left(a.clone()), Domain::NonNegative, |t| t).unwrap();
        assert!(close(&same.a, &a));

        let root = superop_function(&Multiplication::Left(diag(&[4.0, 9.0])), Domain::NonNegative, f64::sqrt).unwrap();
        assert!(close(&root.a, &diag(&[2.0, 3.0])));
        assert!(close(&root.b, &identity(2)));

        // dense oracle: spectral power of the d² x d² matrix of L_A
        let dense_power = psd_power(&left_mult(&a).unwrap().to_dense(), 0.3).unwrap();
        let lifted = superop_function(&Multiplication::Left(a.clone()), Domain::NonNegative, |t| t.powf(0.3)).unwrap();
        assert!(hs_norm(&(dense_power - lifted.to_dense())) < 1e-10);

        let right = superop_function(&Multiplication::Right(a.clone()), Domain::NonNegative, |t| t.powf(0.7)).unwrap();
        let dense_right = psd_power(&right_mult(&a).unwrap().to_dense(), 0.7).unwrap();
        assert!(hs_norm(&(dense_right - right.to_dense())) < 1e-10);

        let neg = diag(&[1.0, -1.0]);
        assert!(matches!(
            superop_function(&Multiplication::Left(neg), Domain::NonNegative, f64::sqrt),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn positivity_and_self_adjointness() {
        let mut rng = seeded_rng(6);
        let a = random_psd(&mut rng, 4);
        let h = random_hermitian(&mut rng, 4);
        for _ in 0..10 {
            let x = random_complex_matrix(&mut rng, 4, 4);
            let y = random_complex_matrix(&mut rng, 4, 4);
            let l = left_mult(&a).unwrap();
            let r = right_mult(&a).unwrap();
            assert!(hs_inner(&x, &l.apply(&x).unwrap()).re >= -1e-12);
            assert!(hs_inner(&x, &r.apply(&x).unwrap()).re >= -1e-12);
            let lh = left_mult(&h).unwrap();
            let lhs = hs_inner(&y, &lh.apply(&x).unwrap());
            let rhs = hs_inner(&lh.apply(&y).unwrap(), &x);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn agrees_with_kronecker_modular_operator() {
        let mut rng = seeded_rng(7);
        let phi = DensityMatrix::new(random_density(&mut rng, 3)).unwrap();
        let omega = DensityMatrix::new(random_density(&mut rng, 3)).unwrap();
        let delta = crate::modular::relative_modular_operator(&phi, &omega).unwrap();
        let boxed = relative_modular_boxtimes(phi.matrix(), omega.matrix()).unwrap();
        for _ in 0..5 {
            let x = random_complex_matrix(&mut rng, 3, 3);
            let kron_route = delta.apply_matrix(&x);
            let lr_route = boxed.apply(&x).unwrap();
            assert!(hs_norm(&(kron_route - lr_route)) < 1e-9);
        }
    }
}
