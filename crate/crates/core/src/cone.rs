//! The natural positive cone `P = {vec(X) : X ≥ 0}` of the standard form.

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{
    check_psd, hermitian_defect, jordan_from_spectrum, ComplexMatrix, SpectralDecomposition,
    HERMITIAN_TOL,
};
use crate::states::PositiveFunctional;
use crate::vec_ops::{unvec, vec, BipartiteVector};

/// Extreme rays sampled per dual-cone check.
pub const DUAL_SAMPLES: usize = 200;

/// A cone vector together with the PSD matrix it vectorizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeElement {
    pub vector: BipartiteVector,
    pub witness: ComplexMatrix,
}

impl ConeElement {
    pub fn new(witness: ComplexMatrix) -> Result<Self> {
        crate::matrix::ensure_psd(&witness)?;
        Ok(Self::from_psd_unchecked(witness))
    }

    fn from_psd_unchecked(witness: ComplexMatrix) -> Self {
        ConeElement {
            vector: vec(&witness),
            witness,
        }
    }

    pub fn zero(d: usize) -> Self {
        Self::from_psd_unchecked(ComplexMatrix::zeros(d, d))
    }
}

fn ensure_square_dims(v: &BipartiteVector) -> Result<usize> {
    if v.dim_left != v.dim_right {
        return Err(Error::DimensionMismatch {
            left: v.dim_left,
            right: v.dim_right,
        });
    }
    Ok(v.dim_left)
}

pub fn cone_contains(v: &BipartiteVector, tol: f64) -> Result<bool> {
    ensure_square_dims(v)?;
    Ok(check_psd(&unvec(v), tol))
}

/// The unique cone vector `vec(√D)` representing `ω`.
pub fn representative_of(omega: &PositiveFunctional) -> ConeElement {
    ConeElement::from_psd_unchecked(omega.sqrt())
}

/// Splits a `J`-fixed vector into orthogonal cone elements, `v = ζ₁ − ζ₂`.
pub fn decompose_j_fixed(v: &BipartiteVector) -> Result<(ConeElement, ConeElement)> {
    ensure_square_dims(v)?;
    let x = unvec(v);
    let defect = hermitian_defect(&x);
    if defect > HERMITIAN_TOL {
        return Err(Error::NotJFixed(defect));
    }
    let (plus, minus) = jordan_from_spectrum(&SpectralDecomposition::of_hermitian_part(&x));
    Ok((
        ConeElement::from_psd_unchecked(plus),
        ConeElement::from_psd_unchecked(minus),
    ))
}

/// `v = c₁ − c₂ + i c₃ − i c₄` from the Jordan parts of the Hermitian and
/// anti-Hermitian components of `unvec(v)`.
pub fn decompose_general(v: &BipartiteVector) -> Result<[ConeElement; 4]> {
    ensure_square_dims(v)?;
    let x = unvec(v);
    let re = (&x + x.adjoint()).scale(0.5);
    let im = (&x - x.adjoint()).map(|z| z * crate::matrix::c64::new(0.0, -0.5));
    let (c1, c2) = jordan_from_spectrum(&SpectralDecomposition::of_hermitian_part(&re));
    let (c3, c4) = jordan_from_spectrum(&SpectralDecomposition::of_hermitian_part(&im));
    Ok([c1, c2, c3, c4].map(ConeElement::from_psd_unchecked))
}

/// Recombines `c₁ − c₂ + i c₃ − i c₄`.
pub fn recombine(parts: &[ConeElement; 4]) -> BipartiteVector {
    let i = crate::matrix::c64::new(0.0, 1.0);
    parts[0]
        .vector
        .sub(&parts[1].vector)
        .add(&parts[2].vector.scale(i))
        .sub(&parts[3].vector.scale(i))
}

/// `min_u Re⟨v, vec(|u⟩⟨u|)⟩` over `samples` random unit vectors.
///
/// A negative value certifies `v ∉ P`, since `P` is self-dual.
pub fn dual_pairing_min<R: Rng + ?Sized>(v: &BipartiteVector, samples: usize, rng: &mut R) -> Result<f64> {
    let d = ensure_square_dims(v)?;
    let mut min = f64::INFINITY;
    for _ in 0..samples {
        let u = crate::random::random_unit_vector(rng, d);
        let ray = vec(&(&u * u.adjoint()));
        min = min.min(v.inner(&ray).re);
    }
    Ok(min)
}

/// `π(M) J π(M) J`, acting as `vec(X) ↦ vec(M X M*)`.
pub fn cone_action(m: &ComplexMatrix, v: &BipartiteVector) -> Result<BipartiteVector> {
    let d = ensure_square_dims(v)?;
    if m.shape() != (d, d) {
        return Err(Error::ShapeMismatch(format!(
            "operator is {}x{}, cone lives in dimension {d}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(vec(&(m * unvec(v) * m.adjoint())))
}
