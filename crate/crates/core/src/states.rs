//! Normal states on `B(H_d)` as density matrices, and their vector representatives.

use crate::error::{Error, Result};
use crate::matrix::{
    c64, ensure_square, hermitian_part, hs_norm, trace, ComplexMatrix,
    SpectralDecomposition, HERMITIAN_TOL,
};
use crate::vec_ops::{unvec, vec, BipartiteVector};

/// Default threshold for `λ_min / λ_max` below which a state counts as singular.
pub const SINGULARITY_TOL: f64 = 1e-12;

/// A PSD matrix with its cached spectrum; trace unconstrained.
#[derive(Debug, Clone)]
pub struct PositiveFunctional {
    matrix: ComplexMatrix,
    spectrum: SpectralDecomposition,
}

impl PositiveFunctional {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        ensure_square(&matrix)?;
        crate::matrix::ensure_hermitian(&matrix)?;
        let matrix = hermitian_part(&matrix);
        let spectrum = SpectralDecomposition::of_hermitian_part(&matrix);
        if spectrum.min_eigenvalue() < -HERMITIAN_TOL * hs_norm(&matrix).max(1.0) {
            return Err(Error::NotPsd {
                min_eigenvalue: spectrum.min_eigenvalue(),
            });
        }
        Ok(PositiveFunctional { matrix, spectrum })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `φ(1) = Tr D`.
    pub fn total_mass(&self) -> f64 {
        trace(&self.matrix).re
    }

    /// `φ(M) = Tr(D M)`.
    pub fn evaluate(&self, m: &ComplexMatrix) -> c64 {
        trace(&(&self.matrix * m))
    }

    pub fn is_faithful(&self, singularity_tol: f64) -> bool {
        let max = self.spectrum.max_eigenvalue();
        max > 0.0 && self.spectrum.min_eigenvalue() > singularity_tol * max
    }

    pub fn ensure_faithful(&self, singularity_tol: f64) -> Result<()> {
        if self.is_faithful(singularity_tol) {
            Ok(())
        } else {
            let max = self.spectrum.max_eigenvalue();
            Err(Error::SingularState {
                ratio: if max > 0.0 {
                    self.spectrum.min_eigenvalue() / max
                } else {
                    0.0
                },
            })
        }
    }

    /// Positive square root, from the cached spectrum.
    pub fn sqrt(&self) -> ComplexMatrix {
        self.spectrum.map(|x| x.max(0.0).sqrt())
    }

    /// Real power. Negative exponents require a faithful functional.
    pub fn power(&self, p: f64) -> Result<ComplexMatrix> {
        if p < 0.0 {
            self.ensure_faithful(SINGULARITY_TOL)?;
        }
        Ok(self.spectrum.map(|x| x.max(0.0).powf(p)))
    }

    /// `D^{it}`. Requires faithfulness.
    pub fn imaginary_power(&self, t: f64) -> Result<ComplexMatrix> {
        self.ensure_faithful(SINGULARITY_TOL)?;
        crate::matrix::imaginary_power(&self.spectrum, t)
    }
}

/// A positive functional of unit trace.
#[derive(Debug, Clone)]
pub struct DensityMatrix(PositiveFunctional);

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let functional = PositiveFunctional::new(matrix)?;
        let tr = functional.total_mass();
        if (tr - 1.0).abs() > HERMITIAN_TOL {
            return Err(Error::NotNormalized(tr));
        }
        Ok(DensityMatrix(functional))
    }

    pub fn from_diagonal(weights: &[f64]) -> Result<Self> {
        Self::new(crate::matrix::diag(weights))
    }

    /// `1/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::new(crate::matrix::identity(d).unscale(d as f64)).expect("1/d is a state")
    }

    pub fn as_functional(&self) -> &PositiveFunctional {
        &self.0
    }

    pub fn into_functional(self) -> PositiveFunctional {
        self.0
    }
}

impl std::ops::Deref for DensityMatrix {
    type Target = PositiveFunctional;

    fn deref(&self) -> &PositiveFunctional {
        &self.0
    }
}

/// `vec(√D)`, the purification lying in the natural cone.
pub fn purify(d: &DensityMatrix) -> BipartiteVector {
    vec(&d.sqrt())
}

/// `⟨Ω, (M ⊗ 1) Ω⟩`.
pub fn evaluate_state(omega_vec: &BipartiteVector, m: &ComplexMatrix) -> Result<c64> {
    if !m.is_square() || m.ncols() != omega_vec.dim_left {
        return Err(Error::ShapeMismatch(format!(
            "observable is {}x{}, vector has left factor {}",
            m.nrows(),
            m.ncols(),
            omega_vec.dim_left
        )));
    }
    let a = unvec(omega_vec);
    let image = vec(&(m * &a));
    Ok(omega_vec.inner(&image))
}

pub fn is_faithful(d: &DensityMatrix, singularity_tol: f64) -> bool {
    d.is_faithful(singularity_tol)
}

/// Trace norm `‖D₁ − D₂‖₁`.
pub fn functional_distance(phi1: &PositiveFunctional, phi2: &PositiveFunctional) -> Result<f64> {
    if phi1.dim() != phi2.dim() {
        return Err(Error::ShapeMismatch(format!(
            "functionals have dimensions {} and {}",
            phi1.dim(),
            phi2.dim()
        )));
    }
    let diff = phi1.matrix() - phi2.matrix();
    Ok(SpectralDecomposition::of_hermitian_part(&diff)
        .eigenvalues
        .iter()
        .map(|x| x.abs())
        .sum())
}
