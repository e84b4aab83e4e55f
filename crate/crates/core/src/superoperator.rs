//! Dense `d² x d²` operators on vec'd `d x d` matrices, linear or antilinear.
//!
//! An antilinear operator with matrix `M` acts as `v ↦ M·conj(v)`. Whenever
//! the left factor of a composition is antilinear, the right factor's matrix
//! is conjugated.

use crate::error::{Error, Result};
use crate::matrix::{hs_norm, identity, matrix_unit, ComplexMatrix, SpectralDecomposition};
use crate::vec_ops::{conjugate_vec, unvec, vec, BipartiteVector};

#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    pub d: usize,
    pub matrix: ComplexMatrix,
    pub antilinear: bool,
}

impl SuperOperator {
    pub fn linear(d: usize, matrix: ComplexMatrix) -> Self {
        assert_eq!(matrix.shape(), (d * d, d * d));
        SuperOperator {
            d,
            matrix,
            antilinear: false,
        }
    }

    pub fn antilinear(d: usize, matrix: ComplexMatrix) -> Self {
        assert_eq!(matrix.shape(), (d * d, d * d));
        SuperOperator {
            d,
            matrix,
            antilinear: true,
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::linear(d, identity(d * d))
    }

    /// Assembles an operator column by column from its action on the matrix units `E_{μν}`.
    ///
    /// For an antilinear map the closure is still evaluated on the (real) basis
    /// and the result is applied as `M·conj(v)`.
    pub fn from_basis_action(
        d: usize,
        antilinear: bool,
        action: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    ) -> Self {
        let n = d * d;
        let mut m = ComplexMatrix::zeros(n, n);
        for mu in 0..d {
            for nu in 0..d {
                let image = vec(&action(&matrix_unit(d, d, mu, nu)));
                m.set_column(mu * d + nu, &image.amplitudes);
            }
        }
        SuperOperator {
            d,
            matrix: m,
            antilinear,
        }
    }

    pub fn apply(&self, v: &BipartiteVector) -> BipartiteVector {
        let input = if self.antilinear {
            conjugate_vec(v)
        } else {
            v.clone()
        };
        BipartiteVector::from_dvector(self.d, self.d, &self.matrix * input.amplitudes)
    }

    pub fn apply_matrix(&self, x: &ComplexMatrix) -> ComplexMatrix {
        unvec(&self.apply(&vec(x)))
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &SuperOperator) -> SuperOperator {
        assert_eq!(self.d, rhs.d, "superoperators act on different spaces");
        let right = if self.antilinear {
            rhs.matrix.map(|z| z.conj())
        } else {
            rhs.matrix.clone()
        };
        SuperOperator {
            d: self.d,
            matrix: &self.matrix * right,
            antilinear: self.antilinear ^ rhs.antilinear,
        }
    }

    /// Hilbert-space adjoint. For antilinear `v ↦ M conj(v)` this is `v ↦ Mᵀ conj(v)`,
    /// characterised by `⟨x, S y⟩ = conj⟨S* x, y⟩`.
    pub fn adjoint(&self) -> SuperOperator {
        SuperOperator {
            d: self.d,
            matrix: if self.antilinear {
                self.matrix.transpose()
            } else {
                self.matrix.adjoint()
            },
            antilinear: self.antilinear,
        }
    }

    /// Entrywise distance between matrices; infinite if the linearity types differ.
    pub fn distance(&self, other: &SuperOperator) -> f64 {
        if self.antilinear != other.antilinear || self.d != other.d {
            return f64::INFINITY;
        }
        hs_norm(&(&self.matrix - &other.matrix))
    }

    /// Real power of a linear PSD superoperator by dense spectral calculus.
    pub fn psd_power(&self, p: f64) -> Result<SuperOperator> {
        self.require_linear()?;
        Ok(Self::linear(self.d, crate::matrix::psd_power(&self.matrix, p)?))
    }

    /// `Δ^{it}` of a linear positive definite superoperator by dense spectral calculus.
    pub fn imaginary_power(&self, t: f64) -> Result<SuperOperator> {
        self.require_linear()?;
        let spec = SpectralDecomposition::new(&self.matrix)?;
        Ok(Self::linear(self.d, crate::matrix::imaginary_power(&spec, t)?))
    }

    /// Eigenvalues of a linear Hermitian superoperator, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        self.require_linear()?;
        Ok(SpectralDecomposition::new(&self.matrix)?.eigenvalues)
    }

    fn require_linear(&self) -> Result<()> {
        if self.antilinear {
            return Err(Error::ShapeMismatch(
                "spectral calculus needs a linear superoperator".into(),
            ));
        }
        Ok(())
    }
}
