//! The operator–vector correspondence on `Y ⊗ X`.
//!
//! Convention: `vec` stacks ROWS, so `vec(E_{μν}) = e_μ ⊗ e_ν` and component
//! `(μ, ν)` sits at index `μ·dX + ν`. With this choice
//!
//! ```text
//! (A ⊗ B) vec(X) = vec(A X Bᵀ)
//! ```
//!
//! Column stacking would move the transpose onto `A` and flip every Kronecker
//! formula downstream (for instance `Δ = D_φ ⊗ (D_ω⁻¹)ᵀ`), so do not mix the two.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};
use crate::superoperator::SuperOperator;

/// A vector in `Y ⊗ X` with explicit factor dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteVector {
    pub dim_left: usize,
    pub dim_right: usize,
    pub amplitudes: DVector<c64>,
}

impl BipartiteVector {
    pub fn new(dim_left: usize, dim_right: usize, amplitudes: Vec<c64>) -> Self {
        assert_eq!(
            amplitudes.len(),
            dim_left * dim_right,
            "amplitudes length must equal dim_left * dim_right"
        );
        BipartiteVector {
            dim_left,
            dim_right,
            amplitudes: DVector::from_vec(amplitudes),
        }
    }

    pub fn from_dvector(dim_left: usize, dim_right: usize, amplitudes: DVector<c64>) -> Self {
        assert_eq!(amplitudes.len(), dim_left * dim_right);
        BipartiteVector {
            dim_left,
            dim_right,
            amplitudes,
        }
    }

    pub fn zeros(dim_left: usize, dim_right: usize) -> Self {
        Self::from_dvector(dim_left, dim_right, DVector::zeros(dim_left * dim_right))
    }

    /// `u ⊗ v`.
    pub fn product(u: &DVector<c64>, v: &DVector<c64>) -> Self {
        let amps = u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
        Self::new(u.len(), v.len(), amps)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_left, self.dim_right)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &BipartiteVector) -> c64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn scale(&self, c: c64) -> Self {
        Self::from_dvector(self.dim_left, self.dim_right, &self.amplitudes * c)
    }

    pub fn sub(&self, other: &BipartiteVector) -> Self {
        Self::from_dvector(
            self.dim_left,
            self.dim_right,
            &self.amplitudes - &other.amplitudes,
        )
    }

    pub fn add(&self, other: &BipartiteVector) -> Self {
        Self::from_dvector(
            self.dim_left,
            self.dim_right,
            &self.amplitudes + &other.amplitudes,
        )
    }

    /// Tensor product of two bipartite vectors, viewed as a vector on
    /// `(Y₁⊗X₁) ⊗ (Y₂⊗X₂)`.
    pub fn tensor(&self, other: &BipartiteVector) -> BipartiteVector {
        let amps = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        BipartiteVector::new(self.len(), other.len(), amps)
    }

    /// Distance `‖self − other‖`.
    pub fn distance(&self, other: &BipartiteVector) -> f64 {
        (&self.amplitudes - &other.amplitudes).norm()
    }
}

/// Row-major stacking of a `dY x dX` matrix into `Y ⊗ X`.
pub fn vec(a: &ComplexMatrix) -> BipartiteVector {
    BipartiteVector::new(a.nrows(), a.ncols(), crate::matrix::to_row_major(a))
}

pub fn unvec(v: &BipartiteVector) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(v.dim_left, v.dim_right, v.amplitudes.as_slice())
}

/// Dense Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `(A ⊗ B) vec(X)`, evaluated as `vec(A X Bᵀ)` without forming the Kronecker product.
pub fn kron_apply_vec(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
) -> Result<BipartiteVector> {
    if a.ncols() != x.nrows() || b.ncols() != x.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "A is {}x{}, B is {}x{}, X is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols(),
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(vec(&(a * x * b.transpose())))
}

/// Which factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOut {
    /// Trace out `Y`; result lives on `X`.
    Left,
    /// Trace out `X`; result lives on `Y`.
    Right,
}

/// Partial trace of `|v⟩⟨w|`.
///
/// With `A = unvec(v)`, `B = unvec(w)`: tracing out `X` gives `A B*`, tracing
/// out `Y` gives `(B* A)ᵀ`.
pub fn partial_trace(
    v: &BipartiteVector,
    w: &BipartiteVector,
    side: TraceOut,
) -> Result<ComplexMatrix> {
    if v.dims() != w.dims() {
        return Err(Error::ShapeMismatch(format!(
            "vectors have dims {:?} and {:?}",
            v.dims(),
            w.dims()
        )));
    }
    let a = unvec(v);
    let b = unvec(w);
    Ok(match side {
        TraceOut::Right => &a * b.adjoint(),
        TraceOut::Left => (b.adjoint() * &a).transpose(),
    })
}

/// Reduced density matrix of `|v⟩⟨v|` on the left factor.
pub fn reduced_left(v: &BipartiteVector) -> ComplexMatrix {
    let a = unvec(v);
    &a * a.adjoint()
}

/// Swap `P(x ⊗ y) = y ⊗ x` on `H_d ⊗ H_d`, as a linear superoperator.
pub fn swap_operator(d: usize) -> SuperOperator {
    let n = d * d;
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            m[(j * d + i, i * d + j)] = c64::new(1.0, 0.0);
        }
    }
    SuperOperator::linear(d, m)
}

/// Entrywise complex conjugation in the standard basis.
pub fn conjugate_vec(v: &BipartiteVector) -> BipartiteVector {
    BipartiteVector::from_dvector(v.dim_left, v.dim_right, v.amplitudes.map(|z| z.conj()))
}

/// Vectorizes an operator on `(Y₁⊗Y₂) × (X₁⊗X₂)` factor by factor, so that
/// `vec(|m⟩⟨n| ⊗ |μ⟩⟨ν|) = |m n μ ν⟩`.
///
/// `dims = (dY₁, dX₁, dY₂, dX₂)`. The result lives on `(Y₁⊗X₁) ⊗ (Y₂⊗X₂)` and
/// satisfies `bipartite_vec(A ⊗ B) = vec(A) ⊗ vec(B)`.
pub fn bipartite_vec(m: &ComplexMatrix, dims: (usize, usize, usize, usize)) -> Result<BipartiteVector> {
    let (y1, x1, y2, x2) = dims;
    if m.nrows() != y1 * y2 || m.ncols() != x1 * x2 {
        return Err(Error::ShapeMismatch(format!(
            "operator is {}x{}, factors imply {}x{}",
            m.nrows(),
            m.ncols(),
            y1 * y2,
            x1 * x2
        )));
    }
    let mut amps = vec![c64::new(0.0, 0.0); y1 * y2 * x1 * x2];
    for mi in 0..y1 {
        for mu in 0..y2 {
            for ni in 0..x1 {
                for nu in 0..x2 {
                    // (m, μ, n, ν) -> (m, n, μ, ν)
                    let target = ((mi * x1 + ni) * y2 + mu) * x2 + nu;
                    amps[target] = m[(mi * y2 + mu, ni * x2 + nu)];
                }
            }
        }
    }
    Ok(BipartiteVector::new(y1 * x1, y2 * x2, amps))
}
