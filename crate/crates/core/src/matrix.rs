//! Dense complex matrices and the Hermitian spectral calculus everything else
//! is built on.
//!
//! Eigenvalues are always returned in ascending order so that decompositions
//! are reproducible run to run.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

#[allow(non_camel_case_types)]
pub type c64 = Complex64;

/// Dense `rows x cols` complex matrix.
pub type ComplexMatrix = DMatrix<c64>;

/// Relative tolerance used for Hermiticity and positivity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Relative threshold below which an eigenvalue or singular value counts as zero.
pub const RANK_TOL: f64 = 1e-10;

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// Matrix unit `E_{ij}` of shape `rows x cols`.
pub fn matrix_unit(rows: usize, cols: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    m[(i, j)] = c64::new(1.0, 0.0);
    m
}

pub fn diag(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| c64::new(v, 0.0)),
    ))
}

/// Builds a matrix from row-major entries.
pub fn from_row_major(rows: usize, cols: usize, entries: &[c64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols, "entries length must be rows * cols");
    ComplexMatrix::from_row_slice(rows, cols, entries)
}

/// Row-major copy of the entries.
pub fn to_row_major(a: &ComplexMatrix) -> Vec<c64> {
    let mut out = Vec::with_capacity(a.nrows() * a.ncols());
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            out.push(a[(i, j)]);
        }
    }
    out
}

/// Hilbert–Schmidt (Frobenius) norm.
pub fn hs_norm(a: &ComplexMatrix) -> f64 {
    a.norm()
}

/// Hilbert–Schmidt inner product `Tr(A* B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> c64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn trace(a: &ComplexMatrix) -> c64 {
    a.diagonal().iter().sum()
}

/// Operator `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// Hermitian part `(A + A*) / 2`.
pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// `‖A − A*‖_HS / max(1, ‖A‖_HS)`.
pub fn hermitian_defect(a: &ComplexMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    hs_norm(&(a - a.adjoint())) / hs_norm(a).max(1.0)
}

pub fn ensure_square(a: &ComplexMatrix) -> Result<usize> {
    if a.is_square() {
        Ok(a.nrows())
    } else {
        Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        })
    }
}

pub fn ensure_hermitian(a: &ComplexMatrix) -> Result<()> {
    ensure_square(a)?;
    let defect = hermitian_defect(a);
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

/// Eigen-decomposition `A = V Λ V*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        ensure_hermitian(a)?;
        Ok(Self::of_hermitian_part(a))
    }

    /// Decomposes the Hermitian part of `a` without checking the anti-Hermitian remainder.
    pub(crate) fn of_hermitian_part(a: &ComplexMatrix) -> Self {
        let eig = hermitian_part(a).symmetric_eigen();
        let n = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V diag(f(λ)) V*` for a complex-valued scalar function.
    pub fn map_complex(&self, f: impl Fn(f64) -> c64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let fk = f(lambda);
            scaled.column_mut(k).iter_mut().for_each(|x| *x *= fk);
        }
        scaled * v.adjoint()
    }

    /// `V diag(f(λ)) V*` for a real scalar function; the result is Hermitian.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        hermitian_part(&self.map_complex(|x| c64::new(f(x), 0.0)))
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }
}

/// Where a scalar function is defined on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Real,
    /// `[0, ∞)`. Eigenvalues within round-off of zero are clamped to zero.
    NonNegative,
    /// `(0, ∞)`.
    Positive,
}

impl Domain {
    fn admit(self, lambda: f64, scale: f64, function: &'static str) -> Result<f64> {
        match self {
            Domain::Real => Ok(lambda),
            Domain::NonNegative => {
                if lambda >= 0.0 {
                    Ok(lambda)
                } else if lambda >= -HERMITIAN_TOL * scale {
                    Ok(0.0)
                } else {
                    Err(Error::Domain {
                        function,
                        eigenvalue: lambda,
                    })
                }
            }
            Domain::Positive => {
                if lambda > 0.0 {
                    Ok(lambda)
                } else {
                    Err(Error::Domain {
                        function,
                        eigenvalue: lambda,
                    })
                }
            }
        }
    }
}

/// Spectral scalar calculus restricted to a domain.
pub fn spectral_map(
    spec: &SpectralDecomposition,
    domain: Domain,
    function: &'static str,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix> {
    let scale = spec
        .eigenvalues
        .iter()
        .fold(1.0_f64, |acc, x| acc.max(x.abs()));
    let admitted = spec
        .eigenvalues
        .iter()
        .map(|&l| domain.admit(l, scale, function))
        .collect::<Result<Vec<_>>>()?;
    let clamped = SpectralDecomposition {
        eigenvalues: admitted,
        eigenvectors: spec.eigenvectors.clone(),
    };
    Ok(clamped.map(f))
}

/// Computes `f(A) = V f(Λ) V*` for Hermitian `A`.
pub fn apply_spectral_function(
    a: &ComplexMatrix,
    domain: Domain,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix> {
    let spec = SpectralDecomposition::new(a)?;
    spectral_map(&spec, domain, "spectral function", f)
}

/// Principal real power of a PSD matrix. Negative exponents need a positive definite input.
pub fn psd_power(a: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    let spec = SpectralDecomposition::new(a)?;
    if p < 0.0 {
        spectral_map(&spec, Domain::Positive, "negative power", |x| x.powf(p))
    } else {
        spectral_map(&spec, Domain::NonNegative, "power", |x| x.powf(p))
    }
}

pub fn sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_power(a, 0.5)
}

/// Power of a PSD matrix in which eigenvalues at or below `rank_tol · λ_max` count as
/// exact zeros; `s = 0` yields the support projection.
pub fn power_on_support(a: &ComplexMatrix, s: f64, rank_tol: f64) -> Result<ComplexMatrix> {
    if s < 0.0 {
        return Err(Error::BadExponent(s));
    }
    let spec = SpectralDecomposition::new(a)?;
    let scale = spec.max_eigenvalue().max(0.0);
    if spec.min_eigenvalue() < -HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: spec.min_eigenvalue(),
        });
    }
    let cutoff = rank_tol * scale;
    Ok(spec.map(|x| if x <= cutoff { 0.0 } else { x.powf(s) }))
}

/// Support projection of a PSD matrix.
pub fn support_projection(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    power_on_support(a, 0.0, rank_tol)
}

/// Natural logarithm of a positive definite matrix.
pub fn log_pd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = SpectralDecomposition::new(a)?;
    spectral_map(&spec, Domain::Positive, "log", f64::ln)
}

pub fn exp_hermitian(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    apply_spectral_function(a, Domain::Real, f64::exp)
}

/// `A^{it} = exp(it log A)` for positive definite `A`.
pub fn imaginary_power(spec: &SpectralDecomposition, t: f64) -> Result<ComplexMatrix> {
    if let Some(&bad) = spec.eigenvalues.iter().find(|&&x| x <= 0.0) {
        return Err(Error::Domain {
            function: "imaginary power",
            eigenvalue: bad,
        });
    }
    Ok(spec.map_complex(|x| c64::new(0.0, t * x.ln()).exp()))
}

/// `exp(i t H)` for Hermitian `H`.
pub fn unitary_exp(spec: &SpectralDecomposition, t: f64) -> ComplexMatrix {
    spec.map_complex(|x| c64::new(0.0, t * x).exp())
}

/// Splits Hermitian `T` into orthogonal PSD parts with `T = T⁺ − T⁻`.
pub fn jordan_decompose(t: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let spec = SpectralDecomposition::new(t)?;
    Ok(jordan_from_spectrum(&spec))
}

pub(crate) fn jordan_from_spectrum(spec: &SpectralDecomposition) -> (ComplexMatrix, ComplexMatrix) {
    let plus = spec.map(|x| x.max(0.0));
    let minus = spec.map(|x| (-x).max(0.0));
    (plus, minus)
}

/// `|T|` for Hermitian `T`.
pub fn abs_hermitian(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    apply_spectral_function(t, Domain::Real, f64::abs)
}

/// Singular values, descending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Schatten `p`-norm; pass `f64::INFINITY` for the operator norm.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::BadExponent(p));
    }
    let sv = singular_values(a);
    if p.is_infinite() {
        return Ok(sv.first().copied().unwrap_or(0.0));
    }
    if p == 1.0 {
        return Ok(sv.iter().sum());
    }
    if p == 2.0 {
        return Ok(hs_norm(a));
    }
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0.0);
    }
    // scaled to avoid overflow for large p
    let sum: f64 = sv.iter().map(|s| (s / top).powf(p)).sum();
    Ok(top * sum.powf(1.0 / p))
}

/// Trace norm `Tr|A|`.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).iter().sum()
}

/// PSD test: Hermitian within `tol` and `λ_min ≥ −tol · max(1, ‖A‖_HS)`.
pub fn check_psd(a: &ComplexMatrix, tol: f64) -> bool {
    if !a.is_square() {
        return false;
    }
    if hermitian_defect(a) > tol {
        return false;
    }
    let spec = SpectralDecomposition::of_hermitian_part(a);
    spec.min_eigenvalue() >= -tol * hs_norm(a).max(1.0)
}

pub fn ensure_psd(a: &ComplexMatrix) -> Result<()> {
    ensure_hermitian(a)?;
    let spec = SpectralDecomposition::of_hermitian_part(a);
    if spec.min_eigenvalue() < -HERMITIAN_TOL * hs_norm(a).max(1.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: spec.min_eigenvalue(),
        });
    }
    Ok(())
}

/// Numerical rank at a threshold relative to the largest singular value.
pub fn matrix_rank(a: &ComplexMatrix, rank_tol: f64) -> usize {
    let sv = singular_values(a);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_tol * top).count()
}

pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    u.is_square() && hs_norm(&(u.adjoint() * u - identity(u.nrows()))) <= tol
}
