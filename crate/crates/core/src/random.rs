//! Seeded generators for the random instances used by tests and campaigns.
//!
//! All randomness flows through [`ChaCha8Rng`], so a seed fixes every sampled
//! instance on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{c64, diag, hermitian_part, identity, trace, ComplexMatrix};
use crate::vec_ops::BipartiteVector;

/// Shift added before normalizing random faithful states; bounds the condition number.
pub const FAITHFUL_SHIFT: f64 = 1e-3;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for sample `index` of a campaign.
pub fn substream(seed: u64, stream: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(index) << 20);
    rng
}

/// Standard complex normal: real and imaginary parts `N(0, 1/2)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> c64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let entries: Vec<c64> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::from_row_slice(rows, cols, &entries)
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    hermitian_part(&random_complex_matrix(rng, d, d))
}

/// `G G* / ‖G G*‖_HS` with complex Gaussian `G`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, d, d);
    let p = hermitian_part(&(&g * g.adjoint()));
    let n = p.norm();
    p.unscale(n)
}

/// PSD matrix of rank at most `rank`.
pub fn random_low_rank_psd<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, d, rank);
    hermitian_part(&(&g * g.adjoint()))
}

/// Faithful density matrix `(G G* + ε·1) / Tr(·)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, d, d);
    let p = hermitian_part(&(&g * g.adjoint())) + identity(d).scale(FAITHFUL_SHIFT);
    let tr = trace(&p).re;
    p.unscale(tr)
}

/// Haar-distributed unitary via QR with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, d, d);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let rk = r[(k, k)];
        let phase = if rk.norm() > 0.0 { rk / rk.norm() } else { c64::new(1.0, 0.0) };
        q.column_mut(k).iter_mut().for_each(|x| *x *= phase);
    }
    q
}

/// `U diag(spectrum) U*` with Haar-random `U`.
pub fn random_with_spectrum<R: Rng + ?Sized>(rng: &mut R, spectrum: &[f64]) -> ComplexMatrix {
    let u = random_unitary(rng, spectrum.len());
    hermitian_part(&(&u * diag(spectrum) * u.adjoint()))
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> nalgebra::DVector<c64> {
    let v = nalgebra::DVector::from_iterator(d, (0..d).map(|_| complex_normal(rng)));
    let n = v.norm();
    v.unscale(n)
}

pub fn random_bipartite<R: Rng + ?Sized>(rng: &mut R, dim_left: usize, dim_right: usize) -> BipartiteVector {
    let amps: Vec<c64> = (0..dim_left * dim_right).map(|_| complex_normal(rng)).collect();
    BipartiteVector::new(dim_left, dim_right, amps)
}
