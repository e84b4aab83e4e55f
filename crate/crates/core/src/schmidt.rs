//! Schmidt decomposition of bipartite vectors through the SVD of `unvec(u)`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::matrix::c64;
use crate::vec_ops::{unvec, BipartiteVector};

/// `u = Σ s_i |y_i⟩ ⊗ |z_i⟩` with `s_i > 0` descending.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<DVector<c64>>,
    /// Conjugated right singular vectors of `unvec(u)`.
    pub right_vectors: Vec<DVector<c64>>,
    pub rank: usize,
}

impl SchmidtData {
    pub fn reconstruct(&self) -> BipartiteVector {
        let dl = self.left_vectors.first().map_or(0, |v| v.len());
        let dr = self.right_vectors.first().map_or(0, |v| v.len());
        let mut out = BipartiteVector::zeros(dl, dr);
        for ((s, y), z) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            out = out.add(&BipartiteVector::product(y, z).scale(c64::new(*s, 0.0)));
        }
        out
    }
}

pub fn schmidt_decompose(u: &BipartiteVector, rank_tol: f64) -> Result<SchmidtData> {
    if u.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let svd = unvec(u).svd(true, true);
    let left = svd.u.expect("left singular vectors requested");
    let right_t = svd.v_t.expect("right singular vectors requested");
    let s_max = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));

    let mut order: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > rank_tol * s_max)
        .collect();
    // descending value; ties broken on the phase of the first left component
    let phase = |k: usize| left[(0, k)].arg();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .total_cmp(&svd.singular_values[i])
            .then(phase(i).total_cmp(&phase(j)))
    });

    let coefficients = order.iter().map(|&k| svd.singular_values[k]).collect();
    let left_vectors = order.iter().map(|&k| left.column(k).into_owned()).collect();
    // A = Σ s_k y_k x_k*, and vec(|y⟩⟨x|) = y ⊗ conj(x); row k of V* is x_k*.
    let right_vectors = order
        .iter()
        .map(|&k| right_t.row(k).transpose().into_owned())
        .collect();
    Ok(SchmidtData {
        rank: order.len(),
        coefficients,
        left_vectors,
        right_vectors,
    })
}

pub fn schmidt_rank(u: &BipartiteVector, rank_tol: f64) -> Result<usize> {
    if u.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(crate::matrix::matrix_rank(&unvec(u), rank_tol))
}

/// A vector in `H_d ⊗ H_d` is cyclic and separating for `B(H_d) ⊗ 1` iff its
/// Schmidt rank is `d`, i.e. `unvec(u)` is nonsingular.
pub fn is_cyclic_separating(u: &BipartiteVector, rank_tol: f64) -> Result<bool> {
    if u.dim_left != u.dim_right {
        return Err(Error::DimensionMismatch {
            left: u.dim_left,
            right: u.dim_right,
        });
    }
    Ok(schmidt_rank(u, rank_tol)? == u.dim_left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{diag, identity, RANK_TOL};
    use crate::random::{random_bipartite, random_unit_vector, random_unitary, seeded_rng};
    use crate::vec_ops::{kron_apply_vec, vec};

    #[test]
    fn maximally_entangled() {
        let u = vec(&identity(2)).scale(c64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let data = schmidt_decompose(&u, RANK_TOL).unwrap();
        assert_eq!(data.rank, 2);
        for s in &data.coefficients {
            assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        }
        assert!(data.reconstruct().distance(&u) < 1e-14);
    }

    #[test]
    fn product_vector_has_rank_one() {
        let mut rng = seeded_rng(1);
        let a = random_unit_vector(&mut rng, 3).scale(2.0);
        let b = random_unit_vector(&mut rng, 2).scale(0.5);
        let u = BipartiteVector::product(&a, &b);
        let data = schmidt_decompose(&u, RANK_TOL).unwrap();
        assert_eq!(data.rank, 1);
        assert!((data.coefficients[0] - 1.0).abs() < 1e-14);
        assert!(data.reconstruct().distance(&u) < 1e-14);
        assert_eq!(schmidt_rank(&u, RANK_TOL).unwrap(), 1);
    }

    #[test]
    fn diagonal_coefficients() {
        let u = vec(&diag(&[0.9_f64.sqrt(), 0.1_f64.sqrt()]));
        let data = schmidt_decompose(&u, RANK_TOL).unwrap();
        assert!((data.coefficients[0] - 0.9_f64.sqrt()).abs() < 1e-15);
        assert!((data.coefficients[1] - 0.1_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_rejected() {
        let z = BipartiteVector::zeros(2, 2);
        assert!(matches!(schmidt_decompose(&z, RANK_TOL), Err(Error::ZeroVector)));
        assert!(matches!(schmidt_rank(&z, RANK_TOL), Err(Error::ZeroVector)));
    }

    #[test]
    fn ranks_of_constructed_vectors() {
        assert_eq!(schmidt_rank(&vec(&identity(4)), RANK_TOL).unwrap(), 4);
        let proj = diag(&[1.0, 1.0, 0.0, 0.0]);
        let mut rng = seeded_rng(3);
        let u = random_unitary(&mut rng, 4);
        let rotated = &u * proj * u.adjoint();
        assert_eq!(schmidt_rank(&vec(&rotated), RANK_TOL).unwrap(), 2);
    }

    #[test]
    fn cyclic_separating_cases() {
        assert!(is_cyclic_separating(&vec(&identity(3)), RANK_TOL).unwrap());
        let mut rng = seeded_rng(4);
        let p = BipartiteVector::product(&random_unit_vector(&mut rng, 3), &random_unit_vector(&mut rng, 3));
        assert!(!is_cyclic_separating(&p, RANK_TOL).unwrap());
        let d = crate::random::random_density(&mut rng, 3);
        let omega = vec(&crate::matrix::sqrt_psd(&d).unwrap());
        assert!(is_cyclic_separating(&omega, RANK_TOL).unwrap());
        let rect = random_bipartite(&mut rng, 2, 3);
        assert!(matches!(
            is_cyclic_separating(&rect, RANK_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rank_invariant_under_local_unitaries() {
        let mut rng = seeded_rng(5);
        for k in 1..=3 {
            let g = crate::random::random_complex_matrix(&mut rng, 3, k)
                * crate::random::random_complex_matrix(&mut rng, k, 3);
            let u = random_unitary(&mut rng, 3);
            let v = random_unitary(&mut rng, 3);
            let moved = kron_apply_vec(&u, &v, &g).unwrap();
            assert_eq!(schmidt_rank(&moved, RANK_TOL).unwrap(), k);
        }
    }
}
