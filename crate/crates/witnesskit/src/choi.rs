//! Choi matrix of a map on Hermitian matrices and the complete positivity
//! test it supports.

use nalgebra::DMatrix;

use crate::herm::HermitianOperator;
use crate::map::HermMap;
use crate::C64;

/// The n^2-by-n^2 block matrix whose (j, k) block is the image of the matrix
/// unit E_jk under the complexification of the map. Hermitian because the
/// map sends Hermitian to Hermitian.
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    n: usize,
    mat: DMatrix<C64>,
}

impl ChoiMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Eigenvalues sorted descending. The matrix is Hermitian by
    /// construction, so they are real.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self
            .eigenvalues()
            .last()
            .expect("choi matrix is never empty")
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.mat - self.mat.adjoint()).norm()
    }
}

/// Assemble the Choi matrix. Each matrix unit E_jk splits as X + iY with
/// X = (E_jk + E_kj)/2 and Y = -i(E_jk - E_kj)/2 both Hermitian, so the
/// complexified map evaluates to f(X) + i f(Y).
pub fn choi(f: &HermMap) -> ChoiMatrix {
    let n = f.dim();
    let mut mat = DMatrix::<C64>::zeros(n * n, n * n);
    let i_unit = C64::new(0.0, 1.0);

    let mut put_block = |j: usize, k: usize, block: &DMatrix<C64>| {
        for a in 0..n {
            for b in 0..n {
                mat[(j * n + a, k * n + b)] = block[(a, b)];
            }
        }
    };

    for j in 0..n {
        let img = f.apply(&HermitianOperator::basis_projector(n, j));
        put_block(j, j, img.matrix());
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let fx = f.apply(&HermitianOperator::pair_real(n, j, k).scaled(0.5));
            let fy = f.apply(&HermitianOperator::pair_imag(n, j, k).scaled(-0.5));
            let upper = fx.matrix() + fy.matrix().map(|z| z * i_unit);
            let lower = upper.adjoint();
            put_block(j, k, &upper);
            put_block(k, j, &lower);
        }
    }
    ChoiMatrix { n, mat }
}

/// The map is completely positive iff its Choi matrix is positive
/// semidefinite; `tol` absorbs eigenvalue noise.
pub fn is_completely_positive(f: &HermMap, tol: f64) -> bool {
    choi(f).min_eigenvalue() >= -tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{ad_symmetry, theta, theta_u, trace_to_state, HermMap};
    use crate::sample::{random_haar_unitary, random_symmetry};
    use crate::states::random_rank_k_state;
    use crate::symmetry::{Flag, SymmetryOp};
    use nalgebra::DMatrix as DM;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn qubit_trace_complement_choi_is_explicit() {
        let j = choi(&theta(1).unwrap());
        let m = j.matrix();
        let mut expect = DM::<C64>::zeros(4, 4);
        expect[(1, 1)] = C64::new(1.0, 0.0);
        expect[(2, 2)] = C64::new(1.0, 0.0);
        expect[(0, 3)] = C64::new(-1.0, 0.0);
        expect[(3, 0)] = C64::new(-1.0, 0.0);
        assert!((m - expect).norm() < 1e-14);
        let ev = j.eigenvalues();
        let expect_ev = [1.0, 1.0, 1.0, -1.0];
        for (a, b) in ev.iter().zip(expect_ev.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((j.min_eigenvalue() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_map_choi_is_rank_one() {
        let j = choi(&HermMap::identity(3));
        let ev = j.eigenvalues();
        assert!((ev[0] - 3.0).abs() < 1e-12);
        for &v in &ev[1..] {
            assert!(v.abs() < 1e-12);
        }
        assert!(is_completely_positive(&HermMap::identity(3), 1e-10));
    }

    #[test]
    fn conjugations_are_completely_positive() {
        let u = SymmetryOp::new(Flag::Unitary, random_haar_unitary(3, 4)).unwrap();
        assert!(is_completely_positive(&ad_symmetry(&u), 1e-10));
    }

    #[test]
    fn trace_complement_family_is_not_completely_positive() {
        for k in 1..=3 {
            assert!(!is_completely_positive(&theta(k).unwrap(), 1e-10));
        }
        let f = theta_u(2, &crate::sample::random_symmetry(4, 8)).unwrap();
        assert!(!is_completely_positive(&f, 1e-10));
    }

    #[test]
    fn trace_to_state_choi_is_identity_tensor_state() {
        let rho = random_rank_k_state(3, 2, 5).unwrap();
        let f = trace_to_state(&rho);
        let j = choi(&f);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let expect = if a == b {
                            rho.matrix()[(c, d)]
                        } else {
                            C64::new(0.0, 0.0)
                        };
                        assert!((j.matrix()[(3 * a + c, 3 * b + d)] - expect).norm() < 1e-12);
                    }
                }
            }
        }
        assert!(is_completely_positive(&f, 1e-10));
    }

    #[test]
    fn mixed_unitary_channels_stay_completely_positive() {
        let n = 3;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..3 {
            let mut mat = nalgebra::DMatrix::<f64>::zeros(n * n, n * n);
            let mut weights = [0.0f64; 3];
            let mut total = 0.0;
            for w in weights.iter_mut() {
                *w = rng.random::<f64>() + 0.05;
                total += *w;
            }
            for &w in &weights {
                let u = random_haar_unitary(n, rng.random());
                let s = SymmetryOp::new(Flag::Unitary, u).unwrap();
                mat += ad_symmetry(&s).matrix() * (w / total);
            }
            let f = HermMap::from_matrix(n, mat).unwrap();
            assert!(is_completely_positive(&f, 1e-10));
        }
    }

    #[test]
    fn antiunitary_conjugation_is_not_completely_positive() {
        // With U = Id this is entrywise conjugation, whose complexification
        // is the transpose map; its Choi matrix is the swap operator with
        // eigenvalues +-1.
        let s = SymmetryOp::new(Flag::Antiunitary, DM::identity(3, 3)).unwrap();
        let j = choi(&ad_symmetry(&s));
        assert!((j.min_eigenvalue() + 1.0).abs() < 1e-12);
        let t = random_symmetry(3, 15);
        let jt = choi(&ad_symmetry(&t));
        match t.flag() {
            Flag::Antiunitary => assert!(jt.min_eigenvalue() < -0.5),
            Flag::Unitary => assert!(jt.min_eigenvalue() > -1e-12),
        }
    }

    #[test]
    fn choi_is_hermitian_for_arbitrary_maps() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let mat = nalgebra::DMatrix::<f64>::from_fn(9, 9, |_, _| rng.random::<f64>() - 0.5);
        let f = HermMap::from_matrix(3, mat).unwrap();
        assert!(choi(&f).hermiticity_defect() < 1e-13);
    }
}
