//! Recover the symmetry operation behind a conjugation-like map, if there is
//! one.

use nalgebra::{DMatrix, DVector};

use crate::herm::{spectral_decompose, HermitianOperator};
use crate::map::{ad_symmetry, HermMap};
use crate::proj::is_projection;
use crate::symmetry::{Flag, SymmetryOp};
use crate::C64;

/// Lenient internal gate for the rank-one projection test on basis images;
/// the strict check is the final residual comparison.
const PROJ_GATE_TOL: f64 = 1e-6;
const COLUMN_NORM_GUARD: f64 = 0.1;
const VOTE_GUARD: f64 = 1e-3;
const GRAM_EIGEN_GUARD: f64 = 1e-12;

fn polar_unitary(v: &DMatrix<C64>) -> Option<DMatrix<C64>> {
    let n = v.nrows();
    let gram = v.adjoint() * v;
    let se = gram.symmetric_eigen();
    let mut inv_sqrt = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        let lambda = se.eigenvalues[i];
        if lambda <= GRAM_EIGEN_GUARD {
            return None;
        }
        let col = se.eigenvectors.column(i);
        inv_sqrt += (col * col.adjoint()).scale(1.0 / lambda.sqrt());
    }
    Some(v * inv_sqrt)
}

/// Try to write `f` as conjugation by a single unitary or antiunitary
/// operation and return it with the Frobenius residual between `f` and the
/// reconstructed conjugation. Returns `None` unless the residual is below
/// `tol`.
///
/// The reconstruction reads the candidate off the images of a spanning set:
/// the images of the diagonal matrix units fix the candidate columns up to
/// phase, the images of the symmetric pair units transport the first column
/// phase to the others, and the sign of the response to the antisymmetric
/// pair units votes unitary versus antiunitary. The assembled matrix is
/// snapped to the closest unitary before the residual test.
pub fn extract_symmetry(f: &HermMap, tol: f64) -> Option<(SymmetryOp, f64)> {
    let n = f.dim();

    let mut first = None;
    for j in 0..n {
        let img = f.apply(&HermitianOperator::basis_projector(n, j));
        if is_projection(&img, PROJ_GATE_TOL) != Some(1) {
            return None;
        }
        if j == 0 {
            first = Some(spectral_decompose(&img).vector(0).into_owned());
        }
    }
    let f1: DVector<C64> = first.expect("n >= 2 so the loop ran");

    let mut columns: Vec<DVector<C64>> = Vec::with_capacity(n);
    columns.push(f1.clone());
    let mut votes: Vec<f64> = Vec::with_capacity(n - 1);
    for j in 1..n {
        let y = f.apply(&HermitianOperator::pair_real(n, 0, j));
        let u_j = y.matrix() * &f1;
        if u_j.norm() <= COLUMN_NORM_GUARD {
            return None;
        }
        let w = f.apply(&HermitianOperator::pair_imag(n, 0, j));
        let s_j = u_j.dotc(&(w.matrix() * &f1));
        votes.push(s_j.im);
        columns.push(u_j);
    }

    let all_negative = votes.iter().all(|&im| im < -VOTE_GUARD);
    let all_positive = votes.iter().all(|&im| im > VOTE_GUARD);
    let flag = if all_negative {
        Flag::Unitary
    } else if all_positive {
        Flag::Antiunitary
    } else {
        return None;
    };

    let assembled = DMatrix::from_columns(&columns);
    let cand = polar_unitary(&assembled)?;
    let sym = SymmetryOp::new(flag, cand).ok()?;
    let residual = ad_symmetry(&sym).distance(f);
    if residual < tol {
        Some((sym, residual))
    } else {
        None
    }
}

/// Distance between two symmetry operations modulo global phase, measured
/// as the Frobenius distance of their conjugation superoperators (which the
/// phase cannot see). Operations with different flags are incomparable.
pub fn compare_up_to_phase(s1: &SymmetryOp, s2: &SymmetryOp) -> Option<f64> {
    if s1.flag() != s2.flag() || s1.dim() != s2.dim() {
        return None;
    }
    Some(ad_symmetry(s1).distance(&ad_symmetry(s2)))
}
