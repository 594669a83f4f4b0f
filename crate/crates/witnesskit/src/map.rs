//! Linear maps on Hermitian matrices, represented as real matrices acting on
//! basis coordinates.

use nalgebra::DMatrix;

use crate::basis::{devectorize, vectorize, HermBasis};
use crate::herm::HermitianOperator;
use crate::states::DensityOperator;
use crate::symmetry::{Flag, SymmetryOp};
use crate::{Error, Result};

/// A real-linear map on n-by-n Hermitian matrices, stored as its n^2-by-n^2
/// real matrix in the orthonormal Hermitian basis. Column j holds the
/// coordinates of the image of basis element j, so `apply` is a
/// matrix-vector product conjugated by the coordinate isometry.
#[derive(Clone, Debug)]
pub struct HermMap {
    n: usize,
    mat: DMatrix<f64>,
}

impl HermMap {
    pub fn from_matrix(n: usize, mat: DMatrix<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        if mat.nrows() != n * n || mat.ncols() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: mat.nrows().max(mat.ncols()),
            });
        }
        Ok(Self { n, mat })
    }

    /// Build the matrix of a map given as a closure, one basis element at a
    /// time.
    pub fn from_action(n: usize, f: impl Fn(&HermitianOperator) -> HermitianOperator) -> Result<Self> {
        let basis = HermBasis::new(n)?;
        let mut mat = DMatrix::zeros(n * n, n * n);
        for j in 0..basis.len() {
            let img = f(basis.element(j));
            assert_eq!(img.dim(), n, "map changed dimension");
            mat.set_column(j, &vectorize(&img));
        }
        Ok(Self { n, mat })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            mat: DMatrix::identity(n * n, n * n),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn apply(&self, a: &HermitianOperator) -> HermitianOperator {
        assert_eq!(a.dim(), self.n, "operator dimension mismatch");
        let y = &self.mat * vectorize(a);
        devectorize(&y).expect("coordinate vector has valid length")
    }

    /// self after other: (self.compose(other))(A) = self(other(A)).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            mat: &self.mat * &other.mat,
        })
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat).norm()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self
            .mat
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    pub fn determinant(&self) -> f64 {
        self.mat.clone().lu().determinant()
    }
}

/// Smallest singular value relative to the largest exceeds `tol`.
pub fn is_injective(f: &HermMap, tol: f64) -> bool {
    let sv = f.singular_values();
    let max = sv[0];
    let min = *sv.last().expect("non-empty");
    max > 0.0 && min > tol * max
}

/// Inverse map; fails with the relative smallest singular value when the map
/// is numerically singular.
pub fn inverse(f: &HermMap, tol: f64) -> Result<HermMap> {
    let sv = f.singular_values();
    let max = sv[0];
    let min = *sv.last().expect("non-empty");
    let ratio = if max > 0.0 { min / max } else { 0.0 };
    if !(ratio > tol) {
        return Err(Error::SingularMap(ratio));
    }
    let inv = f
        .mat
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::SingularMap(ratio))?;
    Ok(HermMap { n: f.n, mat: inv })
}

/// trace(f(A)) = trace(A) for every A, checked per basis element.
pub fn is_trace_preserving(f: &HermMap, tol: f64) -> bool {
    let s = (f.n as f64).sqrt();
    let dim = f.n * f.n;
    (0..dim).all(|j| {
        let expect = if j == 0 { 1.0 } else { 0.0 };
        (s * (f.mat[(0, j)] - expect)).abs() <= tol
    })
}

/// f(Id) = Id within `tol` in Frobenius norm.
pub fn is_unital(f: &HermMap, tol: f64) -> bool {
    let id = HermitianOperator::identity(f.n);
    f.apply(&id).distance(&id) <= tol
}

/// Conjugation superoperator of a symmetry operation.
pub fn ad_symmetry(s: &SymmetryOp) -> HermMap {
    HermMap::from_action(s.dim(), |a| s.apply_to(a)).expect("symmetry dimension is valid")
}

/// The trace-complement map on 2k-by-2k Hermitian matrices:
/// A -> trace(A)/k * Id - A.
pub fn theta(k: usize) -> Result<HermMap> {
    let n = 2 * k;
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let kf = k as f64;
    HermMap::from_action(n, move |a| {
        &HermitianOperator::identity(n).scaled(a.trace() / kf) - a
    })
}

/// The trace-complement map composed after conjugation by `s`:
/// A -> trace(A)/k * Id - s(A). `s` must act on dimension 2k.
pub fn theta_u(k: usize, s: &SymmetryOp) -> Result<HermMap> {
    let n = 2 * k;
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    if s.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: s.dim(),
        });
    }
    theta(k)?.compose(&ad_symmetry(s))
}

/// A -> trace(A) * rho, the trace functional followed by a fixed state.
pub fn trace_to_state(rho: &DensityOperator) -> HermMap {
    HermMap::from_action(rho.dim(), |a| rho.op().scaled(a.trace()))
        .expect("state dimension is valid")
}

/// Remove the trace-coupled drift of a map: B(A) = f(A) - trace(A)/n * (f(Id) - Id).
///
/// B is always unital, agrees with f exactly whenever f is already unital,
/// and collapses any map of the form g + trace(.)*C with unital g back to g.
/// The rank parameter `k` describes the intended operating regime
/// (projections of rank 1 <= k < n) and is validated, but the correction
/// itself does not depend on it.
pub fn rank_complement_transform(f: &HermMap, k: usize) -> Result<HermMap> {
    let n = f.dim();
    if k == 0 || k >= n {
        return Err(Error::InvalidRank { k, n });
    }
    let id = HermitianOperator::identity(n);
    let shift = &f.apply(&id) - &id;
    let nf = n as f64;
    HermMap::from_action(n, move |a| &f.apply(a) - &shift.scaled(a.trace() / nf))
}

/// Distance between the k = 1 trace-complement map and the antiunitary
/// conjugation A -> Y conj(A) Y with Y the imaginary Pauli matrix. The two
/// coincide, which pins the qubit case of the trace-complement family to an
/// honest symmetry operation.
pub fn reduction_map_identity_check() -> f64 {
    let th = theta(1).expect("k = 1 is valid");
    let y = HermitianOperator::pauli_y().matrix().clone();
    let s = SymmetryOp::new(Flag::Antiunitary, y).expect("pauli matrix is unitary");
    th.distance(&ad_symmetry(&s))
}
