//! Orthogonal projections: recognition, complements, and the constructive
//! decomposition of rank-one projections over fixed-rank ones.

use nalgebra::{DMatrix, DVector};

use crate::herm::{spectral_decompose, HermitianOperator};
use crate::{C64, Error, Result};

const UNIT_TOL: f64 = 1e-8;
const GS_RESIDUAL_TOL: f64 = 1e-6;

/// A Hermitian idempotent together with its rank.
///
/// The rank is stored rather than recomputed so downstream code never
/// re-derives it from noisy eigenvalues.
#[derive(Clone, Debug)]
pub struct Projection {
    op: HermitianOperator,
    rank: usize,
}

impl Projection {
    /// Wrap an operator that is already known to be a rank-`rank` projection
    /// by construction. `n` is asserted against the operator dimension.
    pub fn trusted(op: HermitianOperator, rank: usize, n: usize) -> Self {
        debug_assert_eq!(op.dim(), n);
        Self { op, rank }
    }

    /// Validate an arbitrary Hermitian operator as a projection within
    /// `tol` and record its rank.
    pub fn try_new(op: HermitianOperator, tol: f64) -> Result<Self> {
        match is_projection(&op, tol) {
            Some(rank) => Ok(Self { op, rank }),
            None => Err(Error::NotProjection),
        }
    }

    /// Precondition shared by the samplers: 1 <= k < n.
    pub fn check_rank(n: usize, k: usize) -> Result<()> {
        if k == 0 || k >= n {
            return Err(Error::InvalidRank { k, n });
        }
        Ok(())
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        self.op.matrix()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

/// If every eigenvalue of `h` lies within `tol` of 0 or 1 and at least one
/// lies near 1, return the number near 1. The zero matrix returns `None`:
/// a projection with empty range is useless to every caller here.
pub fn is_projection(h: &HermitianOperator, tol: f64) -> Option<usize> {
    let spectrum = spectral_decompose(h);
    let mut ones = 0usize;
    for &v in spectrum.values() {
        if (v - 1.0).abs() <= tol {
            ones += 1;
        } else if v.abs() > tol {
            return None;
        }
    }
    if ones == 0 {
        None
    } else {
        Some(ones)
    }
}

/// Id - P, the projection onto the orthogonal complement of the range.
pub fn orthocomplement(p: &Projection) -> Result<Projection> {
    let n = p.dim();
    if p.rank() == n {
        return Err(Error::FullRankInput);
    }
    let op = &HermitianOperator::identity(n) - p.op();
    Ok(Projection::trusted(op, n - p.rank(), n))
}

/// Write the rank-one projection v v^dagger as a real combination of k+1
/// rank-k projections.
///
/// The unit vector v is extended to an orthonormal set {v = e'_0, ..., e'_k}
/// by Gram-Schmidt against the computational basis in index order (columns
/// whose residual is negligible are skipped). With Q_i the projection onto
/// the span of all e'_j except e'_i, the identity
///
///   v v^dagger = (1/k - 1) Q_0 + (1/k) (Q_1 + ... + Q_k)
///
/// holds exactly, which is what the returned (coefficient, projection) list
/// encodes, Q_0 first.
pub fn rank_one_decomposition(v: &DVector<C64>, k: usize) -> Result<Vec<(f64, Projection)>> {
    let n = v.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidRank { k, n });
    }
    let norm = v.norm();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NonUnitVector(norm));
    }

    let mut frame: Vec<DVector<C64>> = Vec::with_capacity(k + 1);
    frame.push(v.clone());
    for j in 0..n {
        if frame.len() == k + 1 {
            break;
        }
        let mut w: DVector<C64> = DVector::zeros(n);
        w[j] = C64::new(1.0, 0.0);
        for u in &frame {
            let c = u.dotc(&w);
            w -= u * c;
        }
        let wn = w.norm();
        if wn > GS_RESIDUAL_TOL {
            frame.push(w.unscale(wn));
        }
    }
    assert_eq!(frame.len(), k + 1, "basis extension always succeeds");

    let kf = k as f64;
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let mut mat: DMatrix<C64> = DMatrix::zeros(n, n);
        for (j, u) in frame.iter().enumerate() {
            if j != i {
                mat += u * u.adjoint();
            }
        }
        let op = HermitianOperator::new(mat)?;
        let coeff = if i == 0 { 1.0 / kf - 1.0 } else { 1.0 / kf };
        out.push((coeff, Projection::trusted(op, k, n)));
    }
    Ok(out)
}
