//! Hermitian operators and their canonical spectral decompositions.

use nalgebra::{DMatrix, DVector, DVectorView};

use crate::{C64, Error, Result};

/// Threshold below which a vector component is treated as negligible when
/// fixing eigenvector phases. Unit vectors always have a component of
/// modulus >= 1/sqrt(n), far above this.
const PHASE_FIX_TOL: f64 = 1e-8;

/// An n-by-n complex matrix equal to its conjugate transpose.
///
/// Construction symmetrizes the input, (M + M^dagger)/2, so the Hermiticity
/// invariant holds exactly afterwards.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    n: usize,
    mat: DMatrix<C64>,
}

impl HermitianOperator {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        Ok(Self::new_with_defect(mat)?.0)
    }

    /// Like `new`, but also reports the Frobenius norm of the skew part that
    /// symmetrization removed.
    pub fn new_with_defect(mat: DMatrix<C64>) -> Result<(Self, f64)> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let n = mat.nrows();
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let herm = (&mat + mat.adjoint()).scale(0.5);
        let defect = (&herm - &mat).norm();
        Ok((Self { n, mat: herm }, defect))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C64) -> Result<Self> {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            mat: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            mat: DMatrix::identity(n, n),
        }
    }

    /// Rank-one projector e_j e_j^dagger onto a computational basis vector.
    pub fn basis_projector(n: usize, j: usize) -> Self {
        let mut mat = DMatrix::zeros(n, n);
        mat[(j, j)] = C64::new(1.0, 0.0);
        Self { n, mat }
    }

    /// E_jk + E_kj for j != k.
    pub fn pair_real(n: usize, j: usize, k: usize) -> Self {
        let mut mat = DMatrix::zeros(n, n);
        mat[(j, k)] = C64::new(1.0, 0.0);
        mat[(k, j)] = C64::new(1.0, 0.0);
        Self { n, mat }
    }

    /// i(E_jk - E_kj) for j != k.
    pub fn pair_imag(n: usize, j: usize, k: usize) -> Self {
        let mut mat = DMatrix::zeros(n, n);
        mat[(j, k)] = C64::new(0.0, 1.0);
        mat[(k, j)] = C64::new(0.0, -1.0);
        Self { n, mat }
    }

    pub fn pauli_x() -> Self {
        Self::pair_real(2, 0, 1)
    }

    pub fn pauli_y() -> Self {
        // [[0, -i], [i, 0]]
        Self::pair_imag(2, 1, 0)
    }

    pub fn pauli_z() -> Self {
        let mut mat = DMatrix::zeros(2, 2);
        mat[(0, 0)] = C64::new(1.0, 0.0);
        mat[(1, 1)] = C64::new(-1.0, 0.0);
        Self { n: 2, mat }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// Trace; real because the diagonal of a Hermitian matrix is real.
    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            mat: self.mat.scale(c),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat).norm()
    }

    /// Frobenius norm of M*M - M, the idempotence defect.
    pub fn idempotence_defect(&self) -> f64 {
        (&self.mat * &self.mat - &self.mat).norm()
    }
}

impl std::ops::Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        HermitianOperator {
            n: self.n,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl std::ops::Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        HermitianOperator {
            n: self.n,
            mat: &self.mat - &rhs.mat,
        }
    }
}

/// Eigenvalues sorted descending with matching orthonormal eigenvectors as
/// matrix columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: DMatrix<C64>,
}

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &DMatrix<C64> {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> DVectorView<'_, C64> {
        self.vectors.column(i)
    }

    pub fn min_value(&self) -> f64 {
        *self.values.last().expect("spectrum is never empty")
    }

    pub fn max_value(&self) -> f64 {
        self.values[0]
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&v| C64::new(v, 0.0)),
        ));
        let mat = &self.vectors * diag * self.vectors.adjoint();
        HermitianOperator::new(mat).expect("reconstruction keeps dimensions")
    }
}

/// Multiply a vector by the phase that makes its first non-negligible
/// component real and positive.
fn fix_phase(v: &mut DVector<C64>) {
    for i in 0..v.len() {
        let z = v[i];
        if z.norm() > PHASE_FIX_TOL {
            let d = z.conj() / z.norm();
            for x in v.iter_mut() {
                *x *= d;
            }
            return;
        }
    }
}

fn lex_less(a: &DVector<C64>, b: &DVector<C64>) -> std::cmp::Ordering {
    for i in 0..a.len() {
        let ord = a[i]
            .re
            .total_cmp(&b[i].re)
            .then(a[i].im.total_cmp(&b[i].im));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// Canonical spectral decomposition: eigenvalues descending, each
/// eigenvector phase-normalized, exact ties ordered lexicographically.
pub fn spectral_decompose(h: &HermitianOperator) -> Spectrum {
    let n = h.dim();
    let se = h.matrix().clone().symmetric_eigen();
    let mut pairs: Vec<(f64, DVector<C64>)> = (0..n)
        .map(|i| {
            let mut v: DVector<C64> = se.eigenvectors.column(i).into_owned();
            fix_phase(&mut v);
            (se.eigenvalues[i], v)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| lex_less(&a.1, &b.1)));
    let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let vectors = DMatrix::from_columns(&pairs.iter().map(|p| p.1.clone()).collect::<Vec<_>>());
    Spectrum { values, vectors }
}
