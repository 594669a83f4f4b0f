//! Orthonormal Hermitian matrix basis ("ggm-v1" layout) and the isometry
//! between n-by-n Hermitian matrices and real coordinate vectors of length
//! n^2.
//!
//! Layout: index 0 is Id/sqrt(n); indices 1..n-1 are the diagonal traceless
//! elements D_l = (sum_{m<l} E_mm - l E_ll)/sqrt(l(l+1)); then for each index
//! pair j < k in lexicographic order the symmetric element
//! (E_jk + E_kj)/sqrt(2) followed by the antisymmetric element
//! i(E_jk - E_kj)/sqrt(2).

use nalgebra::DVector;

use crate::herm::HermitianOperator;
use crate::{C64, Error, Result};

/// Position of the symmetric element for the pair (j, k), j < k. The
/// antisymmetric partner sits at the next index.
pub fn pair_base_index(n: usize, j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < n);
    let p = j * n - j * (j + 1) / 2 + (k - j - 1);
    n + 2 * p
}

/// The full basis with all n^2 elements materialized.
#[derive(Clone, Debug)]
pub struct HermBasis {
    n: usize,
    elements: Vec<HermitianOperator>,
}

impl HermBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let mut elements = Vec::with_capacity(n * n);
        let inv_sqrt_n = 1.0 / (n as f64).sqrt();
        elements.push(HermitianOperator::identity(n).scaled(inv_sqrt_n));
        for l in 1..n {
            let s = 1.0 / ((l * (l + 1)) as f64).sqrt();
            let lf = l as f64;
            elements.push(
                HermitianOperator::from_fn(n, |i, j| {
                    if i != j {
                        C64::new(0.0, 0.0)
                    } else if i < l {
                        C64::new(s, 0.0)
                    } else if i == l {
                        C64::new(-lf * s, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .expect("n >= 2"),
            );
        }
        let inv_sqrt2 = 0.5f64.sqrt();
        for j in 0..n {
            for k in (j + 1)..n {
                elements.push(HermitianOperator::pair_real(n, j, k).scaled(inv_sqrt2));
                elements.push(HermitianOperator::pair_imag(n, j, k).scaled(inv_sqrt2));
            }
        }
        debug_assert_eq!(elements.len(), n * n);
        Ok(Self { n, elements })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn element(&self, i: usize) -> &HermitianOperator {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }
}

/// Dimension of the linear span of a set of coordinate vectors: the number
/// of singular values above `rel_tol` times the largest one.
pub fn span_dimension(vectors: &[DVector<f64>], rel_tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let stacked = nalgebra::DMatrix::from_columns(vectors);
    let sv = stacked.svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Coordinates of a Hermitian matrix in the basis, computed in closed form.
pub fn vectorize(a: &HermitianOperator) -> DVector<f64> {
    let n = a.dim();
    let mut x = DVector::zeros(n * n);
    x[0] = a.trace() / (n as f64).sqrt();
    for l in 1..n {
        let mut acc = 0.0;
        for m in 0..l {
            acc += a.entry(m, m).re;
        }
        acc -= l as f64 * a.entry(l, l).re;
        x[l] = acc / ((l * (l + 1)) as f64).sqrt();
    }
    let sqrt2 = 2.0f64.sqrt();
    let mut idx = n;
    for j in 0..n {
        for k in (j + 1)..n {
            let z = a.entry(j, k);
            x[idx] = sqrt2 * z.re;
            x[idx + 1] = sqrt2 * z.im;
            idx += 2;
        }
    }
    x
}

/// Inverse of `vectorize`. The length of `x` must be a perfect square n^2
/// with n >= 2.
pub fn devectorize(x: &DVector<f64>) -> Result<HermitianOperator> {
    let len = x.len();
    let n = (len as f64).sqrt().round() as usize;
    if n * n != len {
        return Err(Error::Format(format!(
            "coordinate vector length {len} is not a perfect square"
        )));
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }

    let mut diag = vec![x[0] / (n as f64).sqrt(); n];
    for l in 1..n {
        let s = x[l] / ((l * (l + 1)) as f64).sqrt();
        for d in diag.iter_mut().take(l) {
            *d += s;
        }
        diag[l] -= l as f64 * s;
    }

    let inv_sqrt2 = 0.5f64.sqrt();
    let mut mat = nalgebra::DMatrix::<C64>::zeros(n, n);
    for (m, d) in diag.iter().enumerate() {
        mat[(m, m)] = C64::new(*d, 0.0);
    }
    let mut idx = n;
    for j in 0..n {
        for k in (j + 1)..n {
            let z = C64::new(x[idx] * inv_sqrt2, x[idx + 1] * inv_sqrt2);
            mat[(j, k)] = z;
            mat[(k, j)] = z.conj();
            idx += 2;
        }
    }
    HermitianOperator::new(mat)
}
