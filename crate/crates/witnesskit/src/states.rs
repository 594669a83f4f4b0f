//! Density operators: positive semidefinite, trace one.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::herm::{spectral_decompose, HermitianOperator};
use crate::proj::Projection;
use crate::sample;
use crate::{C64, Error, Result};

#[derive(Clone, Debug)]
pub struct DensityOperator {
    op: HermitianOperator,
}

impl DensityOperator {
    /// Validate trace one and positive semidefiniteness within `tol`.
    pub fn try_new(op: HermitianOperator, tol: f64) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::NotDensity(format!("trace is {tr}, expected 1")));
        }
        let min = spectral_decompose(&op).min_value();
        if min < -tol {
            return Err(Error::NotDensity(format!(
                "smallest eigenvalue {min} is negative"
            )));
        }
        Ok(Self { op })
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &nalgebra::DMatrix<C64> {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

/// P / rank(P): the state spread evenly over the range of a projection.
pub fn uniform_state(p: &Projection) -> DensityOperator {
    DensityOperator {
        op: p.op().scaled(1.0 / p.rank() as f64),
    }
}

/// If the state equals P / k for a rank-k projection P within `tol`, return
/// k: the spectrum must consist of k eigenvalues at 1/k and n - k at zero.
pub fn is_uniform_state(rho: &DensityOperator, tol: f64) -> Option<usize> {
    let n = rho.dim();
    let values = spectral_decompose(rho.op()).values().to_vec();
    'outer: for k in 1..=n {
        let level = 1.0 / k as f64;
        for (i, &v) in values.iter().enumerate() {
            let target = if i < k { level } else { 0.0 };
            if (v - target).abs() > tol {
                continue 'outer;
            }
        }
        return Some(k);
    }
    None
}

/// Normalize a semidefinite operator onto the state space: A / trace(A).
///
/// Works for negative semidefinite input too (both signs cancel). Rejects
/// the zero operator and operators with eigenvalues of both signs beyond
/// `tol`.
pub fn pi_project(a: &HermitianOperator, tol: f64) -> Result<DensityOperator> {
    let spectrum = spectral_decompose(a);
    let max = spectrum.max_value();
    let min = spectrum.min_value();
    if max <= tol && min >= -tol {
        return Err(Error::ZeroInput);
    }
    if max > tol && min < -tol {
        return Err(Error::IndefiniteInput);
    }
    Ok(DensityOperator {
        op: a.scaled(1.0 / a.trace()),
    })
}

/// Random state of rank at most k: flat random weights on k levels, rotated
/// by a Haar unitary.
pub fn random_rank_k_state(n: usize, k: usize, seed: u64) -> Result<DensityOperator> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidRank { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = vec![0.0f64; k];
    let mut total = 0.0;
    for w in weights.iter_mut() {
        let e: f64 = rng.sample(Exp1);
        *w = e;
        total += e;
    }
    for w in weights.iter_mut() {
        *w /= total;
    }
    let u = sample::random_haar_unitary(n, sample::derive_seed(seed, 0x5157));
    let mut mat = nalgebra::DMatrix::<C64>::zeros(n, n);
    for (i, &w) in weights.iter().enumerate() {
        let col = u.column(i);
        mat += (col * col.adjoint()).scale(w);
    }
    Ok(DensityOperator {
        op: HermitianOperator::new(mat)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_projection;
    use nalgebra::DMatrix;

    fn diag(entries: &[f64]) -> HermitianOperator {
        let n = entries.len();
        HermitianOperator::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(entries[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
        .unwrap()
    }

    #[test]
    fn uniform_state_roundtrip() {
        let p = random_projection(4, 2, 3).unwrap();
        let rho = uniform_state(&p);
        assert!((rho.op().trace() - 1.0).abs() < 1e-12);
        assert_eq!(is_uniform_state(&rho, 1e-8), Some(2));
    }

    #[test]
    fn maximally_mixed_is_uniform_full_rank() {
        let rho = DensityOperator::try_new(diag(&[0.25; 4]), 1e-10).unwrap();
        assert_eq!(is_uniform_state(&rho, 1e-8), Some(4));
    }

    #[test]
    fn skewed_state_is_not_uniform() {
        let rho = DensityOperator::try_new(diag(&[0.7, 0.3, 0.0]), 1e-10).unwrap();
        assert_eq!(is_uniform_state(&rho, 1e-8), None);
    }

    #[test]
    fn try_new_rejects_bad_inputs() {
        assert!(DensityOperator::try_new(diag(&[0.5, 0.2]), 1e-10).is_err());
        assert!(DensityOperator::try_new(diag(&[1.5, -0.5]), 1e-10).is_err());
    }

    #[test]
    fn pi_project_positive_and_negative_cones() {
        let rho = pi_project(&diag(&[2.0, 1.0, 1.0]), 1e-10).unwrap();
        assert!(rho.op().distance(&diag(&[0.5, 0.25, 0.25])) < 1e-14);
        let neg = pi_project(&diag(&[-2.0, -1.0, -1.0]), 1e-10).unwrap();
        assert!(neg.op().distance(&diag(&[0.5, 0.25, 0.25])) < 1e-14);
    }

    #[test]
    fn pi_project_rejects_indefinite_and_zero() {
        assert!(matches!(
            pi_project(&diag(&[1.0, -1.0, 0.0]), 1e-10),
            Err(Error::IndefiniteInput)
        ));
        assert!(matches!(
            pi_project(&HermitianOperator::zeros(3), 1e-10),
            Err(Error::ZeroInput)
        ));
    }

    #[test]
    fn random_state_rank_and_normalization() {
        for k in 1..=3 {
            let rho = random_rank_k_state(4, k, 17).unwrap();
            assert!((rho.op().trace() - 1.0).abs() < 1e-12);
            let spectrum = spectral_decompose(rho.op());
            assert!(spectrum.min_value() > -1e-12);
            for &v in &spectrum.values()[k..] {
                assert!(v.abs() < 1e-10, "k={k} spectrum {:?}", spectrum.values());
            }
        }
        assert!(random_rank_k_state(4, 0, 1).is_err());
        assert!(random_rank_k_state(4, 5, 1).is_err());
    }

    #[test]
    fn random_state_is_deterministic() {
        let a = random_rank_k_state(3, 2, 99).unwrap();
        let b = random_rank_k_state(3, 2, 99).unwrap();
        assert_eq!(a.matrix().as_slice(), b.matrix().as_slice());
    }
}
