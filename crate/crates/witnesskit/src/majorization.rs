//! Majorization ordering on probability vectors and the minimality of the
//! uniform rank-k spectrum.

use crate::herm::spectral_decompose;
use crate::sample::derive_seed;
use crate::states::random_rank_k_state;
use crate::{Error, Result};

const SUM_TOL: f64 = 1e-10;
const PREFIX_SLACK: f64 = 1e-12;

/// Spectrum of the state spread evenly over a rank-k subspace: k entries of
/// 1/k followed by zeros, length n.
pub fn uniform_vector(n: usize, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > n {
        return Err(Error::InvalidRank { k, n });
    }
    let mut v = vec![0.0; n];
    for x in v.iter_mut().take(k) {
        *x = 1.0 / k as f64;
    }
    Ok(v)
}

/// p majorizes q: with both sorted descending, every prefix sum of p is at
/// least the matching prefix sum of q. Both inputs must sum to one; vectors
/// of different lengths are compared by zero-padding the shorter one.
pub fn majorizes(p: &[f64], q: &[f64]) -> Result<bool> {
    let sp: f64 = p.iter().sum();
    if (sp - 1.0).abs() > SUM_TOL {
        return Err(Error::NotNormalized(sp));
    }
    let sq: f64 = q.iter().sum();
    if (sq - 1.0).abs() > SUM_TOL {
        return Err(Error::NotNormalized(sq));
    }
    let len = p.len().max(q.len());
    let mut ps = p.to_vec();
    let mut qs = q.to_vec();
    ps.resize(len, 0.0);
    qs.resize(len, 0.0);
    ps.sort_by(|a, b| b.total_cmp(a));
    qs.sort_by(|a, b| b.total_cmp(a));
    let mut acc_p = 0.0;
    let mut acc_q = 0.0;
    for i in 0..len {
        acc_p += ps[i];
        acc_q += qs[i];
        if acc_p < acc_q - PREFIX_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sample `trials` random states of rank at most k in dimension n and check
/// that every sampled spectrum majorizes the uniform rank-k vector, i.e.
/// that the evenly spread state sits at the bottom of the majorization
/// order on its rank class.
pub fn uniform_minimality_check(n: usize, k: usize, trials: usize, seed: u64) -> Result<bool> {
    let base = uniform_vector(n, k)?;
    for t in 0..trials {
        let rank = 1 + t % k;
        let rho = random_rank_k_state(n, rank, derive_seed(seed, t as u64))?;
        let spectrum = spectral_decompose(rho.op()).values().to_vec();
        if !majorizes(&spectrum, &base)? {
            return Ok(false);
        }
    }
    Ok(true)
}
