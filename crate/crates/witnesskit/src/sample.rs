//! Seeded random generation of unitaries, states, and projections.
//!
//! Every sampler takes an explicit u64 seed and drives a ChaCha8 stream, so
//! identical inputs produce bitwise-identical outputs on every platform.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::herm::HermitianOperator;
use crate::proj::Projection;
use crate::symmetry::{Flag, SymmetryOp};
use crate::{C64, Result};

/// Derive an independent child seed from a parent seed and a tag.
///
/// SplitMix64 finalizer applied to `seed XOR tag * golden-ratio-odd`; the
/// avalanche properties keep sibling streams uncorrelated.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn ginibre(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let inv_sqrt2 = 0.5f64.sqrt();
    let mut mat = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            mat[(i, j)] = C64::new(re * inv_sqrt2, im * inv_sqrt2);
        }
    }
    mat
}

fn haar_from_rng(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let qr = ginibre(n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    // Fix the phase ambiguity of QR so the distribution is exactly Haar.
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-distributed n-by-n unitary.
pub fn random_haar_unitary(n: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_from_rng(n, &mut rng)
}

/// Uniformly random unit vector (normalized complex Gaussian).
pub fn random_unit_vector(n: usize, seed: u64) -> DVector<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let inv_sqrt2 = 0.5f64.sqrt();
        let v = DVector::from_fn(n, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re * inv_sqrt2, im * inv_sqrt2)
        });
        let norm = v.norm();
        if norm > 1e-6 {
            return v.unscale(norm);
        }
    }
}

/// Random Hermitian matrix with Gaussian entries (GUE-like scaling).
pub fn random_hermitian(n: usize, seed: u64) -> HermitianOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(n, &mut rng);
    HermitianOperator::new(g).expect("ginibre matrix is square and n >= 2")
}

/// Rank-k projection with Haar-random range: U P_k U^dagger where P_k
/// projects onto the first k computational basis vectors.
pub fn random_projection(n: usize, k: usize, seed: u64) -> Result<Projection> {
    Projection::check_rank(n, k)?;
    let u = random_haar_unitary(n, seed);
    Ok(projection_from_columns(&u, 0, k))
}

/// Pair of projections with mutually orthogonal ranges of ranks k1 and k2
/// (k1 + k2 <= n), built from disjoint column blocks of one Haar unitary.
pub fn random_orthogonal_pair(
    n: usize,
    k1: usize,
    k2: usize,
    seed: u64,
) -> Result<(Projection, Projection)> {
    Projection::check_rank(n, k1)?;
    Projection::check_rank(n, k2)?;
    if k1 + k2 > n {
        return Err(crate::Error::InvalidRank { k: k1 + k2, n });
    }
    let u = random_haar_unitary(n, seed);
    Ok((
        projection_from_columns(&u, 0, k1),
        projection_from_columns(&u, k1, k2),
    ))
}

fn projection_from_columns(u: &DMatrix<C64>, start: usize, count: usize) -> Projection {
    let n = u.nrows();
    let block = u.columns(start, count);
    let mat = &block * block.adjoint();
    let op = HermitianOperator::new(mat).expect("projector is square");
    Projection::trusted(op, count, n)
}

/// Random symmetry operation: a Haar unitary, flagged unitary or antiunitary
/// with equal probability.
pub fn random_symmetry(n: usize, seed: u64) -> SymmetryOp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flag = if rng.random::<bool>() {
        Flag::Unitary
    } else {
        Flag::Antiunitary
    };
    let u = haar_from_rng(n, &mut rng);
    SymmetryOp::new(flag, u).expect("haar matrix is unitary to machine precision")
}
