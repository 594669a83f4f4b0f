//! Heuristic positivity testing: hunt for a pure state whose image under
//! the map fails to be positive semidefinite.

use nalgebra::{DMatrix, DVector};

use crate::herm::{spectral_decompose, HermitianOperator};
use crate::map::HermMap;
use crate::sample::{derive_seed, random_unit_vector};
use crate::C64;

const DESCENT_STEPS: usize = 200;
const DESCENT_STEP0: f64 = 0.2;
const DESCENT_DECAY: f64 = 0.98;
const FD_STEP: f64 = 1e-5;

/// Result of the search. `min_eigenvalue` is recomputed at `witness` after
/// refinement, so the pair is a self-contained certificate: feeding the
/// witness state back through the map reproduces the eigenvalue.
#[derive(Clone, Debug)]
pub struct Positivity {
    pub trials: usize,
    pub min_eigenvalue: f64,
    pub witness: DVector<C64>,
    pub violation: bool,
}

fn pure_state(v: &DVector<C64>) -> HermitianOperator {
    let n = v.len();
    let psi = v.unscale(v.norm());
    HermitianOperator::new(DMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj()))
        .expect("outer product is square")
}

fn objective(f: &HermMap, v: &DVector<C64>) -> f64 {
    spectral_decompose(&f.apply(&pure_state(v))).min_value()
}

/// Sample `trials` random pure states, keep the one whose image has the
/// smallest eigenvalue, then refine it by projected finite-difference
/// descent on the unit sphere. Reports a violation when the final
/// eigenvalue drops below -tol.
pub fn is_positive_heuristic(f: &HermMap, trials: usize, tol: f64, seed: u64) -> Positivity {
    let n = f.dim();
    let trials = trials.max(1);
    let mut best = random_unit_vector(n, derive_seed(seed, 0));
    let mut best_val = objective(f, &best);
    for t in 1..trials {
        let v = random_unit_vector(n, derive_seed(seed, t as u64));
        let val = objective(f, &v);
        if val < best_val {
            best_val = val;
            best = v;
        }
    }

    let mut step = DESCENT_STEP0;
    for _ in 0..DESCENT_STEPS {
        let mut grad = DVector::<C64>::zeros(n);
        for i in 0..n {
            for re_part in [true, false] {
                let bump = if re_part {
                    C64::new(FD_STEP, 0.0)
                } else {
                    C64::new(0.0, FD_STEP)
                };
                let mut plus = best.clone();
                plus[i] += bump;
                let mut minus = best.clone();
                minus[i] -= bump;
                let d = (objective(f, &plus) - objective(f, &minus)) / (2.0 * FD_STEP);
                grad[i] += if re_part {
                    C64::new(d, 0.0)
                } else {
                    C64::new(0.0, d)
                };
            }
        }
        let gnorm = grad.norm();
        if gnorm > 1e-14 {
            let cand = &best - grad.scale(step / gnorm);
            let cn = cand.norm();
            if cn > 1e-8 {
                let cand = cand.unscale(cn);
                let val = objective(f, &cand);
                if val < best_val {
                    best_val = val;
                    best = cand;
                }
            }
        }
        step *= DESCENT_DECAY;
    }

    let min_eigenvalue = objective(f, &best);
    Positivity {
        trials,
        min_eigenvalue,
        witness: best,
        violation: min_eigenvalue < -tol,
    }
}
