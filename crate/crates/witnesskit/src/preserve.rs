//! Sampling checks: does a map carry rank-k projections to rank-k
//! projections, and does it keep orthogonal ranges orthogonal?

use crate::herm::spectral_decompose;
use crate::map::{inverse, is_injective, HermMap};
use crate::proj::{is_projection, Projection};
use crate::sample::{derive_seed, random_orthogonal_pair, random_projection};
use crate::Result;

const INJECTIVITY_TOL: f64 = 1e-10;

/// Outcome of `preserves_projections`. `pass_fraction` counts images that
/// are rank-k projections within tolerance; the defect fields record the
/// worst failures seen; `bidirectional` says whether the inverse map was
/// also tested (it is whenever the map is injective).
#[derive(Clone, Debug)]
pub struct PreservationReport {
    pub samples: usize,
    pub pass_fraction: f64,
    pub max_idempotence_defect: f64,
    pub max_rank_defect: usize,
    pub worst_input: Option<Projection>,
    pub bidirectional: bool,
}

/// Eigenvalue-counting rank with hysteresis: anything above 1/2 counts as an
/// occupied direction. Robust for images that are close to projections.
fn coarse_rank(values: &[f64]) -> usize {
    values.iter().filter(|&&v| v > 0.5).count()
}

struct Tally {
    tested: usize,
    passed: usize,
    max_idem: f64,
    max_rank_defect: usize,
    worst: Option<(f64, Projection)>,
}

impl Tally {
    fn new() -> Self {
        Self {
            tested: 0,
            passed: 0,
            max_idem: 0.0,
            max_rank_defect: 0,
            worst: None,
        }
    }

    fn record(&mut self, g: &HermMap, p: Projection, k: usize, tol: f64) {
        let img = g.apply(p.op());
        let idem = img.idempotence_defect();
        let rank = coarse_rank(spectral_decompose(&img).values());
        let rank_defect = rank.abs_diff(k);
        let pass = is_projection(&img, tol) == Some(k);
        self.tested += 1;
        if pass {
            self.passed += 1;
        }
        if idem > self.max_idem {
            self.max_idem = idem;
        }
        if rank_defect > self.max_rank_defect {
            self.max_rank_defect = rank_defect;
        }
        let is_worst = match &self.worst {
            None => true,
            Some((d, _)) => idem > *d,
        };
        if is_worst {
            self.worst = Some((idem, p));
        }
    }
}

/// Test whether `f` maps rank-k projections to rank-k projections, sampling
/// `samples` random inputs. When `f` is injective the inverse map is put
/// through the same battery (fresh inputs), so a passing bidirectional
/// report supports `f` mapping the rank-k projections onto themselves
/// rather than merely into them.
pub fn preserves_projections(
    f: &HermMap,
    k: usize,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<PreservationReport> {
    let n = f.dim();
    Projection::check_rank(n, k)?;
    let samples = samples.max(1);
    let mut tally = Tally::new();
    for i in 0..samples {
        let p = random_projection(n, k, derive_seed(seed, i as u64))?;
        tally.record(f, p, k, tol);
    }
    let bidirectional = is_injective(f, INJECTIVITY_TOL);
    if bidirectional {
        let g = inverse(f, INJECTIVITY_TOL)?;
        for i in 0..samples {
            let p = random_projection(n, k, derive_seed(seed, (samples + i) as u64))?;
            tally.record(&g, p, k, tol);
        }
    }
    Ok(PreservationReport {
        samples: tally.tested,
        pass_fraction: tally.passed as f64 / tally.tested as f64,
        max_idempotence_defect: tally.max_idem,
        max_rank_defect: tally.max_rank_defect,
        worst_input: tally.worst.map(|(_, p)| p),
        bidirectional,
    })
}

/// Outcome of `preserves_orthogonality`: each sample is a pair of
/// projections with orthogonal ranges, and `max_product_norm` is the worst
/// Frobenius norm of the product of their images.
#[derive(Clone, Debug)]
pub struct OrthogonalityReport {
    pub samples: usize,
    pub pass_fraction: f64,
    pub max_product_norm: f64,
    pub bidirectional: bool,
}

/// Sample orthogonal pairs with ranks (k, min(k, n - k)) and check that the
/// images still multiply to zero within `tol`. Injective maps are also
/// tested backwards through their inverse.
pub fn preserves_orthogonality(
    f: &HermMap,
    k: usize,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<OrthogonalityReport> {
    let n = f.dim();
    Projection::check_rank(n, k)?;
    let k2 = k.min(n - k);
    let samples = samples.max(1);
    let mut tested = 0usize;
    let mut passed = 0usize;
    let mut max_product = 0.0f64;
    let mut run = |g: &HermMap, offset: usize| -> Result<()> {
        for i in 0..samples {
            let (p, q) = random_orthogonal_pair(n, k, k2, derive_seed(seed, (offset + i) as u64))?;
            let ip = g.apply(p.op());
            let iq = g.apply(q.op());
            let prod = (ip.matrix() * iq.matrix()).norm();
            tested += 1;
            if prod <= tol {
                passed += 1;
            }
            if prod > max_product {
                max_product = prod;
            }
        }
        Ok(())
    };
    run(f, 0)?;
    let bidirectional = is_injective(f, INJECTIVITY_TOL);
    if bidirectional {
        let g = inverse(f, INJECTIVITY_TOL)?;
        run(&g, samples)?;
    }
    Ok(OrthogonalityReport {
        samples: tested,
        pass_fraction: passed as f64 / tested as f64,
        max_product_norm: max_product,
        bidirectional,
    })
}
