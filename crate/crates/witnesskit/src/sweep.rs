//! Grid sweep: generate maps from the known families across dimensions and
//! ranks, classify each one, and flag any run that contradicts the expected
//! verdict or the invariants the families satisfy.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, ClassifyConfig, TolProfile, Verdict};
use crate::map::{ad_symmetry, is_injective, is_trace_preserving, is_unital, theta, HermMap};
use crate::sample::{derive_seed, random_haar_unitary};
use crate::symmetry::{Flag, SymmetryOp};
use crate::{Error, Result};

const INVARIANT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    AdUnitary,
    AdAntiunitary,
    ThetaUUnitary,
    ThetaUAntiunitary,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::AdUnitary,
        Family::AdAntiunitary,
        Family::ThetaUUnitary,
        Family::ThetaUAntiunitary,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::AdUnitary => "ad-unitary",
            Family::AdAntiunitary => "ad-antiunitary",
            Family::ThetaUUnitary => "theta-u-unitary",
            Family::ThetaUAntiunitary => "theta-u-antiunitary",
        }
    }

    /// Trace-complement compositions only exist at half rank.
    pub fn applicable(&self, n: usize, k: usize) -> bool {
        match self {
            Family::AdUnitary | Family::AdAntiunitary => true,
            Family::ThetaUUnitary | Family::ThetaUAntiunitary => n == 2 * k,
        }
    }

    /// At k = 1 the trace-complement map is itself an antiunitary
    /// conjugation, so composing it with a conjugation stays inside the
    /// symmetry class; the composed families are a distinct class only for
    /// k >= 2.
    pub fn expected_verdict(&self, k: usize) -> Verdict {
        match self {
            Family::AdUnitary | Family::AdAntiunitary => Verdict::Symmetry,
            Family::ThetaUUnitary | Family::ThetaUAntiunitary => {
                if k == 1 {
                    Verdict::Symmetry
                } else {
                    Verdict::CounterexampleFamily
                }
            }
        }
    }

    fn build(&self, n: usize, k: usize, seed: u64) -> Result<HermMap> {
        let flag = match self {
            Family::AdUnitary | Family::ThetaUUnitary => Flag::Unitary,
            Family::AdAntiunitary | Family::ThetaUAntiunitary => Flag::Antiunitary,
        };
        let s = SymmetryOp::new(flag, random_haar_unitary(n, seed))?;
        let ad = ad_symmetry(&s);
        match self {
            Family::AdUnitary | Family::AdAntiunitary => Ok(ad),
            Family::ThetaUUnitary | Family::ThetaUAntiunitary => theta(k)?.compose(&ad),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KRule {
    /// Every rank 1 <= k < n.
    All,
    /// Only k = n/2, skipping odd n entirely.
    Half,
    /// An explicit list, filtered per dimension to 1 <= k < n.
    Custom(Vec<usize>),
}

impl KRule {
    pub fn ranks(&self, n: usize) -> Vec<usize> {
        match self {
            KRule::All => (1..n).collect(),
            KRule::Half => {
                if n % 2 == 0 {
                    vec![n / 2]
                } else {
                    Vec::new()
                }
            }
            KRule::Custom(list) => {
                let mut ks: Vec<usize> =
                    list.iter().copied().filter(|&k| k >= 1 && k < n).collect();
                ks.sort_unstable();
                ks.dedup();
                ks
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    /// Half-open dimension range, lower bound at least 2.
    pub n_lo: usize,
    pub n_hi: usize,
    pub k_rule: KRule,
    pub trials: usize,
    pub seed: u64,
    /// Largest dimension the sweep will accept; guards against accidental
    /// n^4-sized workloads.
    pub cap: usize,
    /// Sample count for each classification's projection gate.
    pub samples: usize,
    pub tol: TolProfile,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn new(n_lo: usize, n_hi: usize) -> Self {
        Self {
            n_lo,
            n_hi,
            k_rule: KRule::All,
            trials: 10,
            seed: 7,
            cap: 8,
            samples: 12,
            tol: TolProfile::desk(),
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepEntry {
    pub n: usize,
    pub k: usize,
    pub family: Family,
    pub trial: usize,
    pub seed: u64,
    pub verdict: Verdict,
    pub residual: Option<f64>,
    pub contradiction: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    /// Verdict counts keyed by "n=<n>,k=<k>".
    pub summary: BTreeMap<String, BTreeMap<String, usize>>,
    pub contradictions: usize,
    /// Wall-clock duration; carries no information about the results and is
    /// excluded from determinism comparisons.
    pub elapsed_seconds: f64,
}

fn run_cell(
    n: usize,
    k: usize,
    family: Family,
    trial: usize,
    config: &SweepConfig,
) -> Result<SweepEntry> {
    let s1 = derive_seed(config.seed, n as u64);
    let s2 = derive_seed(s1, (k * 8 + family as usize) as u64);
    let cell_seed = derive_seed(s2, trial as u64);
    let f = family.build(n, k, derive_seed(cell_seed, 1))?;
    let c = classify(
        &f,
        &ClassifyConfig {
            k,
            samples: config.samples,
            seed: derive_seed(cell_seed, 2),
            tol: config.tol,
        },
    )?;
    let invariants_hold = is_trace_preserving(&f, INVARIANT_TOL)
        && is_unital(&f, INVARIANT_TOL)
        && is_injective(&f, INVARIANT_TOL);
    let contradiction = c.verdict != family.expected_verdict(k) || !invariants_hold;
    Ok(SweepEntry {
        n,
        k,
        family,
        trial,
        seed: cell_seed,
        verdict: c.verdict,
        residual: c.residual,
        contradiction,
    })
}

pub fn witness_sweep(config: &SweepConfig) -> Result<SweepReport> {
    if config.n_lo < 2 || config.n_hi <= config.n_lo {
        return Err(Error::Config(format!(
            "dimension range {}..{} is empty or starts below 2",
            config.n_lo, config.n_hi
        )));
    }
    if config.n_hi - 1 > config.cap {
        return Err(Error::Config(format!(
            "dimension range reaches {} but the cap is {}",
            config.n_hi - 1,
            config.cap
        )));
    }
    if config.trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }

    let mut cells = Vec::new();
    for n in config.n_lo..config.n_hi {
        for k in config.k_rule.ranks(n) {
            for family in Family::ALL {
                if family.applicable(n, k) {
                    for trial in 0..config.trials {
                        cells.push((n, k, family, trial));
                    }
                }
            }
        }
    }

    let start = Instant::now();
    let run_all = || -> Result<Vec<SweepEntry>> {
        cells
            .par_iter()
            .map(|&(n, k, family, trial)| run_cell(n, k, family, trial, config))
            .collect()
    };
    let entries = match config.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(run_all)?
        }
        None => run_all()?,
    };
    let elapsed_seconds = start.elapsed().as_secs_f64();

    let mut summary: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    let mut contradictions = 0usize;
    for e in &entries {
        *summary
            .entry(format!("n={},k={}", e.n, e.k))
            .or_default()
            .entry(e.verdict.as_str().to_string())
            .or_default() += 1;
        if e.contradiction {
            contradictions += 1;
        }
    }
    Ok(SweepReport {
        entries,
        summary,
        contradictions,
        elapsed_seconds,
    })
}

/// Flat CSV rendering of the entries: one row per run, no timing data.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from("n,k,family,trial,seed,verdict,residual\n");
    for e in &report.entries {
        let residual = match e.residual {
            Some(r) => format!("{r}"),
            None => String::new(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.n,
            e.k,
            e.family.as_str(),
            e.trial,
            e.seed,
            e.verdict.as_str(),
            residual
        ));
    }
    out
}
