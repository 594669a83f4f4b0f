//! Decision pipeline: place a map into one of four classes relative to the
//! rank-k projections.

use serde::{Deserialize, Serialize};

use crate::extract::extract_symmetry;
use crate::map::{theta, HermMap};
use crate::preserve::{preserves_projections, PreservationReport};
use crate::symmetry::SymmetryOp;
use crate::{Error, Result};

/// Tolerance bundle used across the pipeline.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TolProfile {
    /// Accepted distance of sampled images from the projection set.
    pub projection_defect: f64,
    /// Accepted Frobenius residual between the map and a reconstructed
    /// conjugation.
    pub extraction_residual: f64,
    /// Accepted phase-free distance when comparing two symmetry operations.
    pub phase_free: f64,
}

impl TolProfile {
    pub fn desk() -> Self {
        Self {
            projection_defect: 1e-8,
            extraction_residual: 1e-8,
            phase_free: 1e-8,
        }
    }

    pub fn strict() -> Self {
        Self {
            projection_defect: 1e-10,
            extraction_residual: 1e-10,
            phase_free: 1e-10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassifyConfig {
    /// Rank of the projections the map is tested against, 1 <= k < n.
    pub k: usize,
    /// Sample count for the projection-preservation gate.
    pub samples: usize,
    pub seed: u64,
    pub tol: TolProfile,
}

impl ClassifyConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            samples: 40,
            seed: 7,
            tol: TolProfile::desk(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Conjugation by a unitary or antiunitary operation.
    Symmetry,
    /// Trace-complement map composed with such a conjugation (only possible
    /// when n = 2k).
    CounterexampleFamily,
    /// Sampled images leave the rank-k projection set.
    NotPreserver,
    /// Passes the sampling gate but fits neither closed form.
    PreserverUnclassified,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Symmetry => "symmetry",
            Verdict::CounterexampleFamily => "counterexample-family",
            Verdict::NotPreserver => "not-preserver",
            Verdict::PreserverUnclassified => "preserver-unclassified",
        }
    }
}

/// Full classification result. For `Symmetry` the recovered operation S
/// satisfies f = ad(S); for `CounterexampleFamily` it satisfies
/// f = theta . ad(S). `residual` is the Frobenius distance between f and
/// that closed form, absent when no closed form was found.
#[derive(Clone, Debug)]
pub struct Classification {
    pub verdict: Verdict,
    pub residual: Option<f64>,
    pub symmetry: Option<SymmetryOp>,
    pub report: PreservationReport,
}

/// Classify `f` against the rank-k projections.
///
/// 1. Sampling gate: if any sampled rank-k projection (forward, and
///    backward through the inverse when injective) leaves the projection
///    set, the map is not a preserver.
/// 2. Direct extraction: if f is conjugation by a symmetry operation, done.
/// 3. Half-rank escape: when n = 2k, compose with the trace-complement
///    involution and retry; success identifies the counterexample family.
/// 4. Otherwise the map passed sampling but has no recognized closed form.
pub fn classify(f: &HermMap, config: &ClassifyConfig) -> Result<Classification> {
    let n = f.dim();
    let k = config.k;
    if k == 0 || k >= n {
        return Err(Error::InvalidRank { k, n });
    }
    let report = preserves_projections(f, k, config.samples, config.tol.projection_defect, config.seed)?;
    if report.pass_fraction < 1.0 {
        return Ok(Classification {
            verdict: Verdict::NotPreserver,
            residual: None,
            symmetry: None,
            report,
        });
    }
    if let Some((sym, residual)) = extract_symmetry(f, config.tol.extraction_residual) {
        return Ok(Classification {
            verdict: Verdict::Symmetry,
            residual: Some(residual),
            symmetry: Some(sym),
            report,
        });
    }
    if n == 2 * k {
        let undone = theta(k)?.compose(f)?;
        if let Some((sym, residual)) = extract_symmetry(&undone, config.tol.extraction_residual) {
            return Ok(Classification {
                verdict: Verdict::CounterexampleFamily,
                residual: Some(residual),
                symmetry: Some(sym),
                report,
            });
        }
    }
    Ok(Classification {
        verdict: Verdict::PreserverUnclassified,
        residual: None,
        symmetry: None,
        report,
    })
}
