//! Command-line front end for the witnesskit library: generate maps from
//! the named families, classify stored maps, sweep grids of dimensions and
//! ranks, check witness candidates, demonstrate the rank-one decomposition,
//! and renormalize operators to states. Every output is machine-readable
//! JSON (or CSV for sweeps) and deterministic for a fixed seed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use witnesskit::io::{
    map_from_json, map_to_json, operator_from_json, operator_to_json, read_json_file,
    symmetry_from_json, symmetry_to_json, vector_to_json, write_json_file,
};
use witnesskit::{
    ad_symmetry, classify, derive_seed, is_projection, is_uniform_state, pi_project,
    random_haar_unitary, random_projection, random_rank_k_state, random_symmetry,
    random_unit_vector, rank_one_decomposition, span_dimension, spectral_decompose, sweep_csv,
    theta, theta_u, trace_to_state, uniform_state, uniform_vector, vectorize, witness_sweep,
    ClassifyConfig, DensityOperator, Flag, HermitianOperator, KRule, Projection, SweepConfig,
    SymmetryOp, TolProfile,
};

const EXIT_HELP: &str = "Exit codes:
  0  success (classify: symmetry verdict)
  1  sweep or check found a contradiction
  2  configuration or parse error
  3  classify: counterexample-family verdict
  4  classify: not-preserver verdict
  5  classify: preserver-unclassified verdict
  6  project: indefinite input
  7  project: zero input";

#[derive(Parser)]
#[command(
    name = "witnesskit",
    version,
    about = "Generate, classify and sweep rank-k projection preservers",
    after_help = EXIT_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a map from a named family and write it to disk
    Gen(GenArgs),
    /// Classify a stored map against the rank-k projections
    Classify(ClassifyArgs),
    /// Classify generated families across a grid of dimensions and ranks
    Sweep(SweepArgs),
    /// Check a candidate set for symmetry invariance and span
    CheckWitness(CheckArgs),
    /// Expand a random rank-one projection over k+1 rank-k projections
    Decompose(DecomposeArgs),
    /// Renormalize a semidefinite operator to a state
    Project(ProjectArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FamilyArg {
    AdUnitary,
    AdAntiunitary,
    Theta,
    ThetaU,
    TraceToState,
}

impl FamilyArg {
    fn as_str(self) -> &'static str {
        match self {
            FamilyArg::AdUnitary => "ad-unitary",
            FamilyArg::AdAntiunitary => "ad-antiunitary",
            FamilyArg::Theta => "theta",
            FamilyArg::ThetaU => "theta-u",
            FamilyArg::TraceToState => "trace-to-state",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TolArg {
    Desk,
    Strict,
}

impl TolArg {
    fn profile(self) -> TolProfile {
        match self {
            TolArg::Desk => TolProfile::desk(),
            TolArg::Strict => TolProfile::strict(),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            TolArg::Desk => "desk",
            TolArg::Strict => "strict",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CandidateArg {
    Projections,
    UniformStates,
}

#[derive(Args)]
struct GenArgs {
    /// Map family to generate
    #[arg(value_enum)]
    family: FamilyArg,
    /// Matrix dimension
    #[arg(long)]
    n: usize,
    /// Rank parameter; required by theta, theta-u and trace-to-state
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the map file
    #[arg(long)]
    out: PathBuf,
    /// Symmetry JSON supplying the conjugating operation instead of a
    /// seeded random one (ad and theta-u families only)
    #[arg(long)]
    unitary_path: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Path to a stored map file
    #[arg(long)]
    map: PathBuf,
    /// Projection rank to classify against
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 40)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value = "desk")]
    tol_profile: TolArg,
}

#[derive(Args)]
struct SweepArgs {
    /// Inclusive dimension range, e.g. 2..6
    #[arg(long)]
    n: String,
    /// Rank rule: all, half, or a comma-separated list
    #[arg(long, default_value = "all")]
    k: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Largest dimension the sweep will accept
    #[arg(long, default_value_t = 8)]
    cap: usize,
    /// Sample count for each classification's projection gate
    #[arg(long, default_value_t = 12)]
    samples: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Also write the per-entry table as CSV to this path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Candidate set to check
    #[arg(long, value_enum)]
    candidate: CandidateArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 40)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ProjectArgs {
    /// Path to a Hermitian operator file
    #[arg(long)]
    operator: PathBuf,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<witnesskit::Error> for Failure {
    fn from(e: witnesskit::Error) -> Self {
        let code = match e {
            witnesskit::Error::IndefiniteInput => 6,
            witnesskit::Error::ZeroInput => 7,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("report serializes"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Classify(a) => cmd_classify(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::CheckWitness(a) => cmd_check_witness(a),
        Cmd::Decompose(a) => cmd_decompose(a),
        Cmd::Project(a) => cmd_project(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn require_k(k: Option<usize>, family: FamilyArg) -> Result<usize, Failure> {
    k.ok_or_else(|| {
        Failure::config(format!(
            "family '{}' requires --k",
            family.as_str()
        ))
    })
}

fn check_half_dimension(n: usize, k: usize, family: FamilyArg) -> Result<(), Failure> {
    if n != 2 * k {
        return Err(Failure::config(format!(
            "family '{}' requires n = 2k; got n = {n}, k = {k}",
            family.as_str()
        )));
    }
    Ok(())
}

fn load_symmetry_override(
    path: &PathBuf,
    n: usize,
    required_flag: Option<Flag>,
) -> Result<SymmetryOp, Failure> {
    let v = read_json_file(path)?;
    let s = symmetry_from_json(&v)?;
    if s.dim() != n {
        return Err(Failure::config(format!(
            "conjugating operation acts on dimension {}, expected {n}",
            s.dim()
        )));
    }
    if let Some(flag) = required_flag {
        if s.flag() != flag {
            return Err(Failure::config(format!(
                "conjugating operation has the wrong flag for this family: {:?}",
                s.flag()
            )));
        }
    }
    Ok(s)
}

fn cmd_gen(a: GenArgs) -> Result<u8, Failure> {
    if a.n < 2 {
        return Err(Failure::config(format!("--n must be at least 2, got {}", a.n)));
    }
    let mut sidecar: Option<SymmetryOp> = None;
    let map = match a.family {
        FamilyArg::AdUnitary | FamilyArg::AdAntiunitary => {
            let flag = if a.family == FamilyArg::AdUnitary {
                Flag::Unitary
            } else {
                Flag::Antiunitary
            };
            let s = match &a.unitary_path {
                Some(p) => load_symmetry_override(p, a.n, Some(flag))?,
                None => SymmetryOp::new(flag, random_haar_unitary(a.n, a.seed))?,
            };
            let f = ad_symmetry(&s);
            sidecar = Some(s);
            f
        }
        FamilyArg::Theta => {
            if a.unitary_path.is_some() {
                return Err(Failure::config(
                    "family 'theta' takes no conjugating operation",
                ));
            }
            let k = require_k(a.k, a.family)?;
            check_half_dimension(a.n, k, a.family)?;
            theta(k)?
        }
        FamilyArg::ThetaU => {
            let k = require_k(a.k, a.family)?;
            check_half_dimension(a.n, k, a.family)?;
            let s = match &a.unitary_path {
                Some(p) => load_symmetry_override(p, a.n, None)?,
                None => random_symmetry(a.n, a.seed),
            };
            let f = theta_u(k, &s)?;
            sidecar = Some(s);
            f
        }
        FamilyArg::TraceToState => {
            if a.unitary_path.is_some() {
                return Err(Failure::config(
                    "family 'trace-to-state' takes no conjugating operation",
                ));
            }
            let k = require_k(a.k, a.family)?;
            let rho = random_rank_k_state(a.n, k, a.seed)?;
            trace_to_state(&rho)
        }
    };
    write_json_file(&a.out, &map_to_json(&map))?;
    let sidecar_path = sidecar.as_ref().map(|_| a.out.with_extension("sym.json"));
    if let (Some(s), Some(p)) = (&sidecar, &sidecar_path) {
        write_json_file(p, &symmetry_to_json(s))?;
    }
    emit(&json!({
        "format": "gen-v1",
        "family": a.family.as_str(),
        "n": a.n,
        "k": a.k,
        "seed": a.seed,
        "out": a.out.display().to_string(),
        "sidecar": sidecar_path.map(|p| p.display().to_string()),
    }));
    Ok(0)
}

fn cmd_classify(a: ClassifyArgs) -> Result<u8, Failure> {
    let v = read_json_file(&a.map)?;
    let f = map_from_json(&v)?;
    let cfg = ClassifyConfig {
        k: a.k,
        samples: a.samples,
        seed: a.seed,
        tol: a.tol_profile.profile(),
    };
    let c = classify(&f, &cfg)?;
    emit(&json!({
        "format": "classification-v1",
        "n": f.dim(),
        "k": a.k,
        "tol_profile": a.tol_profile.as_str(),
        "verdict": c.verdict.as_str(),
        "residual": c.residual,
        "recovered": c.symmetry.as_ref().map(symmetry_to_json),
        "gate": {
            "samples": c.report.samples,
            "pass_fraction": c.report.pass_fraction,
            "max_idempotence_defect": c.report.max_idempotence_defect,
            "max_rank_defect": c.report.max_rank_defect,
            "bidirectional": c.report.bidirectional,
        },
    }));
    Ok(match c.verdict {
        witnesskit::Verdict::Symmetry => 0,
        witnesskit::Verdict::CounterexampleFamily => 3,
        witnesskit::Verdict::NotPreserver => 4,
        witnesskit::Verdict::PreserverUnclassified => 5,
    })
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let err = || {
        Failure::config(format!(
            "--n expects an inclusive range like 2..6, got '{text}'"
        ))
    };
    let (lo, hi) = text.split_once("..").ok_or_else(err)?;
    let lo: usize = lo.trim().parse().map_err(|_| err())?;
    let hi: usize = hi.trim().parse().map_err(|_| err())?;
    if lo > hi {
        return Err(err());
    }
    Ok((lo, hi))
}

fn parse_k_rule(text: &str) -> Result<KRule, Failure> {
    match text {
        "all" => Ok(KRule::All),
        "half" => Ok(KRule::Half),
        list => {
            let ranks: Result<Vec<usize>, _> =
                list.split(',').map(|s| s.trim().parse::<usize>()).collect();
            let ranks = ranks.map_err(|_| {
                Failure::config(format!(
                    "--k expects 'all', 'half' or a comma-separated rank list, got '{text}'"
                ))
            })?;
            Ok(KRule::Custom(ranks))
        }
    }
}

fn cmd_sweep(a: SweepArgs) -> Result<u8, Failure> {
    let (lo, hi) = parse_range(&a.n)?;
    let threads = match std::env::var("WITNESSKIT_THREADS") {
        Ok(text) => Some(text.parse::<usize>().map_err(|_| {
            Failure::config(format!("WITNESSKIT_THREADS must be an integer, got '{text}'"))
        })?),
        Err(_) => None,
    };
    let mut cfg = SweepConfig::new(lo, hi + 1);
    cfg.k_rule = parse_k_rule(&a.k)?;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.cap = a.cap;
    cfg.samples = a.samples;
    cfg.threads = threads;
    let report = witness_sweep(&cfg)?;
    if let Some(path) = &a.out {
        std::fs::write(path, sweep_csv(&report)).map_err(|e| Failure::config(e.to_string()))?;
    }
    match a.format {
        FormatArg::Json => emit(&json!({
            "format": "sweep-v1",
            "config": {
                "n": a.n,
                "k": a.k,
                "trials": a.trials,
                "seed": a.seed,
                "cap": a.cap,
                "samples": a.samples,
            },
            "summary": report.summary,
            "contradictions": report.contradictions,
            "entries": serde_json::to_value(&report.entries).expect("entries serialize"),
            "timing": { "elapsed_seconds": report.elapsed_seconds },
        })),
        FormatArg::Csv => print!("{}", sweep_csv(&report)),
    }
    Ok(if report.contradictions == 0 { 0 } else { 1 })
}

fn cmd_check_witness(a: CheckArgs) -> Result<u8, Failure> {
    if a.n < 2 {
        return Err(Failure::config(format!("--n must be at least 2, got {}", a.n)));
    }
    let full_rank_allowed = a.candidate == CandidateArg::UniformStates;
    if a.k == 0 || a.k > a.n || (a.k == a.n && !full_rank_allowed) {
        return Err(Failure::config(format!(
            "rank k = {} is out of range for dimension n = {}",
            a.k, a.n
        )));
    }
    let samples = a.samples.max(1);
    let sample_projection = |tag: u64| -> Result<Projection, Failure> {
        if a.k == a.n {
            Ok(Projection::trusted(
                HermitianOperator::identity(a.n),
                a.n,
                a.n,
            ))
        } else {
            Ok(random_projection(a.n, a.k, tag)?)
        }
    };
    let mut passed = 0usize;
    let mut max_defect = 0.0f64;
    let mut max_pi_distance: Option<f64> = None;
    let target = uniform_vector(a.n, a.k)?;
    for i in 0..samples {
        let p = sample_projection(derive_seed(a.seed, i as u64))?;
        let s = random_symmetry(a.n, derive_seed(a.seed, 1_000_000 + i as u64));
        match a.candidate {
            CandidateArg::Projections => {
                let img = s.apply_to(p.op());
                max_defect = max_defect.max(img.idempotence_defect());
                if is_projection(&img, 1e-8) == Some(a.k) {
                    passed += 1;
                }
            }
            CandidateArg::UniformStates => {
                let rho = uniform_state(&p);
                let img = s.apply_to(rho.op());
                let spectrum = spectral_decompose(&img);
                let defect = spectrum
                    .values()
                    .iter()
                    .zip(target.iter())
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0f64, f64::max);
                max_defect = max_defect.max(defect);
                let uniform = DensityOperator::try_new(img, 1e-8)
                    .ok()
                    .and_then(|d| is_uniform_state(&d, 1e-8));
                if uniform == Some(a.k) {
                    passed += 1;
                }
                let projected = pi_project(p.op(), 1e-10)?;
                let d = projected.op().distance(rho.op());
                max_pi_distance = Some(max_pi_distance.map_or(d, |m: f64| m.max(d)));
            }
        }
    }
    let span_draws = samples.max(2 * a.n * a.n);
    let vectors: Result<Vec<_>, Failure> = (0..span_draws)
        .map(|i| {
            let p = sample_projection(derive_seed(a.seed, 2_000_000 + i as u64))?;
            Ok(match a.candidate {
                CandidateArg::Projections => vectorize(p.op()),
                CandidateArg::UniformStates => vectorize(uniform_state(&p).op()),
            })
        })
        .collect();
    let span = span_dimension(&vectors?, 1e-10);
    let expected = a.n * a.n;
    let candidate_by_span = span == expected;
    let pass_fraction = passed as f64 / samples as f64;
    emit(&json!({
        "format": "witness-check-v1",
        "candidate": match a.candidate {
            CandidateArg::Projections => "projections",
            CandidateArg::UniformStates => "uniform-states",
        },
        "n": a.n,
        "k": a.k,
        "samples": samples,
        "invariance": {
            "pass_fraction": pass_fraction,
            "max_defect": max_defect,
        },
        "span": {
            "dimension": span,
            "expected": expected,
            "candidate_by_span": candidate_by_span,
            "note": if candidate_by_span {
                Value::Null
            } else {
                Value::String("not a candidate by span".into())
            },
        },
        "projection_match": max_pi_distance.map(|d| json!({ "max_distance": d })),
    }));
    Ok(if pass_fraction == 1.0 { 0 } else { 1 })
}

fn cmd_decompose(a: DecomposeArgs) -> Result<u8, Failure> {
    let v = random_unit_vector(a.n, a.seed);
    let terms = rank_one_decomposition(&v, a.k)?;
    let mut acc = HermitianOperator::zeros(a.n);
    for (c, q) in &terms {
        acc = &acc + &q.op().scaled(*c);
    }
    let outer = HermitianOperator::from_fn(a.n, |i, j| v[i] * v[j].conj())?;
    let error = acc.distance(&outer);
    emit(&json!({
        "format": "decomposition-v1",
        "n": a.n,
        "k": a.k,
        "seed": a.seed,
        "vector": vector_to_json(&v),
        "terms": terms
            .iter()
            .map(|(c, q)| json!({ "coefficient": c, "projection": operator_to_json(q.op()) }))
            .collect::<Vec<_>>(),
        "reconstruction_error": error,
    }));
    Ok(0)
}

fn cmd_project(a: ProjectArgs) -> Result<u8, Failure> {
    let v = read_json_file(&a.operator)?;
    let (op, defect) = operator_from_json(&v)?;
    let rho = pi_project(&op, 1e-10)?;
    let uniform_rank = is_uniform_state(&rho, 1e-8);
    emit(&json!({
        "format": "projection-v1",
        "n": op.dim(),
        "symmetrization_defect": defect,
        "state": operator_to_json(rho.op()),
        "uniform_rank": uniform_rank,
    }));
    Ok(0)
}
