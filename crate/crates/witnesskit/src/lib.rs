//! witnesskit represents linear maps on the real space of n-by-n Hermitian
//! matrices as real n^2-by-n^2 superoperator matrices, constructs the
//! canonical map families of that space (unitary and antiunitary
//! conjugations, the trace involution on even dimension, and their
//! compositions), and classifies a given map as a symmetry transformation,
//! a member of the non-positive half-rank counterexample family, or
//! neither. Everything stochastic takes an explicit seed.

pub mod basis;
pub mod choi;
pub mod classify;
pub mod extract;
pub mod herm;
pub mod io;
pub mod majorization;
pub mod map;
pub mod positivity;
pub mod preserve;
pub mod probe;
pub mod proj;
pub mod sample;
pub mod states;
pub mod sweep;
pub mod symmetry;

pub use basis::{devectorize, span_dimension, vectorize, HermBasis};
pub use choi::{choi, is_completely_positive, ChoiMatrix};
pub use classify::{classify, Classification, ClassifyConfig, TolProfile, Verdict};
pub use extract::{compare_up_to_phase, extract_symmetry};
pub use herm::{spectral_decompose, HermitianOperator, Spectrum};
pub use majorization::{majorizes, uniform_minimality_check, uniform_vector};
pub use map::{
    ad_symmetry, inverse, is_injective, is_trace_preserving, is_unital,
    rank_complement_transform, reduction_map_identity_check, theta, theta_u, trace_to_state,
    HermMap,
};
pub use positivity::{is_positive_heuristic, Positivity};
pub use preserve::{
    preserves_orthogonality, preserves_projections, OrthogonalityReport, PreservationReport,
};
pub use probe::{
    conjecture_probe, preservation_penalty, probe_descent, ProbeReport, ProbeRun, StartKind,
};
pub use proj::{is_projection, orthocomplement, rank_one_decomposition, Projection};
pub use sample::{
    derive_seed, random_haar_unitary, random_hermitian, random_orthogonal_pair,
    random_projection, random_symmetry, random_unit_vector,
};
pub use states::{is_uniform_state, pi_project, random_rank_k_state, uniform_state, DensityOperator};
pub use sweep::{sweep_csv, witness_sweep, Family, KRule, SweepConfig, SweepEntry, SweepReport};
pub use symmetry::{Flag, SymmetryOp};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rank {k} out of range for dimension {n}")]
    InvalidRank { k: usize, n: usize },
    #[error("orthocomplement of a full-rank projection would have rank zero")]
    FullRankInput,
    #[error("vector must have unit norm, got norm {0}")]
    NonUnitVector(f64),
    #[error("matrix is not unitary: defect {0:.3e} exceeds 1e-12")]
    UnitarityViolation(f64),
    #[error("map is numerically singular: smallest singular value ratio {0:.3e}")]
    SingularMap(f64),
    #[error("even dimension n = 2k required, got n = {n} (nearest k = {k})")]
    EvenDimension { n: usize, k: usize },
    #[error("operator is indefinite: eigenvalues of both signs exceed tolerance")]
    IndefiniteInput,
    #[error("operator is numerically zero")]
    ZeroInput,
    #[error("probability vector must sum to 1 within 1e-10, got sum {0}")]
    NotNormalized(f64),
    #[error("not a density operator: {0}")]
    NotDensity(String),
    #[error("not a projection within the requested tolerance")]
    NotProjection,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
