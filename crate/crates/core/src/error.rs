use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("evaluation at a root of the denominator")]
    PoleEvaluation,
    #[error("pole data does not factor the denominator: {0}")]
    BadFactorization(String),
    #[error("orders must sum to -2, got {sum}")]
    BadSignature { sum: i64 },
    #[error("malformed signature: {0}")]
    MalformedSignature(String),
    #[error("degenerate configuration: {0}")]
    DegenerateConfig(String),
    #[error("configuration is not in canonical normalization: {0}")]
    NotCanonical(String),
    #[error("torus coordinate w[{i}][{j}] vanishes")]
    ZeroCoordinate { i: usize, j: usize },
    #[error("path passes through or too close to the singularity at {0}")]
    PathThroughSingularity(String),
    #[error("quadrature tolerance {tol:e} not met (estimate {estimate:e})")]
    ToleranceNotMet { tol: f64, estimate: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("result unstable under precision doubling: {0}")]
    PrecisionTooLow(String),
    #[error("rank estimates disagree: {0}")]
    RankUnstable(String),
    #[error("residue ratio q[{0}] is zero")]
    ZeroQ(usize),
    #[error("coefficient is not rational: {0}")]
    NonRationalCoefficient(String),
    #[error("operation requires a stratum with only simple poles")]
    NotSimplePole,
    #[error("residue ratio is not rational: {0}")]
    NonRationalResidueRatios(String),
    #[error("periods are not real after normalization: {0}")]
    NonRealPeriods(String),
    #[error("branch value {0} of the cover is not a marked point")]
    UnmarkedBranchValue(String),
    #[error("map is constant")]
    ConstantMap,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
