use thiserror::Error;

/// Errors surfaced by the verification toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("portfolio has {n} risks but subset enumeration is capped at {cap}")]
    TooManyRisks { n: usize, cap: usize },

    #[error("scaling factor must lie strictly inside (0,1), got {0}")]
    ScalingOutOfRange(f64),

    #[error("horizon must be positive, got {0}")]
    NonPositiveHorizon(f64),

    #[error("probe grid is empty")]
    EmptyGrid,

    #[error("operation requires lattice-exact risks with exact rational weights: {0}")]
    ExactnessRequired(String),

    #[error("brute-force oracle guard: n must be <= {max_n} and truncate_at <= {max_truncate}")]
    BruteForceGuard { max_n: usize, max_truncate: u64 },

    #[error("convolution size guard exceeded: {0} pairwise products")]
    ConvolutionTooLarge(u64),

    #[error("survival query at {x} exceeds the pmf atom cap {cap}")]
    QueryBeyondCap { x: f64, cap: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("expectations of a superlinear convex test function are ill-defined for infinite-mean risks")]
    InfiniteMeanRefusal,

    #[error("partition fixture thresholds violate monotonicity: u_{{{smaller}}} < u_{{{larger}}}")]
    ThresholdsNotMonotone { smaller: String, larger: String },

    #[error("cannot parse '{input}' as an exact ratio")]
    RatioParse { input: String },
}

pub type Result<T> = std::result::Result<T, Error>;
