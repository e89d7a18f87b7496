use thiserror::Error;

/// Errors produced by graph construction, manifold operations, placement
/// search, routing, beamforming, and experiment configuration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid deployment: {0}")]
    InvalidDeployment(String),

    #[error("deployment file format error: {0}")]
    DeploymentFormat(String),

    #[error("matrix is not Hermitian: max deviation {max_dev:.3e} exceeds relative tolerance {tol:.1e}")]
    NotHermitian { max_dev: f64, tol: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix logarithm undefined: non-positive eigenvalue {0:.6e}")]
    NonPositiveEigenvalue(f64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix must have purely real entries for symmetric vectorization (max imaginary magnitude {0:.3e})")]
    NotRealSymmetric(f64),

    #[error("empty matrix list")]
    EmptyMatrixList,

    #[error("regularization gamma must be positive, got {0}")]
    NonPositiveGamma(f64),

    #[error("duplicate site index {0}")]
    DuplicateSite(usize),

    #[error("site index {index} out of range (Z = {num_sites})")]
    SiteOutOfRange { index: usize, num_sites: usize },

    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),

    #[error("flow endpoints must be distinct active vertices: {0}")]
    InvalidFlowEndpoints(String),

    #[error("need at least 2 active vertices for algebraic connectivity, got {0}")]
    TooFewActiveVertices(usize),

    #[error("relay count K={k} must satisfy 1 <= K < Z={num_sites}")]
    InvalidRelayCount { k: usize, num_sites: usize },

    #[error("exhaustive search over {subsets} subsets exceeds budget {budget}; use greedy placement instead")]
    SearchBudgetExceeded { subsets: u128, budget: u128 },

    #[error("no occupied relays")]
    NoRelays,

    #[error("relay vertex {0} is not an occupied relay")]
    NotARelay(usize),

    #[error("need at least 2 routes to select a parallel pair, got {0}")]
    TooFewRoutes(usize),

    #[error("correlation magnitude must lie in [0, 1), got {0}")]
    InvalidCorrelationMagnitude(f64),

    #[error("ridge epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),

    #[error("training set must contain both user groups")]
    SingleClassTrainingSet,

    #[error("training set needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("codebook group {0} has no channels")]
    EmptyChannelGroup(usize),

    #[error("angle grid needs at least 2 points, got {0}")]
    InvalidAngleGrid(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
