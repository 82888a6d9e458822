use thiserror::Error;

/// Errors raised by the geometry, identity and mass evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QlmError {
    /// A point lies outside the admissible radial domain of a metric.
    #[error("r = {r} is outside the admissible domain of {metric}: require r > {bound}")]
    Domain { metric: String, r: f64, bound: f64 },

    #[error("polar angle theta = {theta} must lie strictly inside (0, pi)")]
    Pole { theta: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    /// Frame or gauge construction failed at a grid node.
    #[error("gauge error at node {node} (theta = {theta:.6}): {detail}")]
    Gauge { node: usize, theta: f64, detail: String },

    #[error("frame contraction error: {0}")]
    Contract(String),

    #[error("surface is not spacelike at node {node} (theta = {theta:.6}): min eigenvalue {min_eig:e}")]
    NotSpacelike { node: usize, theta: f64, min_eig: f64 },

    #[error("embedding failed on theta in [{from:.6}, {to:.6}]: {detail}")]
    Embedding { from: f64, to: f64, detail: String },

    /// A theorem hypothesis does not hold; no value is claimed.
    #[error("hypothesis '{hypothesis}' violated at node {node} (theta = {theta:.6}): value {value:e}")]
    Hypothesis { hypothesis: String, node: usize, theta: f64, value: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("induced metrics differ: max nodewise residual {residual:e} exceeds {tolerance:e}")]
    MetricMismatch { residual: f64, tolerance: f64 },

    #[error("gauge condition alpha' = alpha violated: max nodewise difference {residual:e} exceeds {tolerance:e}")]
    GaugeMismatch { residual: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, QlmError>;
