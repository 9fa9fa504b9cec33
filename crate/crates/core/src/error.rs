use thiserror::Error;

/// Errors surfaced by the approximation toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("axis {axis} out of range for dimension {dimension}")]
    AxisOutOfRange { axis: usize, dimension: usize },

    #[error("degree {requested} exceeds the configured maximum {max}")]
    DegreeLimitExceeded { requested: u32, max: u32 },

    #[error("enumeration size {requested} exceeds the configured limit {limit}")]
    SizeLimitExceeded { requested: u64, limit: u64 },

    #[error("non-finite sample value at node {node:?}")]
    NonFiniteSample { node: Vec<f64> },

    #[error("exponent {exponent} exceeds the factorial cap {cap}")]
    ExponentCapExceeded { exponent: u32, cap: u32 },

    #[error("solve residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    SolveResidual { residual: f64, tolerance: f64 },

    #[error("oracle supports derivative order {available}, but order {required} is required")]
    OracleOrderInsufficient { required: u32, available: u32 },

    #[error("mollifier scale {scale} violates the margin requirement {required}")]
    MarginViolated { scale: f64, required: f64 },

    #[error("target order {target} exceeds kernel capacity {capacity}")]
    KernelCapacity { target: u32, capacity: u32 },

    #[error("trace precondition violated on {face}: |value| = {value:.3e} at node {node:?}")]
    TraceViolation {
        face: String,
        node: Vec<f64>,
        value: f64,
    },

    #[error("σ-term with retention {retention} failed: {source}")]
    SigmaStage {
        retention: String,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
