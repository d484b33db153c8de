use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    /// The fiber coordinate is (numerically) on the zero section.
    #[error("point lies on the zero section of the tangent bundle: |y| = {norm:e}")]
    SlitBundle { norm: f64 },

    /// Warped products are only smooth when both fiber blocks are nonzero.
    #[error("warped product evaluated on a degenerate direction: {block} block of y vanishes")]
    SlitDomain { block: &'static str },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("fundamental tensor is not positive definite: smallest eigenvalue {eigenvalue:e}")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("domain error in {function}: argument {value}")]
    Domain { function: &'static str, value: f64 },

    #[error("chart domain violated: {0}")]
    Chart(String),

    /// The requested derivative order exceeds the configured jet order.
    #[error("derivative order {requested} exceeds configured jet order {available}")]
    Capability { requested: usize, available: usize },

    #[error("dimension error: {0}")]
    Dimension(String),

    /// An internal identity that must hold by construction failed.
    #[error("internal consistency check failed: {what} residual {residual:e}")]
    Consistency { what: &'static str, residual: f64 },

    #[error("invalid warping function: f = {value} at the evaluation point")]
    InvalidWarp { value: f64 },

    #[error("conformal factor case mismatch: {0}")]
    Case(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("evaluation failed inside finite-difference stencil at offset {offset:e} along coordinate {coordinate}: {source}")]
    Stencil {
        coordinate: usize,
        offset: f64,
        #[source]
        source: Box<GeometryError>,
    },
}

pub type Result<T> = std::result::Result<T, GeometryError>;
