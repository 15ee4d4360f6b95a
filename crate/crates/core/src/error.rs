use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integer overflow while {0}")]
    Overflow(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("length {len} exceeds the brute-force cap {cap}")]
    LengthCap { len: usize, cap: usize },

    #[error("grid functions live on different boxes")]
    BoxMismatch,

    #[error("padded transform size overflows ({0})")]
    PaddingOverflow(String),

    #[error("padding {got} on axis {axis} is smaller than the required {need}")]
    PaddingInsufficient { axis: usize, need: usize, got: usize },

    #[error("memory budget of {budget} cells exceeded at t = {time} ({cells} cells requested)")]
    MemoryBudget { time: f64, cells: usize, budget: usize },

    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("property ({property}) violated: {detail}")]
    PropertyViolation { property: String, detail: String },

    #[error("fraction set would contain {size} elements, above the cap {cap}")]
    SigmaCap { size: usize, cap: usize },

    #[error("time grid is not contained in the dyadic set U: {0}")]
    NotDyadicGrid(String),

    #[error("block [{0}, {1}) has samples but its left endpoint is not sampled")]
    MissingDyadicAnchor(f64, f64),

    #[error("no minor-arc frequencies sampled at level {0}; refine the grid")]
    NoMinorArcPoints(u32),

    #[error("empty series")]
    EmptySeries,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Short machine-readable tag, used in JSON error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Overflow(_) => "overflow",
            Error::ArityMismatch { .. } => "arity_mismatch",
            Error::Parse { .. } => "parse",
            Error::LengthCap { .. } => "length_cap",
            Error::BoxMismatch => "box_mismatch",
            Error::PaddingOverflow(_) => "padding_overflow",
            Error::PaddingInsufficient { .. } => "padding_insufficient",
            Error::MemoryBudget { .. } => "memory_budget",
            Error::Quadrature { .. } => "quadrature",
            Error::PropertyViolation { .. } => "property_violation",
            Error::SigmaCap { .. } => "sigma_cap",
            Error::NotDyadicGrid(_) => "not_dyadic_grid",
            Error::MissingDyadicAnchor(..) => "missing_dyadic_anchor",
            Error::NoMinorArcPoints(_) => "no_minor_arc_points",
            Error::EmptySeries => "empty_series",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
