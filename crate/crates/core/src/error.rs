//! Crate-wide error type. Every message names the violated invariant so
//! callers (and the CLI) can surface it verbatim.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix violates the Hermiticity invariant (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("state violates the unit-trace invariant (trace {trace:.12})")]
    NotUnitTrace { trace: f64 },

    #[error("matrix violates positive semidefiniteness (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("Kraus list is not trace-preserving (completeness residual {residual:.3e})")]
    NotTracePreserving { residual: f64 },

    #[error("Kraus list is empty")]
    EmptyKrausList,

    #[error("requested scaling vector is not CPTP-realizable: epsilon[{index}] = {epsilon:.3e} < 0")]
    InfeasibleScaling { index: usize, epsilon: f64 },

    #[error("scaling vector violates the channel constraint: {detail}")]
    ScalingConstraint { detail: String },

    #[error("parameter {name} = {value} outside the allowed range [{min}, {max}]")]
    ParameterRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("unsupported dimension {dim}: {context}")]
    UnsupportedDimension { dim: usize, context: &'static str },

    #[error("angle vector has wrong length for dimension {dim}: expected {expected}, got {got}")]
    BadAngleCount {
        dim: usize,
        expected: usize,
        got: usize,
    },

    #[error("projector set violates a measurement invariant: {detail}")]
    InvalidMeasurement { detail: String },

    #[error("no closed form for {kind} on a {d_a}x{d_b} system")]
    ClosedFormUnavailable {
        kind: &'static str,
        d_a: usize,
        d_b: usize,
    },

    #[error("state/channel pair is not a member of any {theorem} family: {witness}")]
    NotFamilyMember { theorem: String, witness: String },

    #[error("scaling profile does not match the selected theorem: {detail}")]
    ProfileMismatch { detail: String },

    #[error("internal consistency check failed: {detail}")]
    InternalConsistency { detail: String },

    #[error("invalid file: {0}")]
    InvalidFile(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
