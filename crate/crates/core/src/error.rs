use thiserror::Error;

use crate::critical::ConicKind;
use crate::normalize::{ClassLabel, TraceStep};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("map has no quadratic terms above tolerance")]
    NotQuadratic,

    #[error("affine map is singular (det = {det:e})")]
    SingularAffine { det: f64 },

    #[error("critical set is empty")]
    EmptyCriticalSet,

    #[error("critical set is not a curve (J0 is {kind:?})")]
    NotACurve { kind: ConicKind },

    #[error("cubic has no guaranteed positive root: {reason}")]
    NoGuaranteedRoot { reason: String },

    #[error("b10 = {b10} is an excluded branch value (0 or \u{b1}1/2)")]
    WrongBranch { b10: f64 },

    #[error("long-case equations not satisfied (max residual {max:e})")]
    LongCaseResidual { residuals: Vec<f64>, max: f64 },

    #[error("witness verification failed for {label}: residual {residual:e} exceeds {limit:e}")]
    Verification {
        label: ClassLabel,
        residual: f64,
        limit: f64,
        trace: Vec<TraceStep>,
    },

    #[error("map has no quadratic inverse (class {label})")]
    NotInvertible { label: ClassLabel },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
