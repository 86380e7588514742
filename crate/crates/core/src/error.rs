use thiserror::Error;

/// Errors raised by the algebra kernels, the norm solver and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },

    #[error("invalid signature ({0})")]
    InvalidSignature(String),

    #[error("element is not a unit: |Q| = {quadratic_form:e} is within the null-cone tolerance")]
    NullElement { quadratic_form: f64 },

    #[error("quadratic form must be positive, got {0:e}")]
    NonPositiveForm(f64),

    #[error("expected a pure grade-1 multivector")]
    NotGrade1,

    #[error("grade {grade} out of range 0..={max}")]
    GradeOutOfRange { grade: usize, max: usize },

    #[error("observer frame is not orthonormal: {0}")]
    InvalidFrame(String),

    #[error("operands belong to different observer frames")]
    FrameMismatch,

    #[error("boost velocity must satisfy |v| < 1, got {0}")]
    InvalidVelocity(f64),

    #[error("no uncurling metric satisfies the constraints: {0}")]
    EmptySolution(String),

    #[error("could not draw {wanted} samples with Q >= {q_floor} after {attempts} attempts")]
    SamplingFailure {
        wanted: usize,
        q_floor: f64,
        attempts: usize,
    },

    #[error(
        "path from 1 to the target crosses the null cone: Q = {q:e} < floor {q_floor:e} at t = {t}"
    )]
    PathCrossesNullCone { t: f64, q: f64, q_floor: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("evaluation paths disagree: {0}")]
    InternalMismatch(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
