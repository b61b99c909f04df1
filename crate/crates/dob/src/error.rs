use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no roots defined for a constant or zero polynomial")]
    NoRootsDefined,

    #[error("zero polynomial has no stability classification")]
    ZeroPolynomial,

    #[error("realization requires properness (relative degree {0})")]
    ImproperTransferFunction(i64),

    #[error("transfer function has a pole at the requested frequency omega = {omega}")]
    PoleAtFrequency { omega: f64 },

    #[error("inverse of a transfer function with zero numerator")]
    InvertZero,

    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("choose a1..a_nu-1 Hurwitz first (reduced polynomial has a root with real part {worst_real_part})")]
    NonHurwitzTail { worst_real_part: f64 },

    #[error("frequency grid too coarse: argument step {step} rad exceeds pi/2 near omega = {omega}")]
    CoarseGrid { omega: f64, step: f64 },

    #[error("gain interval too wide for this a-tail: no a0 within 60 halvings of {a0_initial}")]
    NoFeasibleA0 { a0_initial: f64 },

    #[error("nominal model parameters fall outside the family bounds ({field})")]
    NominalOutsideFamily { field: String },

    #[error("eigenvalue count mismatch: expected {expected}, realization produced {got}")]
    EigenvalueCountMismatch { expected: usize, got: usize },

    #[error("step too large for stiff loop: dt = {dt} against fastest mode |lambda| = {lambda_max:.3e} (need |lambda|*dt <= 0.5)")]
    StepTooLarge { dt: f64, lambda_max: f64 },

    #[error("closed loop is unstable (eigenvalue with real part {real_part:.6e})")]
    UnstableLoop { real_part: f64 },

    #[error("divergence at t = {t:.6e}: state norm {state_norm:.3e} exceeds 1e6 (max |u| seen {max_abs_u:.3e})")]
    Divergence {
        t: f64,
        state_norm: f64,
        max_abs_u: f64,
    },

    #[error("trace grids do not match: {reason}")]
    GridMismatch { reason: String },

    #[error("plant gain g = {g:.6e} is not strictly positive at the query point")]
    NonPositiveGain { g: f64 },

    #[error("{0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
