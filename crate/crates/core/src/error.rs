use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the solver, mode construction, and evolution routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid permittivity: {0}")]
    InvalidPermittivity(String),

    #[error("invalid mode ({n_x},{n_y},{n_z}) {pol}: {reason}")]
    InvalidMode {
        n_x: u32,
        n_y: u32,
        n_z: u32,
        pol: &'static str,
        reason: String,
    },

    /// The argument of tan(sqrt(s) d) sits inside the pole-proximity band.
    /// The root bracketer treats such points as discontinuities.
    #[error("tan argument {theta} within pole-proximity band")]
    NearPole { theta: f64 },

    #[error("root not bracketed in scanned interval [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("root tracking lost its bracket during continuation at eps_slab = {eps_slab}")]
    ContinuationFailed { eps_slab: f64 },

    #[error("mode functions built for different geometry or permittivity")]
    FrameMismatch,

    #[error("degenerate mode function: {0}")]
    DegenerateModeFunction(String),

    #[error("invalid drive: {0}")]
    InvalidDrive(String),

    /// Central-difference step too coarse: halving h moved the result by
    /// more than 1%.
    #[error("coupling step too large: M(h) = {coarse}, M(h/2) = {fine}")]
    StepRefinement { coarse: f64, fine: f64 },

    #[error("Wronskian drift {drift:e} exceeds budget at {steps_per_period} steps per period")]
    StepSizeFailure { drift: f64, steps_per_period: u32 },

    /// First-order residuals sit at solver tolerance (or are non-monotone),
    /// so a log-log order fit would measure noise.
    #[error("residual underflow: residuals at solver tolerance or non-monotone")]
    ResidualUnderflow,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
