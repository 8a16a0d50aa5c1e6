use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("undamped oscillator evaluated exactly at its resonance ω_T = {omega_t:e} rad/s")]
    PoleHit { omega_t: f64 },

    #[error("ε(ω) = -1 within tolerance at ω = {omega}: evaluation sits on a surface-polariton pole")]
    SurfaceModePole { omega: String },

    #[error("no surface-polariton mode found: {0}")]
    NoModeFound(String),

    #[error("adaptive quadrature did not reach relative tolerance {tolerance:e} within {evaluations} evaluations (estimate {estimate:e})")]
    QuadratureFailure {
        tolerance: f64,
        evaluations: usize,
        estimate: f64,
    },

    #[error("Matsubara frequencies require T > 0; use the zero-temperature integral instead")]
    ZeroTemperature,

    #[error("Matsubara sum not converged at cutoff {cutoff}: tail estimate {tail:e} relative to tolerance {tolerance:e}")]
    ConvergenceFailure {
        cutoff: usize,
        tail: f64,
        tolerance: f64,
    },

    #[error("resonance condition violated: |Ω₁ - (ω₁₀ + Ω₂)| = {detuning:e} rad/s exceeds {window:e} rad/s")]
    OffResonance { detuning: f64, window: f64 },

    #[error("no intermediate state couples '{lower}' and '{upper}'")]
    NoChannels { upper: String, lower: String },

    #[error("Tr Im G vanishes at ω = {omega:e} rad/s: the surface does not absorb there, so the mode has no width")]
    VanishingLdos { omega: f64 },

    #[error("mode attribution failed: {0}")]
    ModeAttribution(String),

    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("dipole {field} references unknown state '{label}'")]
    DanglingReference { field: String, label: String },

    #[error("unknown state '{0}'")]
    UnknownState(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the error is a configuration/input problem (as opposed to a
    /// failure of the physics evaluation itself).
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::DanglingReference { .. }
                | Error::UnknownState(_)
                | Error::InvalidInput(_)
                | Error::Io(_)
        )
    }
}
