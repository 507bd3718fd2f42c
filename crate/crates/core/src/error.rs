use thiserror::Error;

/// Errors raised by the numerical pipeline and the configuration layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "wavelength {wavelength} nm is outside the validity range of {model} ({min}-{max} nm)"
    )]
    OutOfRange {
        model: String,
        wavelength: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid material model {model}: {reason}")]
    InvalidMaterial { model: String, reason: String },

    #[error("invalid mode: {0}")]
    InvalidMode(String),

    #[error("mode past grazing: {0}")]
    Geometry(String),

    #[error("resonance pole: |1 - r1 r2 exp(2i phi)| = {denominator:e} is below 1e-9")]
    ResonancePole { denominator: f64 },

    #[error("near-singular scattering system (condition number {condition:e}); parametric oscillation threshold")]
    NearSingular { condition: f64 },

    #[error(
        "energy conservation requires signal wavelength {signal} nm > pump wavelength {pump} nm"
    )]
    EnergyConservation { pump: f64, signal: f64 },

    #[error("spectrum has no positive value to normalise against: {0}")]
    EmptySpectrum(String),

    #[error("R^2 undefined: {0}")]
    UndefinedRSquared(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors that stem from user input rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::InvalidMaterial { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
