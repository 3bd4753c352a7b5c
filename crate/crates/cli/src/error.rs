use horogeo_core::horo::HoroError;
use horogeo_core::multicurve::MulticurveError;
use horogeo_core::{GeodesicError, OrigamiError, PerronError, SurfaceError};
use thiserror::Error;

/// Every failure the driver can report, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed file, bad flag or invalid configuration.
    #[error("{0}")]
    Input(String),
    /// The inputs violate a hypothesis (not filling, not primitive).
    #[error("{0}")]
    Hypothesis(String),
    /// Numerical iteration failed to converge.
    #[error("{0}")]
    Convergence(String),
    /// A certificate or exact identity failed.
    #[error("{0}")]
    Certificate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Hypothesis(_) => 3,
            CliError::Convergence(_) => 4,
            CliError::Certificate(_) => 5,
        }
    }

    pub fn input(msg: impl std::fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }

    pub fn certificate(msg: impl std::fmt::Display) -> Self {
        CliError::Certificate(msg.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("JSON: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(format!("CSV: {e}"))
    }
}

impl From<OrigamiError> for CliError {
    fn from(e: OrigamiError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<MulticurveError> for CliError {
    fn from(e: MulticurveError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SurfaceError> for CliError {
    fn from(e: SurfaceError) -> Self {
        match e {
            SurfaceError::Interval(_) => CliError::Certificate(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PerronError> for CliError {
    fn from(e: PerronError) -> Self {
        match e {
            PerronError::NotPrimitive => CliError::Hypothesis(e.to_string()),
            PerronError::NoConvergence { .. } => CliError::Convergence(e.to_string()),
            PerronError::RayMismatch { .. } => CliError::Certificate(e.to_string()),
            PerronError::NotSquare { .. }
            | PerronError::BadEntries
            | PerronError::BadTolerance(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<GeodesicError> for CliError {
    fn from(e: GeodesicError) -> Self {
        match e {
            GeodesicError::Perron(p) => p.into(),
            GeodesicError::NotFilling | GeodesicError::PartialSupport => {
                CliError::Hypothesis(e.to_string())
            }
            GeodesicError::SideMismatch { .. }
            | GeodesicError::HostMismatch
            | GeodesicError::Multicurve(_) => CliError::Input(e.to_string()),
            GeodesicError::Surface(s) => s.into(),
            GeodesicError::SystemResidual { .. }
            | GeodesicError::WalshMismatch { .. }
            | GeodesicError::FlowCertification { .. } => CliError::Certificate(e.to_string()),
        }
    }
}

impl From<HoroError> for CliError {
    fn from(e: HoroError) -> Self {
        match e {
            HoroError::Surface(s) => s.into(),
            HoroError::HostMismatch | HoroError::BaseOffLine | HoroError::EmptyFamily => {
                CliError::Input(e.to_string())
            }
            HoroError::Violation { .. } | HoroError::Interval(_) => {
                CliError::Certificate(e.to_string())
            }
        }
    }
}
