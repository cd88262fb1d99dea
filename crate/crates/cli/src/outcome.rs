use std::fmt::Display;

use fecam_core::forecaster::ForecastError;

/// An error paired with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    kind: Kind,
    error: anyhow::Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// A checked property did not hold.
    Property = 1,
    /// Bad flags, unreadable inputs, inconsistent files.
    Usage = 2,
    Diverged = 3,
}

impl Failure {
    pub fn new(kind: Kind, error: impl Into<anyhow::Error>) -> Self {
        Self { kind, error: error.into() }
    }

    pub fn usage(msg: impl Display) -> Self {
        Self::new(Kind::Usage, anyhow::anyhow!("{msg}"))
    }

    pub fn property(msg: impl Display) -> Self {
        Self::new(Kind::Property, anyhow::anyhow!("{msg}"))
    }

    pub fn code(&self) -> u8 {
        self.kind as u8
    }

    pub fn message(&self) -> String {
        format!("{:#}", self.error)
    }
}

impl From<ForecastError> for Failure {
    fn from(e: ForecastError) -> Self {
        let kind = match e {
            ForecastError::Diverged { .. } => Kind::Diverged,
            _ => Kind::Usage,
        };
        Self::new(kind, e)
    }
}

/// Anything else (I/O, malformed files, domain errors) is a usage error.
pub trait OrUsage<T> {
    fn or_usage(self, context: &str) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> OrUsage<T> for Result<T, E> {
    fn or_usage(self, context: &str) -> Result<T, Failure> {
        self.map_err(|e| Failure::new(Kind::Usage, e.into().context(context.to_string())))
    }
}
