use std::fmt;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("pole near {location}: distance {distance:.3e} is inside the guard radius {guard:.1e}")]
    Pole {
        location: String,
        distance: f64,
        guard: f64,
    },
    #[error("accuracy budget exceeded in {context}: estimate {estimate:.3e}, budget {budget:.3e}")]
    Accuracy {
        context: String,
        estimate: f64,
        budget: f64,
    },
    #[error("no convergence in {context} after {evaluations} evaluations (error estimate {estimate:.3e})")]
    NonConvergence {
        context: String,
        estimate: f64,
        evaluations: usize,
    },
    #[error("unsupported input: {0}")]
    Domain(String),
    #[error("configuration error at `{key}`: {message}")]
    Config { key: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl fmt::Display) -> Self {
        Error::Domain(msg.to_string())
    }

    pub fn config(key: impl Into<String>, message: impl fmt::Display) -> Self {
        Error::Config {
            key: key.into(),
            message: message.to_string(),
        }
    }

    pub fn pole(location: impl fmt::Display, distance: f64, guard: f64) -> Self {
        Error::Pole {
            location: location.to_string(),
            distance,
            guard,
        }
    }
}
