use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A point or geometry outside the valid coordinate patch.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Operator/model mismatch, e.g. a surface operator applied to a layer basis.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("basis is linearly dependent under the weighted inner product (function {index}: pivot norm {pivot:.3e} vs initial {initial:.3e})")]
    LinearDependence {
        index: usize,
        pivot: f64,
        initial: f64,
    },

    #[error("overlap matrix is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("assembled Hamiltonian asymmetry {0:.3e} exceeds tolerance; quadrature too coarse or boundary conditions violated")]
    Asymmetry(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("coefficient convention error: {0}")]
    Convention(String),

    #[error("config error{at}, key `{key}`: {message}", at = .line.map_or_else(String::new, |l| format!(" at line {l}")))]
    Config {
        key: String,
        line: Option<usize>,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, line: Option<usize>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            line,
            message: message.into(),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Argument(_) | Error::Domain(_) | Error::Contract(_) => 2,
            Error::Io(_) => 4,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
