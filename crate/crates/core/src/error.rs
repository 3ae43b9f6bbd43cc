use thiserror::Error;

/// Errors produced by the simulation and analysis layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("{what} = {value} lies outside [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("node index {index} out of range for a graph on {n} nodes")]
    NodeIndex { index: usize, n: usize },

    /// The phase transition curve mapped a phase outside `[0, 2π]`,
    /// i.e. the profile breaks the delay-advance contraction bounds.
    #[error("PTC left [0, 2pi]: psi({theta}) = {psi}")]
    PtcRange { theta: f64, psi: f64 },

    #[error("event contract violated: {0}")]
    Contract(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
