//! Crate-wide error type.

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration value violates an invariant (non-PSD covariance,
    /// empty swarm, bad grid bounds, ...).
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Geometry degenerated (tracker coincides with the evaluated target
    /// position, so distances and path-loss terms blow up).
    #[error("degenerate geometry: {0}")]
    Geometry(String),
    /// A numerical operation failed (singular matrix, non-finite input,
    /// quadrature breakdown).
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// A failure inside a simulation run, tagged with the step it occurred at.
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Error {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
