use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice basis is singular (|det| = {det:e})")]
    SingularBasis { det: f64 },

    #[error("operation expects a {expected} scheme")]
    KindMismatch { expected: &'static str },

    #[error("character label {0} is not in the dual module of the scheme")]
    LabelOutOfModule(String),

    #[error("sampling region is empty")]
    EmptyRegion,

    #[error("displacement {0} has no lattice label")]
    DisplacementNotInModule(String),

    #[error("diffraction formula needs a one-dimensional interval window in a scheme with d = n = 1")]
    WindowNotInterval,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
