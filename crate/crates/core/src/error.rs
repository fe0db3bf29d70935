use thiserror::Error;

/// Errors produced anywhere in the compile/simulate/verify pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("Pauli principle violated: {0}")]
    PauliPrinciple(String),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported Pauli string shape: {0}")]
    UnsupportedShape(String),
    #[error("wiring error: {0}")]
    Wiring(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_index(index: usize, n: usize) -> Result<()> {
    if index == 0 || index > n {
        Err(Error::IndexOutOfRange { index, n })
    } else {
        Ok(())
    }
}
