use thiserror::Error;

/// Errors raised by the numeric pipeline. The CLI maps these onto its
/// exit-code contract: bad input (2), numerical failure (3), internal (4).
#[derive(Error, Debug)]
pub enum Error {
    #[error("E_MEASURE: {0}")]
    Measure(String),
    #[error("E_BASIS: {0}")]
    Basis(String),
    #[error("E_SHAPE: {0}")]
    Shape(String),
    #[error("E_RANGE: {0}")]
    Range(String),
    #[error("E_NOCONV: {0}")]
    NoConv(String),
    #[error("E_EIG: {0}")]
    Eig(String),
    #[error("E_SINGULAR: {0}")]
    Singular(String),
    #[error("E_BRANCH: {0}")]
    Branch(String),
    #[error("E_REGION: {0}")]
    Region(String),
    #[error("E_EMPTY: {0}")]
    Empty(String),
    #[error("E_COLLIDE: {0}")]
    Collide(String),
    #[error("E_POLE: {0}")]
    Pole(String),
    #[error("E_DEGENERATE: {0}")]
    Degenerate(String),
    #[error("E_PARSE: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code class for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Measure(_) | Error::Shape(_) | Error::Basis(_) | Error::Parse(_) => 2,
            Error::NoConv(_) | Error::Eig(_) => 3,
            _ => 4,
        }
    }
}
