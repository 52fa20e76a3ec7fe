use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero ideal in {0}")]
    ZeroIdeal(&'static str),
    #[error("ideal {0} is not integral")]
    NotIntegral(String),
    #[error("cannot parse {0}")]
    Parse(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point is not on the surface: {0}")]
    NotOnSurface(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("integration did not converge: {0}")]
    NoConvergence(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
