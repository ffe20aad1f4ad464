use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("invalid pattern ({s1},{s2}): s1 + s2 must be at least 1")]
    InvalidPattern { s1: u32, s2: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("oracle limit exceeded: {0}")]
    OracleLimit(String),

    #[error("divergent series: {0}")]
    Divergent(String),

    #[error("target error {target:e} not reached: value {value} with estimated error {achieved:e}")]
    NotConverged {
        value: f64,
        achieved: f64,
        target: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
