use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("the p-adic valuation of 0 is undefined")]
    ZeroValuation,
    #[error("binomial lower index {r} exceeds upper index {n}")]
    BinomialRange { n: u64, r: u64 },
    #[error("block length k must be at least 1")]
    EmptyBlock,
    #[error("a + b = {sum} is smaller than n = {n}")]
    NegativeK { sum: u64, n: u64 },
    #[error("prime {p} does not exceed 2k = {two_k}")]
    NotLargePrime { p: u64, two_k: u64 },
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
    #[error("divisibility oracles disagree on {0}")]
    OracleDisagreement(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}
