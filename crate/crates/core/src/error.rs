use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("mismatched cyclotomic rings: Q(zeta_{0}) vs Q(zeta_{1})")]
    RingMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("character is not primitive (modulus {modulus}, conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },
    #[error("parity mismatch: (-1)^{k} != chi(-1)")]
    ParityMismatch { k: u32 },
    #[error("generalized Bernoulli number B_{{{k},chi}} vanishes")]
    ZeroBernoulli { k: u32 },
    #[error("constant term is not a unit at p = {0}")]
    NonUnitConstant(u64),
    #[error("ring Z[zeta_{n}] is not totally ramified at p = {p}")]
    NotTotallyRamified { n: u64, p: u64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no stabilization up to level {0}")]
    NoStabilization(u32),
    #[error("zero ideal has infinite torsion")]
    ZeroIdeal,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
