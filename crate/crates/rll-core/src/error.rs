use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("run-length set is empty")]
    EmptySet,
    #[error("run-length set must contain at least two lengths")]
    SingletonSet,
    #[error("run lengths have gcd {0} > 1; counts would live on a sub-lattice of n")]
    NonCoprime(u64),
    #[error("run lengths must be positive integers")]
    NonPositiveElement,
    #[error("interval bounds are inverted or degenerate")]
    BadInterval,
    #[error("power sums diverge at x = {0} for an unbounded run-length set")]
    DomainError(f64),
    #[error("root solve did not converge: {0}")]
    ConvergenceFailure(&'static str),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("brute-force enumeration is capped at n = {max} (requested n = {n})")]
    TooLarge { n: u64, max: u64 },
    #[error("block length {lb} does not divide n = {n}")]
    NotBlockAligned { lb: u64, n: u64 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("empty input series")]
    EmptySeries,
    #[error("capacity is undefined for the requested target")]
    CapacityOutOfRange,
    #[error("grid does not align with the requested rational parameters: {0}")]
    MisalignedGrid(String),
    #[error("sampler exceeded its rejection budget")]
    SamplerStuck,
}

pub type Result<T> = std::result::Result<T, Error>;
