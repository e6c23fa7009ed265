use thiserror::Error;

/// Everything that can go wrong while analysing a curve.
///
/// Variants fall in two families: violated hypotheses on the input (the
/// caller's fault) and internal consistency failures (a bug, or an input the
/// theory does not cover). [`Error::is_internal`] tells them apart.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent n = {0} must be at least 2")]
    ExponentTooSmall(u64),
    #[error("residue characteristic p = {p} divides n = {n}")]
    ResidueCharDividesN { p: u64, n: u64 },
    #[error("zeta_{n} is not in the base field: n = {n} does not divide p - 1 = {}", p - 1)]
    NoRootsOfUnityInBase { p: u64, n: u64 },
    #[error("polynomial not separable: roots {0} and {1} coincide")]
    NotSeparable(usize, usize),
    #[error("leading coefficient must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("curve has genus 0")]
    GenusZero,
    #[error("{count} roots exceeds the limit of {limit}")]
    TooManyRoots { count: usize, limit: usize },
    #[error("zero has no unit residue")]
    ZeroHasNoUnitResidue,
    #[error("{0} is not p-integral")]
    NotIntegral(String),
    #[error("no {d}-th roots of unity in residue field F_{p}")]
    NoRootsOfUnity { d: u64, p: u64 },
    #[error("discrete logarithm of zero")]
    DlogOfZero,
    #[error("triple oracle limited to {limit} marked points, got {count}")]
    OracleTooLarge { count: usize, limit: usize },
    #[error("inconsistent root-of-unity normalization: {0}")]
    InconsistentNormalization(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures that indicate a broken invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InconsistentNormalization(_) | Error::Internal(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
