use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
}

impl ConfigError {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError::Invalid { field: field.into(), reason: reason.into() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssociationError {
    #[error("association has {got} slots but there are {expected} SBSs")]
    WrongLength { expected: usize, got: usize },
    #[error("SU {su} out of range (K = {k})")]
    SuOutOfRange { su: usize, k: usize },
    #[error("SU {su} assigned to both SBS {first} and SBS {second}")]
    NotOneToOne { su: usize, first: usize, second: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IlpError {
    /// `gamma0 * g00 <= beta0`: the macro-user row has no positive denominator.
    #[error("macro user infeasible: gamma0*g00 = {mu_signal} does not exceed beta0 = {beta0}")]
    MuInfeasible { mu_signal: f64, beta0: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("brute force refused: {count} associations exceed the enumeration cap of {cap}")]
    CapExceeded { count: BigUint, cap: u64 },
    #[error("weight vector has {got} entries, expected K*N = {expected}")]
    WeightShape { expected: usize, got: usize },
}
