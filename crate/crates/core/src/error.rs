use thiserror::Error;

/// Errors raised by bound evaluation, the information oracles and the
/// scheme simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid probability mass function: {0}")]
    InvalidPmf(String),

    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error("covariance block {block:?} is singular (pivot {pivot:e} below threshold {threshold:e})")]
    SingularCovariance {
        block: Vec<usize>,
        pivot: f64,
        threshold: f64,
    },

    #[error("{op} is not defined for K = {k}")]
    UnsupportedUsers { op: &'static str, k: usize },

    #[error("{op} supports at most {max} users, got {k}")]
    TooManyUsers {
        op: &'static str,
        k: usize,
        max: usize,
    },

    #[error("invalid joint distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid channel specification: {0}")]
    InvalidSpec(String),

    #[error("invalid simulation run: {0}")]
    InvalidRun(String),

    #[error("codebook of {codewords} words exceeds the decoding cap of {cap}")]
    Infeasible { codewords: f64, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_probability(what: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            domain: "[0, 1]",
        })
    }
}

pub(crate) fn check_nonnegative(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            domain: "[0, inf)",
        })
    }
}
