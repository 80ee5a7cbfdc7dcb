use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid integrals: {0}")]
    InvalidIntegrals(String),

    #[error("orbital index {index} out of range for {norb} orbitals")]
    OrbitalIndex { index: usize, norb: usize },

    #[error("dimension mismatch: expected {expected}, got {actual} ({what})")]
    Dimension {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("incompatible inputs: {0}")]
    Mismatch(String),

    #[error("matrix is not orthogonal (max deviation {0:e})")]
    NotOrthogonal(f64),

    #[error("matrix is not antisymmetric (max deviation {0:e})")]
    NotAntisymmetric(f64),

    #[error("{what} dimension {dim} exceeds the limit {limit}")]
    SizeGuard {
        what: &'static str,
        dim: usize,
        limit: usize,
    },

    #[error("occupation moment <(1-n_{r}) n_{p}> = {value:e} is negative")]
    NegativeMoment { p: usize, r: usize, value: f64 },

    #[error("orbital optimization energy rose by {rise:e} Ha at macro iteration {iteration}")]
    NonMonotone { iteration: usize, rise: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid option: {0}")]
    InvalidOption(String),
}
