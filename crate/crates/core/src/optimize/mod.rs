//! Derivative-free and quasi-Newton minimizers for the VQE and orbital loops.

mod bfgs;
mod nelder_mead;
mod spsa;

pub use bfgs::{bfgs, BfgsOptions};
pub use nelder_mead::{nelder_mead, NelderMeadOptions};
pub use spsa::{spsa, SpsaOptions};

use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best value seen after each iteration (for SPSA, the latest noisy value).
    pub trace: Vec<f64>,
}
