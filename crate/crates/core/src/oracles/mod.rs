//! Brute-force references: DOCI, full CI in the Ms = 0 determinant space,
//! the closed-shell RHF energy, and configuration populations.

mod davidson;
mod doci;
mod fci;
mod populations;
mod slater;

pub use davidson::{davidson, DavidsonOptions, Eigenpair, LinearOperator};
pub use doci::{dense_pair_matrix, doci_ground_state, DociResult, DOCI_MAX_DIM};
pub use fci::{fci_ground_state, fci_ground_state_with, FciOptions, FciResult, FciSolver};
pub use populations::{seniority_zero_populations, PopulationEntry, PopulationReport};
pub use slater::{
    determinant_energy_matrix, determinant_matrix_element, seniority_zero_fci_energy,
};

use crate::integrals::IntegralSet;
use crate::Hartree;

/// E_core + 2 Σ_{i<n} h_ii + Σ_{i,j<n} (2 (ii|jj) − (ij|ji)).
pub fn rhf_energy(s: &IntegralSet, npairs: usize) -> Hartree {
    let g = s.eri();
    let n = npairs.min(s.norb());
    let mut e = s.e_core();
    for i in 0..n {
        e += 2.0 * s.h()[(i, i)];
        for j in 0..n {
            e += 2.0 * g.get(i, i, j, j) - g.get(i, j, j, i);
        }
    }
    e
}
