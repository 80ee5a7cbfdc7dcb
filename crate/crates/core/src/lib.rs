//! Seniority-zero (pair-correlated) VQE engine.
//!
//! One qubit per spatial orbital: a set qubit is a doubly occupied orbital.
//! The crate covers the whole classical pipeline on top of an [`IntegralSet`]:
//! reduction to the hard-core boson [`PairHamiltonian`], simulation of the
//! exchange-gate ansatz, the VQE outer loop, orbital optimization, orbital sign
//! fixing with the non-bosonic energy correction, and brute-force DOCI/FCI
//! references to check all of it against.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the scan CLI
//! live in the `pairvqe` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

mod error;
pub mod integrals;
pub mod linalg;
pub mod nonbosonic;
pub mod optimize;
pub mod oracles;
pub mod orbital_opt;
pub mod pairham;
pub mod simulator;
pub mod vqe;

pub use error::{Error, Result};
pub use integrals::IntegralSet;
pub use pairham::{PairHamiltonian, PauliTermGroups};
pub use simulator::{AnsatzCircuit, PairBasis, PairState};

/// Energies in this crate are total molecular energies in Hartree.
pub type Hartree = f64;

/// Method labels used in scan reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Hf,
    Vqe,
    OoVqe,
    VqeNb,
    OoVqeNb,
    Doci,
    Fci,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Hf,
        Method::Vqe,
        Method::OoVqe,
        Method::VqeNb,
        Method::OoVqeNb,
        Method::Doci,
        Method::Fci,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::Hf => "hf",
            Method::Vqe => "vqe",
            Method::OoVqe => "oo-vqe",
            Method::VqeNb => "vqe-nB",
            Method::OoVqeNb => "oo-vqe-nB",
            Method::Doci => "doci",
            Method::Fci => "fci",
        }
    }

    pub fn from_label(label: &str) -> Option<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.label().eq_ignore_ascii_case(label))
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}
