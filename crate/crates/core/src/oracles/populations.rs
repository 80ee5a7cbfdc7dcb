use alloc::string::String;
use alloc::vec::Vec;

use super::fci::FciResult;
use crate::simulator::PairState;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationEntry {
    pub bits: u64,
    pub label: String,
    pub fci: f64,
    pub vqe: f64,
}

/// Closed-shell configuration weights of an FCI state and a pair state.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationReport {
    /// Top configurations by FCI weight, each paired with its weight in the
    /// pair state.
    pub entries: Vec<PopulationEntry>,
    /// Pair-state weights ranked on their own.
    pub vqe_ranked: Vec<(u64, f64)>,
    /// FCI weights ranked on their own.
    pub fci_ranked: Vec<(u64, f64)>,
    pub reference: u64,
}

impl PopulationReport {
    /// Largest non-reference FCI weight.
    pub fn top_excited_fci(&self) -> Option<(u64, f64)> {
        self.fci_ranked
            .iter()
            .copied()
            .find(|&(b, _)| b != self.reference)
    }

    pub fn top_excited_vqe(&self) -> Option<(u64, f64)> {
        self.vqe_ranked
            .iter()
            .copied()
            .find(|&(b, _)| b != self.reference)
    }

    /// `configuration,fci_population,vqe_population`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("configuration,fci_population,vqe_population\n");
        for e in &self.entries {
            out.push_str(&alloc::format!("{},{:.10},{:.10}\n", e.label, e.fci, e.vqe));
        }
        out
    }
}

fn ranked(mut v: Vec<(u64, f64)>) -> Vec<(u64, f64)> {
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    v
}

/// Ranks closed-shell configurations by FCI weight, keeping `top` of them.
pub fn seniority_zero_populations(
    fci: &FciResult,
    pair: &PairState,
    top: usize,
) -> Result<PopulationReport> {
    let basis = pair.basis();
    if basis.nqubits() != fci.strings().nqubits() || basis.npairs() != fci.strings().npairs() {
        return Err(Error::Mismatch(
            "FCI and pair state cover different spaces".into(),
        ));
    }
    let fci_ranked = ranked(fci.seniority_zero_weights());
    let vqe_ranked = ranked(
        basis
            .states()
            .iter()
            .zip(pair.amplitudes())
            .map(|(&b, a)| (b, a * a))
            .collect(),
    );
    let entries = fci_ranked
        .iter()
        .take(top)
        .map(|&(bits, w)| PopulationEntry {
            bits,
            label: basis.label(bits),
            fci: w,
            vqe: basis.rank(bits).map_or(0.0, |k| {
                let a = pair.amplitudes()[k];
                a * a
            }),
        })
        .collect();
    Ok(PopulationReport {
        entries,
        vqe_ranked: vqe_ranked.into_iter().take(top.max(2)).collect(),
        fci_ranked: fci_ranked.into_iter().take(top.max(2)).collect(),
        reference: basis.states()[basis.reference_index()],
    })
}
