use std::collections::BTreeSet;

use pairvqe_core::oracles::{seniority_zero_populations, PopulationReport};
use pairvqe_core::Method;

use crate::error::{Error, Result};
use crate::manifest::ScanManifest;
use crate::scan::{geometry_seed, load_active, run_pipeline, PipelineOptions};

/// Top-k closed-shell configuration weights of FCI and of the pair state at
/// one geometry. Uses the HF-orbital VQE when `vqe` is in the method set,
/// otherwise the oo-vqe state against FCI in the optimized orbitals.
pub fn report_populations(m: &ScanManifest, label: &str, top: usize) -> Result<PopulationReport> {
    let bad = |message: String| Error::Manifest {
        path: m.path.clone(),
        message,
    };
    let g = m
        .geometry(label)
        .ok_or_else(|| bad(format!("no geometry labelled {label:?}")))?;
    if !m.methods.contains(&Method::Fci) {
        return Err(bad("populations need fci in the method set".into()));
    }
    let use_oo = !m.methods.contains(&Method::Vqe);
    if use_oo && !m.methods.contains(&Method::OoVqe) {
        return Err(bad(
            "populations need vqe or oo-vqe in the method set".into()
        ));
    }
    let s = load_active(g)?;
    let mut opts = PipelineOptions::from_manifest(m);
    opts.vqe.seed = geometry_seed(m.vqe.seed, label);
    let pair = if use_oo { Method::OoVqe } else { Method::Vqe };
    let methods: BTreeSet<Method> = [pair].into_iter().collect();
    let out = run_pipeline(&s, &methods, &opts)?;
    let (orbitals, state) = match &out.oo {
        Some(r) if use_oo => (r.rotated_integrals.clone(), r.vqe.state.clone()),
        _ => (s, out.vqe.expect("vqe ran").state),
    };
    let fci = pairvqe_core::oracles::fci_ground_state_with(&orbitals, &opts.fci)?;
    Ok(seniority_zero_populations(&fci, &state, top)?)
}
