//! Per-geometry pipelines and bond-length scans.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use pairvqe_core::nonbosonic::{
    fix_orbital_signs, nonbosonic_correction_sampled, nonbosonic_terms, NbRange, NbTerm,
    SignAssignment,
};
use pairvqe_core::oracles::{
    doci_ground_state, fci_ground_state_with, rhf_energy, DociResult, FciOptions, FciResult,
};
use pairvqe_core::orbital_opt::{oo_vqe_from, OoOptions, OoResult};
use pairvqe_core::simulator::{occupation_moments, sample_moments, PairState};
use pairvqe_core::vqe::{minimize_energy, EnergyMode, VqeOptions, VqeResult};
use pairvqe_core::{AnsatzCircuit, Hartree, IntegralSet, Method, PairHamiltonian};

use crate::error::{Error, Result};
use crate::fcidump::read_fcidump;
use crate::manifest::{Geometry, ScanManifest};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub vqe: VqeOptions,
    pub oo: OoOptions,
    pub nb_range: NbRange,
    pub fci: FciOptions,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            vqe: VqeOptions::exact(),
            oo: OoOptions::default(),
            nb_range: NbRange::default(),
            fci: FciOptions::default(),
        }
    }
}

impl PipelineOptions {
    pub fn from_manifest(m: &ScanManifest) -> Self {
        PipelineOptions {
            vqe: m.vqe,
            oo: OoOptions {
                macro_max: m.macro_max,
                macro_tolerance: m.macro_tolerance,
                ..OoOptions::default()
            },
            nb_range: m.nb_range,
            fci: FciOptions::default(),
        }
    }
}

/// Sign fixing and E_nB for one pair state.
#[derive(Debug, Clone)]
pub struct NbEvaluation {
    pub e_nb: Hartree,
    /// Zero with exact moments.
    pub stderr: Hartree,
    pub signs: SignAssignment,
    pub terms: Vec<NbTerm>,
}

fn evaluate_nb(
    s: &IntegralSet,
    st: &PairState,
    opts: &PipelineOptions,
    seed: u64,
) -> Result<NbEvaluation> {
    let signs = fix_orbital_signs(s, s.npairs())?;
    let fixed = s.apply_sign_flips(&signs.signs)?;
    let (moments, e_sampled) = match opts.vqe.mode {
        EnergyMode::Exact => (occupation_moments(st), None),
        EnergyMode::Sampled => {
            let sm = sample_moments(st, opts.vqe.shots, seed)?;
            let e = nonbosonic_correction_sampled(&fixed, st.basis(), &sm, opts.nb_range)?;
            (sm.moments, Some(e))
        }
    };
    let terms = nonbosonic_terms(&fixed, &moments, opts.nb_range)?;
    let (e_nb, stderr) = match e_sampled {
        Some(pair) => pair,
        None => (terms.iter().map(|t| t.contribution).sum(), 0.0),
    };
    Ok(NbEvaluation {
        e_nb,
        stderr,
        signs,
        terms,
    })
}

/// Everything computed for one set of active-space integrals.
#[derive(Debug, Clone)]
pub struct GeometryOutcome {
    pub energies: BTreeMap<Method, Hartree>,
    pub integrals: IntegralSet,
    pub vqe: Option<VqeResult>,
    pub oo: Option<OoResult>,
    pub nb_vqe: Option<NbEvaluation>,
    pub nb_oo: Option<NbEvaluation>,
    pub doci: Option<DociResult>,
    pub fci: Option<FciResult>,
}

impl GeometryOutcome {
    /// The oo correction when present, else the HF-orbital one.
    pub fn reported_nb(&self) -> Option<&NbEvaluation> {
        self.nb_oo.as_ref().or(self.nb_vqe.as_ref())
    }

    pub fn stderr(&self) -> Option<Hartree> {
        let r = self.oo.as_ref().map(|o| &o.vqe).or(self.vqe.as_ref())?;
        (r.mode == EnergyMode::Sampled).then_some(r.stderr)
    }
}

/// Runs `methods` on active-space integrals (cores already frozen).
pub fn run_pipeline(
    s: &IntegralSet,
    methods: &BTreeSet<Method>,
    opts: &PipelineOptions,
) -> Result<GeometryOutcome> {
    let has = |m: Method| methods.contains(&m);
    let mut energies = BTreeMap::new();
    if has(Method::Hf) {
        energies.insert(Method::Hf, rhf_energy(s, s.npairs()));
    }
    let needs_vqe = [Method::Vqe, Method::VqeNb, Method::OoVqe, Method::OoVqeNb]
        .into_iter()
        .any(has);
    let needs_oo = has(Method::OoVqe) || has(Method::OoVqeNb);
    let (mut vqe, mut oo, mut nb_vqe, mut nb_oo) = (None, None, None, None);
    if needs_vqe {
        let ph = PairHamiltonian::from_integrals(s);
        let circuit = AnsatzCircuit::with_order(
            s.npairs(),
            s.norb() - s.npairs(),
            opts.vqe.depth,
            opts.vqe.order,
        )?;
        let first = minimize_energy(&ph, &circuit, &opts.vqe)?;
        if has(Method::Vqe) {
            energies.insert(Method::Vqe, first.energy);
        }
        if has(Method::VqeNb) {
            let nb = evaluate_nb(s, &first.state, opts, opts.vqe.seed ^ 0x6E42)?;
            energies.insert(Method::VqeNb, first.energy + nb.e_nb);
            nb_vqe = Some(nb);
        }
        if needs_oo {
            let r = oo_vqe_from(s, &circuit, &opts.vqe, &opts.oo, Some(first.clone()))?;
            if has(Method::OoVqe) {
                energies.insert(Method::OoVqe, r.energy());
            }
            if has(Method::OoVqeNb) {
                let nb = evaluate_nb(
                    &r.rotated_integrals,
                    &r.vqe.state,
                    opts,
                    opts.vqe.seed ^ 0x6F6F,
                )?;
                energies.insert(Method::OoVqeNb, r.energy() + nb.e_nb);
                nb_oo = Some(nb);
            }
            oo = Some(r);
        }
        vqe = Some(first);
    }
    let doci = if has(Method::Doci) {
        let d = doci_ground_state(&PairHamiltonian::from_integrals(s))?;
        energies.insert(Method::Doci, d.energy);
        Some(d)
    } else {
        None
    };
    let fci = if has(Method::Fci) {
        let f = fci_ground_state_with(s, &opts.fci)?;
        energies.insert(Method::Fci, f.energy);
        Some(f)
    } else {
        None
    };
    Ok(GeometryOutcome {
        energies,
        integrals: s.clone(),
        vqe,
        oo,
        nb_vqe,
        nb_oo,
        doci,
        fci,
    })
}

/// Reads a geometry's FCIDUMP and freezes its core orbitals.
pub fn load_active(g: &Geometry) -> Result<IntegralSet> {
    Ok(read_fcidump(&g.fcidump)?.freeze_core(&g.frozen)?)
}

#[derive(Debug, Clone)]
pub struct GeometryReport {
    pub label: String,
    pub outcome: std::result::Result<GeometryOutcome, String>,
    pub wall_time: Duration,
}

impl GeometryReport {
    pub fn energy(&self, m: Method) -> Option<Hartree> {
        self.outcome.as_ref().ok()?.energies.get(&m).copied()
    }

    pub fn is_ok(&self) -> bool {
        self.outcome.is_ok()
    }
}

#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub name: String,
    pub rows: Vec<GeometryReport>,
}

pub const CSV_COLUMNS: [&str; 11] = [
    "label",
    "hf",
    "vqe",
    "vqe_nb",
    "oo_vqe",
    "oo_vqe_nb",
    "doci",
    "fci",
    "e_nb",
    "stderr",
    "status",
];

fn fmt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.10}")).unwrap_or_default()
}

impl EnergyReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(GeometryReport::is_ok)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_COLUMNS)?;
        for row in &self.rows {
            let e = |m| fmt(row.energy(m));
            let (e_nb, stderr, status) = match &row.outcome {
                Ok(o) => (
                    fmt(o.reported_nb().map(|n| n.e_nb)),
                    fmt(o.stderr()),
                    "ok".to_string(),
                ),
                Err(msg) => (String::new(), String::new(), format!("error: {msg}")),
            };
            w.write_record([
                row.label.clone(),
                e(Method::Hf),
                e(Method::Vqe),
                e(Method::VqeNb),
                e(Method::OoVqe),
                e(Method::OoVqeNb),
                e(Method::Doci),
                e(Method::Fci),
                e_nb,
                stderr,
                status,
            ])?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()?).map_err(crate::error::io_err(path))
    }
}

/// FNV-1a of the label, so a geometry's seed does not depend on scheduling.
pub fn geometry_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    seed ^ h
}

pub fn run_geometry(m: &ScanManifest, g: &Geometry) -> GeometryReport {
    let start = Instant::now();
    let mut opts = PipelineOptions::from_manifest(m);
    opts.vqe.seed = geometry_seed(m.vqe.seed, &g.label);
    let outcome = load_active(g)
        .and_then(|s| run_pipeline(&s, &m.methods, &opts))
        .map_err(|e| e.to_string());
    if let Err(msg) = &outcome {
        log::error!("{} {}: {msg}", m.name, g.label);
    } else {
        log::info!("{} {} done in {:.1?}", m.name, g.label, start.elapsed());
    }
    GeometryReport {
        label: g.label.clone(),
        outcome,
        wall_time: start.elapsed(),
    }
}

/// Runs every geometry, at most `workers` at a time; rows keep manifest order.
pub fn run_scan(m: &ScanManifest, workers: usize) -> Result<EnergyReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Manifest {
            path: m.path.clone(),
            message: format!("cannot start worker pool: {e}"),
        })?;
    let rows = pool.install(|| {
        m.geometries
            .par_iter()
            .map(|g| run_geometry(m, g))
            .collect()
    });
    Ok(EnergyReport {
        name: m.name.clone(),
        rows,
    })
}
