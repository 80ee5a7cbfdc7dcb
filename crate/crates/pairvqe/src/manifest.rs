//! Scan manifests (TOML). Relative paths resolve against the manifest's
//! directory; frozen orbitals use the FCIDUMP's 1-based numbering.
//!
//! ```toml
//! methods = ["hf", "vqe", "fci"]
//! output = "h2_scan.csv"
//!
//! [vqe]
//! mode = "exact"
//! seed = 7
//!
//! [[geometry]]
//! label = "0.735"
//! fcidump = "h2/h2_0.735.fcidump"
//! frozen = []
//! ```

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use pairvqe_core::nonbosonic::NbRange;
use pairvqe_core::simulator::GateOrder;
use pairvqe_core::vqe::{EnergyMode, OptimizerKind, VqeOptions};
use pairvqe_core::Method;

use crate::error::{io_err, Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    name: Option<String>,
    methods: Vec<String>,
    output: Option<PathBuf>,
    depth: Option<usize>,
    #[serde(default)]
    vqe: RawVqe,
    #[serde(default)]
    orbital_optimization: RawOo,
    #[serde(default)]
    nonbosonic: RawNb,
    #[serde(default)]
    geometry: Vec<RawGeometry>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVqe {
    mode: Option<String>,
    shots: Option<u64>,
    optimizer: Option<String>,
    max_iterations: Option<usize>,
    energy_tolerance: Option<f64>,
    restarts: Option<usize>,
    seed: Option<u64>,
    order: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOo {
    macro_max: Option<usize>,
    macro_tolerance: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNb {
    range: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    label: String,
    fcidump: PathBuf,
    #[serde(default)]
    frozen: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub label: String,
    pub fcidump: PathBuf,
    /// 0-based.
    pub frozen: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanManifest {
    pub name: String,
    pub path: PathBuf,
    pub methods: BTreeSet<Method>,
    pub geometries: Vec<Geometry>,
    pub vqe: VqeOptions,
    pub macro_max: usize,
    pub macro_tolerance: f64,
    pub nb_range: NbRange,
    pub output: Option<PathBuf>,
}

/// Overrides taken from the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub mode: Option<EnergyMode>,
}

pub fn parse_mode(s: &str) -> Option<EnergyMode> {
    match s.to_ascii_lowercase().as_str() {
        "exact" => Some(EnergyMode::Exact),
        "sampled" => Some(EnergyMode::Sampled),
        _ => None,
    }
}

fn parse_optimizer(s: &str) -> Option<OptimizerKind> {
    match s.to_ascii_lowercase().as_str() {
        "simplex" | "nelder-mead" => Some(OptimizerKind::Simplex),
        "quasi-newton" | "bfgs" => Some(OptimizerKind::QuasiNewton),
        "spsa" | "stochastic-approximation" => Some(OptimizerKind::StochasticApproximation),
        _ => None,
    }
}

impl ScanManifest {
    pub fn load(path: impl AsRef<Path>) -> Result<ScanManifest> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(&text, path)
    }

    /// Parses manifest text; `path` anchors relative paths.
    pub fn parse(text: &str, path: &Path) -> Result<ScanManifest> {
        let bad = |message: String| Error::Manifest {
            path: path.to_path_buf(),
            message,
        };
        let raw: RawManifest = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &Path| {
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };

        if raw.methods.is_empty() {
            return Err(bad("the method set is empty".into()));
        }
        let mut methods = BTreeSet::new();
        for m in &raw.methods {
            let method =
                Method::from_label(m).ok_or_else(|| bad(format!("unknown method {m:?}")))?;
            methods.insert(method);
        }
        if methods.contains(&Method::VqeNb) && !methods.contains(&Method::Vqe) {
            return Err(bad("vqe-nB needs vqe in the method set".into()));
        }
        if methods.contains(&Method::OoVqeNb) && !methods.contains(&Method::OoVqe) {
            return Err(bad("oo-vqe-nB needs oo-vqe in the method set".into()));
        }

        let mode = match &raw.vqe.mode {
            Some(m) => parse_mode(m).ok_or_else(|| bad(format!("unknown mode {m:?}")))?,
            None => EnergyMode::Exact,
        };
        let mut vqe = match mode {
            EnergyMode::Exact => VqeOptions::exact(),
            EnergyMode::Sampled => VqeOptions::sampled(raw.vqe.shots.unwrap_or(100_000)),
        };
        if let Some(o) = &raw.vqe.optimizer {
            vqe.optimizer =
                parse_optimizer(o).ok_or_else(|| bad(format!("unknown optimizer {o:?}")))?;
        }
        if let Some(v) = raw.vqe.shots {
            vqe.shots = v;
        }
        if let Some(v) = raw.vqe.max_iterations {
            vqe.max_iterations = v;
        }
        if let Some(v) = raw.vqe.energy_tolerance {
            vqe.energy_tolerance = v;
        }
        if let Some(v) = raw.vqe.restarts {
            vqe.restarts = v;
        }
        if let Some(v) = raw.vqe.seed {
            vqe.seed = v;
        }
        if let Some(o) = &raw.vqe.order {
            vqe.order = match o.as_str() {
                "occupied-descending" => GateOrder::OccupiedDescending,
                "occupied-ascending" => GateOrder::OccupiedAscending,
                _ => return Err(bad(format!("unknown gate order {o:?}"))),
            };
        }
        if let Some(d) = raw.depth {
            vqe.depth = d;
        }
        vqe.validate().map_err(|e| bad(e.to_string()))?;

        let nb_range = match raw.nonbosonic.range.as_deref() {
            None | Some("reference-blocks") => NbRange::ReferenceBlocks,
            Some("unrestricted") => NbRange::Unrestricted,
            Some(o) => return Err(bad(format!("unknown non-bosonic range {o:?}"))),
        };

        if raw.geometry.is_empty() {
            return Err(bad("no [[geometry]] entries".into()));
        }
        let mut labels = BTreeSet::new();
        let mut geometries = Vec::new();
        for g in raw.geometry {
            if !labels.insert(g.label.clone()) {
                return Err(bad(format!("duplicate geometry label {:?}", g.label)));
            }
            let fcidump = resolve(&g.fcidump);
            if !fcidump.is_file() {
                return Err(bad(format!("{} is not readable", fcidump.display())));
            }
            let frozen = g
                .frozen
                .iter()
                .map(|&f| {
                    f.checked_sub(1).ok_or_else(|| {
                        bad(format!(
                            "frozen orbitals are 1-based; got 0 in {:?}",
                            g.label
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            geometries.push(Geometry {
                label: g.label,
                fcidump,
                frozen,
            });
        }
        let oo = pairvqe_core::orbital_opt::OoOptions::default();
        Ok(ScanManifest {
            name: raw.name.unwrap_or_else(|| {
                path.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            }),
            path: path.to_path_buf(),
            methods,
            geometries,
            vqe,
            macro_max: raw.orbital_optimization.macro_max.unwrap_or(oo.macro_max),
            macro_tolerance: raw
                .orbital_optimization
                .macro_tolerance
                .unwrap_or(oo.macro_tolerance),
            nb_range,
            output: raw.output.map(|p| resolve(&p)),
        })
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(mode) = o.mode {
            if mode != self.vqe.mode {
                let seed = self.vqe.seed;
                let (depth, order) = (self.vqe.depth, self.vqe.order);
                self.vqe = match mode {
                    EnergyMode::Exact => VqeOptions::exact(),
                    EnergyMode::Sampled => VqeOptions::sampled(self.vqe.shots),
                };
                self.vqe.seed = seed;
                self.vqe.depth = depth;
                self.vqe.order = order;
            }
        }
        if let Some(s) = o.seed {
            self.vqe.seed = s;
        }
        if let Some(s) = o.shots {
            self.vqe.shots = s;
        }
        self.vqe.validate().map_err(|e| Error::Manifest {
            path: self.path.clone(),
            message: e.to_string(),
        })
    }

    pub fn geometry(&self, label: &str) -> Option<&Geometry> {
        self.geometries.iter().find(|g| g.label == label)
    }
}
