//! File formats, scan manifests and reports around `pairvqe-core`.

pub mod dump;
mod error;
pub mod fcidump;
pub mod manifest;
pub mod populations;
pub mod scan;

pub use error::{Error, Result};
pub use fcidump::{format_fcidump, parse_fcidump, read_fcidump, write_fcidump};
pub use manifest::{Geometry, Overrides, ScanManifest};
pub use populations::report_populations;
pub use scan::{run_pipeline, run_scan, EnergyReport, GeometryOutcome, PipelineOptions};
