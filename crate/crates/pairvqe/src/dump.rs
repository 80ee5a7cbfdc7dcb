//! Debug dumps written next to a scan with `--dump-dir`.

use std::path::Path;

use pairvqe_core::nonbosonic::terms_csv;
use pairvqe_core::orbital_opt::matrix_csv;
use pairvqe_core::PairHamiltonian;

use crate::error::{io_err, Result};
use crate::scan::{EnergyReport, GeometryOutcome};

fn write(dir: &Path, name: String, body: String) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(io_err(path))
}

pub fn dump_outcome(dir: &Path, label: &str, o: &GeometryOutcome) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let ph = PairHamiltonian::from_integrals(&o.integrals);
    write(dir, format!("{label}_pairham.txt"), ph.debug_table())?;
    if let Some(v) = &o.vqe {
        write(dir, format!("{label}_vqe_state.csv"), v.state.to_csv())?;
        write(dir, format!("{label}_vqe_trace.csv"), v.trace_csv())?;
    }
    if let Some(r) = &o.oo {
        write(
            dir,
            format!("{label}_oo_rotation.csv"),
            matrix_csv(&r.rotation),
        )?;
        write(dir, format!("{label}_oo_state.csv"), r.vqe.state.to_csv())?;
    }
    if let Some(nb) = &o.nb_vqe {
        write(
            dir,
            format!("{label}_vqe_nb_terms.csv"),
            terms_csv(&nb.terms),
        )?;
    }
    if let Some(nb) = &o.nb_oo {
        write(
            dir,
            format!("{label}_oo_vqe_nb_terms.csv"),
            terms_csv(&nb.terms),
        )?;
    }
    Ok(())
}

pub fn dump_report(dir: &Path, report: &EnergyReport) -> Result<()> {
    for row in &report.rows {
        if let Ok(o) = &row.outcome {
            dump_outcome(dir, &row.label, o)?;
        }
    }
    Ok(())
}
