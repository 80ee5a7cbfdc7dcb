use std::path::{Path, PathBuf};
use std::process::Command;

use pairvqe::scan::{load_active, CSV_COLUMNS};
use pairvqe::{run_pipeline, run_scan, PipelineOptions, ScanManifest};
use pairvqe_core::Method;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn manifest_in(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("scan.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn h2_subset(methods: &str) -> String {
    let mut body = format!("name = \"h2-subset\"\nmethods = [{methods}]\n[vqe]\nseed = 5\n");
    for label in ["0.500", "0.735", "1.500"] {
        body.push_str(&format!(
            "[[geometry]]\nlabel = \"{label}\"\nfcidump = \"{}\"\n",
            fixtures().join(format!("h2/h2_{label}.fcidump")).display()
        ));
    }
    body
}

#[test]
fn csv_layout_is_fixed_and_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let m = ScanManifest::load(manifest_in(
        dir.path(),
        &h2_subset("\"hf\", \"vqe\", \"fci\""),
    ))
    .unwrap();
    let a = run_scan(&m, 3).unwrap().to_csv().unwrap();
    let b = run_scan(&m, 1).unwrap().to_csv().unwrap();
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][0], "0.735");
    for r in &rows {
        assert_eq!(r.len(), CSV_COLUMNS.len());
        assert_eq!(r[10], "ok");
        // hf, vqe, fci present with ten decimals; the rest empty
        for &k in &[1, 2, 7] {
            assert_eq!(r[k].split('.').nth(1).unwrap().len(), 10);
        }
        for &k in &[3, 4, 5, 6, 8, 9] {
            assert!(r[k].is_empty());
        }
    }
}

#[test]
fn sampled_scan_is_reproducible_and_reports_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let body = h2_subset("\"vqe\"").replace(
        "seed = 5",
        "seed = 5\nmode = \"sampled\"\nshots = 2000\nmax_iterations = 40",
    );
    let m = ScanManifest::load(manifest_in(dir.path(), &body)).unwrap();
    let a = run_scan(&m, 2).unwrap().to_csv().unwrap();
    let b = run_scan(&m, 2).unwrap().to_csv().unwrap();
    assert_eq!(a, b);
    for line in a.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert!(f[9].parse::<f64>().unwrap() > 0.0);
    }
}

#[test]
fn failing_geometry_is_recorded_and_the_scan_continues() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("broken.fcidump"),
        "&FCI NORB=2,NELEC=2 &END\n1.0 1 1\n",
    )
    .unwrap();
    let body = format!(
        "{}[[geometry]]\nlabel = \"broken\"\nfcidump = \"broken.fcidump\"\n",
        h2_subset("\"hf\"")
    );
    let m = ScanManifest::load(manifest_in(dir.path(), &body)).unwrap();
    let report = run_scan(&m, 2).unwrap();
    assert!(!report.all_ok());
    assert_eq!(report.rows.iter().filter(|r| r.is_ok()).count(), 3);
    let csv = report.to_csv().unwrap();
    let last = csv.lines().last().unwrap();
    assert!(last.starts_with("broken,"));
    assert!(last.contains("error:"));
}

#[test]
fn exact_rows_respect_the_variational_ordering() {
    let m = ScanManifest::load(fixtures().join("lih.toml")).unwrap();
    let opts = PipelineOptions::from_manifest(&m);
    for g in m.geometries.iter().step_by(4) {
        let s = load_active(g).unwrap();
        let out = run_pipeline(&s, &m.methods, &opts).unwrap();
        let e = |k| out.energies[&k];
        assert!(e(Method::Vqe) >= e(Method::Doci) - 1e-9, "{}", g.label);
        assert!(e(Method::Doci) >= e(Method::Fci) - 1e-9, "{}", g.label);
        assert!(e(Method::OoVqe) <= e(Method::Vqe) + 1e-9, "{}", g.label);
        assert!(e(Method::Hf) >= e(Method::Vqe) - 1e-9, "{}", g.label);
        let nb = out.reported_nb().unwrap().e_nb;
        assert!((e(Method::OoVqeNb) - e(Method::OoVqe) - nb).abs() < 1e-12);
    }
}

#[test]
fn cli_resources_and_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_pairvqe");
    let out = Command::new(exe)
        .args(["resources", "--occ", "4", "--vir", "8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "qubits,parameters,two_qubit_gates\n12,32,96\n"
    );

    let dir = tempfile::tempdir().unwrap();
    let manifest = manifest_in(dir.path(), &h2_subset("\"hf\", \"fci\""));
    let csv = dir.path().join("out.csv");
    let ok = Command::new(exe)
        .arg("scan")
        .arg(&manifest)
        .arg("--output")
        .arg(&csv)
        .status()
        .unwrap();
    assert!(ok.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 4);

    let pops = Command::new(exe)
        .arg("populations")
        .arg(manifest_in(dir.path(), &h2_subset("\"vqe\", \"fci\"")))
        .args(["--geometry", "0.735", "--top", "9"])
        .output()
        .unwrap();
    assert!(pops.status.success());
    let text = String::from_utf8(pops.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "configuration,fci_population,vqe_population");
    // two closed-shell configurations exist, so the request is truncated
    assert_eq!(lines.len(), 3);
    let total: f64 = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);

    let bad = Command::new(exe)
        .arg("scan")
        .arg(manifest_in(dir.path(), "methods = []\n"))
        .output()
        .unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("empty"));
}
