use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pairvqe::manifest::Overrides;
use pairvqe::{dump, report_populations, run_scan, ScanManifest};
use pairvqe_core::simulator::resource_counts;
use pairvqe_core::vqe::EnergyMode;

#[derive(Parser)]
#[command(
    name = "pairvqe",
    version,
    about = "Pair-correlated VQE scans over FCIDUMP manifests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base seed (overrides the manifest).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Shots per measurement group in sampled mode.
    #[arg(long, global = true)]
    shots: Option<u64>,
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    /// Geometries run concurrently.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Run every geometry of a manifest and write the energy CSV.
    Scan {
        manifest: PathBuf,
        /// CSV destination; defaults to the manifest's `output`, else stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write per-geometry state, trace, rotation and E_nB term dumps here.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
    /// Qubit, parameter and two-qubit gate counts of the ansatz.
    Resources {
        #[arg(long)]
        occ: usize,
        #[arg(long)]
        vir: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Closed-shell configuration populations of FCI and VQE at one geometry.
    Populations {
        manifest: PathBuf,
        #[arg(long)]
        geometry: String,
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn load(cli: &Cli, path: &PathBuf) -> pairvqe::Result<ScanManifest> {
    let mut m = ScanManifest::load(path)?;
    m.apply(&Overrides {
        seed: cli.seed,
        shots: cli.shots,
        mode: cli.mode.map(|m| match m {
            Mode::Exact => EnergyMode::Exact,
            Mode::Sampled => EnergyMode::Sampled,
        }),
    })?;
    Ok(m)
}

fn emit(body: &str, output: Option<&PathBuf>) -> pairvqe::Result<()> {
    match output {
        Some(p) => std::fs::write(p, body).map_err(|source| pairvqe::Error::Io {
            path: p.clone(),
            source,
        }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> pairvqe::Result<bool> {
    match &cli.command {
        Command::Scan {
            manifest,
            output,
            dump_dir,
        } => {
            let m = load(cli, manifest)?;
            let report = run_scan(&m, cli.workers)?;
            emit(&report.to_csv()?, output.as_ref().or(m.output.as_ref()))?;
            if let Some(dir) = dump_dir {
                dump::dump_report(dir, &report)?;
            }
            for row in &report.rows {
                if let Err(msg) = &row.outcome {
                    eprintln!("{}: {msg}", row.label);
                }
            }
            Ok(report.all_ok())
        }
        Command::Resources { occ, vir, depth } => {
            let r = resource_counts(*occ, *vir, *depth);
            println!("qubits,parameters,two_qubit_gates");
            println!("{},{},{}", r.qubits, r.parameters, r.two_qubit_gates);
            Ok(true)
        }
        Command::Populations {
            manifest,
            geometry,
            top,
            output,
        } => {
            let m = load(cli, manifest)?;
            let report = report_populations(&m, geometry, *top)?;
            emit(&report.to_csv(), output.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
