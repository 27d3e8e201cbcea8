//! Command-line front end: runs the exact-algebra, lattice-model,
//! cohomology, category-data and dense-oracle check suites and emits
//! machine-readable reports.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use setlab_core::lattice::{HoneycombLattice, LatticeSpec};
use setlab_core::report::Report;

mod suites;

#[derive(Parser)]
#[command(
    name = "setlab",
    version,
    about = "Exact checks for a symmetry-enriched honeycomb toric code"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// RNG seed; overrides the SETLAB_SEED environment variable (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print the JSON report to stdout instead of the per-check lines.
    #[arg(long, global = true)]
    json: bool,
    /// Write the JSON report to a file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Attach per-check runtimes (reports are then no longer byte-stable).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Property suite for the flip/phase operator algebra.
    VerifyAlgebra {
        /// Number of random triples for the group-law fuzz.
        #[arg(long, default_value_t = 1000)]
        fuzz: usize,
    },
    /// Symbolic model suite: stabilizers, entangler, boundary identities,
    /// strings, fractionalization tables, defect sectors.
    VerifyModel {
        /// Torus size, e.g. `2x2`.
        #[arg(long, conflicts_with = "patch")]
        cells: Option<String>,
        /// Open patch size, e.g. `3x2`.
        #[arg(long)]
        patch: Option<String>,
    },
    /// Fractionalization tables for the string anyons, with optional JSON
    /// exports of the tables, the 2-cochain, and the full category data.
    Omega {
        #[arg(long, default_value = "2x2")]
        cells: String,
        /// Start vertex of the string path (a B-sublattice vertex).
        #[arg(long)]
        start: Option<u32>,
        /// Comma-separated step kinds, e.g. `k1,k3,k1,k2`.
        #[arg(long)]
        steps: Option<String>,
        /// Write the η cochain bundle here.
        #[arg(long)]
        eta_out: Option<PathBuf>,
        /// Write the category data file here.
        #[arg(long)]
        data_out: Option<PathBuf>,
    },
    /// Cocycle condition, class comparison, and H² with Z_n coefficients.
    Cohomology {
        /// Group name: z2, z3, z4, z2z2 (ignored when --eta is given).
        #[arg(long, default_value = "z2z2")]
        group: String,
        /// Coefficient order n for --h2.
        #[arg(long, default_value_t = 2)]
        coeff: u64,
        /// Compute H²(G, Z_n) invariants (with brute-force cross-check).
        #[arg(long)]
        h2: bool,
        /// Cochain bundle to check (defaults to the built-in model η).
        #[arg(long)]
        eta: Option<PathBuf>,
        /// Second cochain bundle for a class comparison.
        #[arg(long)]
        compare: Option<PathBuf>,
        /// Candidate bound for the exhaustive rephasing search.
        #[arg(long, default_value_t = 1 << 20)]
        bound: u64,
    },
    /// Run every abelian G-crossed data check on a JSON data file.
    Checkdata { file: PathBuf },
    /// Dense state-vector suite: vacuum construction, boundary excitation,
    /// symmetry invariance, ground-space dimension.
    Oracle {
        #[arg(long, conflicts_with = "patch")]
        cells: Option<String>,
        #[arg(long)]
        patch: Option<String>,
        /// Refuse to allocate more qubits than this.
        #[arg(long, default_value_t = 24)]
        max_qubits: usize,
        /// Number of random local observables per symmetry check.
        #[arg(long, default_value_t = 100)]
        observables: usize,
        /// Dump the entangled vacuum amplitudes to a binary file.
        #[arg(long)]
        dump_state: Option<PathBuf>,
    },
}

fn parse_pair(text: &str) -> Result<(u32, u32)> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .with_context(|| format!("expected AxB, got `{text}`"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn lattice_from(cells: &Option<String>, patch: &Option<String>) -> Result<HoneycombLattice> {
    let spec = match (cells, patch) {
        (Some(c), None) => {
            let (l1, l2) = parse_pair(c)?;
            LatticeSpec::Torus { cells: [l1, l2] }
        }
        (None, Some(p)) => {
            let (w, h) = parse_pair(p)?;
            LatticeSpec::Patch { size: [w, h] }
        }
        (None, None) => LatticeSpec::Torus { cells: [2, 2] },
        (Some(_), Some(_)) => bail!("--cells and --patch are mutually exclusive"),
    };
    HoneycombLattice::from_spec(&spec).context("invalid lattice spec")
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("SETLAB_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn emit(report: &Report, json: bool, out: &Option<PathBuf>) -> Result<()> {
    let rendered = serde_json::to_string_pretty(report)?;
    if json {
        println!("{rendered}");
    } else {
        for entry in &report.checks {
            let status = if entry.pass { "PASS" } else { "FAIL" };
            println!("{status}  {} [{}]", entry.check, entry.anchor);
            if !entry.pass {
                if let Some(detail) = &entry.detail {
                    println!("      detail: {detail}");
                }
            }
        }
        println!(
            "{}: {} checks, {}",
            report.command,
            report.checks.len(),
            if report.pass {
                "all passed"
            } else {
                "FAILURES"
            }
        );
    }
    if let Some(path) = out {
        std::fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = resolve_seed(cli.seed);
    let timings = cli.timings;

    let report = match &cli.command {
        Command::VerifyAlgebra { fuzz } => suites::verify_algebra(seed, *fuzz, timings),
        Command::VerifyModel { cells, patch } => match lattice_from(cells, patch) {
            Ok(lat) => suites::verify_model(lat, seed, timings),
            Err(e) => return usage_error(e),
        },
        Command::Omega {
            cells,
            start,
            steps,
            eta_out,
            data_out,
        } => {
            let lat = match lattice_from(&Some(cells.clone()), &None) {
                Ok(l) => l,
                Err(e) => return usage_error(e),
            };
            match suites::omega(
                lat,
                seed,
                *start,
                steps.as_deref(),
                eta_out,
                data_out,
                timings,
            ) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            }
        }
        Command::Cohomology {
            group,
            coeff,
            h2,
            eta,
            compare,
            bound,
        } => match suites::cohomology(group, *coeff, *h2, eta, compare, *bound, seed, timings) {
            Ok(r) => r,
            Err(e) => return usage_error(e),
        },
        Command::Checkdata { file } => match suites::checkdata(file, seed, timings) {
            Ok(r) => r,
            Err(e) => return usage_error(e),
        },
        Command::Oracle {
            cells,
            patch,
            max_qubits,
            observables,
            dump_state,
        } => {
            let lat = match lattice_from(cells, patch) {
                Ok(l) => l,
                Err(e) => return usage_error(e),
            };
            match suites::oracle(lat, seed, *max_qubits, *observables, dump_state, timings) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            }
        }
    };

    if let Err(e) = emit(&report, cli.json, &cli.out) {
        return usage_error(e);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn usage_error(e: anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    ExitCode::from(2)
}
