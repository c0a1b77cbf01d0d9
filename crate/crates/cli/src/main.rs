//! Command-line front end for trace-norm Birkhoff-James orthogonality
//! certification.
//!
//! Exit codes: 0 for a positive certificate (orthogonal / maximal /
//! consistent), 1 for a refutation, 2 for invalid input or an internal
//! inconsistency. Machine-readable reports (`--json`) are byte-identical
//! across runs with the same inputs and seed, except for the wall-time
//! field.

mod commands;
mod format;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{CheckArgs, CoherenceArgs, DiagArgs, SknormArgs, UndistillArgs};

#[derive(Parser)]
#[command(
    name = "traceorth",
    about = "Certify Birkhoff-James orthogonality in the trace norm, with quantum resource applications",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether H (first file) is Birkhoff-James orthogonal to B
    Check {
        a: PathBuf,
        b: PathBuf,
        /// Decision tolerance (default 1e-9 * max(1, Tr B))
        #[arg(long)]
        tol: Option<f64>,
        /// Eigenvalue zero-classification tolerance
        #[arg(long = "zero-tol")]
        zero_tol: Option<f64>,
        /// Cross-validate the verdict against the line-search oracle
        #[arg(long)]
        oracle: bool,
        /// Write the machine-readable report here
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide orthogonality to (PSD or all) diagonal matrices
    Diag {
        h: PathBuf,
        /// Only test the PSD-diagonal criterion
        #[arg(long = "psd-only")]
        psd_only: bool,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long = "zero-tol")]
        zero_tol: Option<f64>,
        /// Iteration cap for the feasibility solver and oracle
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Test maximal (k-)coherence of a density matrix
    Coherence {
        rho: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Test the H-matrix (2-coherence) property of a density matrix
    Hmatrix {
        rho: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Certified see-saw lower bound on the Schmidt-k quadratic form
    Sknorm {
        x: PathBuf,
        /// Bipartite cut dimensions (m n); defaults to the file's dims
        #[arg(long, num_args = 2)]
        dims: Vec<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Emit the n x n Werner state as a matrix file (stdout)
    Werner {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Multi-copy undistillability search report for the Werner state
    Undistill {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    let (result, json_path) = match cli.command {
        Command::Check {
            a,
            b,
            tol,
            zero_tol,
            oracle,
            json,
        } => (
            commands::cmd_check(&CheckArgs {
                a,
                b,
                tol,
                zero_tol,
                oracle,
            }),
            json,
        ),
        Command::Diag {
            h,
            psd_only,
            tol,
            zero_tol,
            max_iter,
            seed,
            json,
        } => (
            commands::cmd_diag(&DiagArgs {
                h,
                psd_only,
                tol,
                zero_tol,
                max_iter,
                seed,
            }),
            json,
        ),
        Command::Coherence {
            rho,
            k,
            tol,
            seed,
            json,
        } => (
            commands::cmd_coherence(&CoherenceArgs { rho, k, tol, seed }),
            json,
        ),
        Command::Hmatrix { rho, tol, json } => (commands::cmd_hmatrix(&rho, tol), json),
        Command::Sknorm {
            x,
            dims,
            k,
            restarts,
            seed,
            json,
        } => (
            commands::cmd_sknorm(&SknormArgs {
                x,
                dims,
                k,
                restarts,
                seed,
            }),
            json,
        ),
        Command::Werner { n, json } => (commands::cmd_werner(n, json.as_deref()), json.clone()),
        Command::Undistill {
            n,
            r,
            restarts,
            seed,
            json,
        } => (
            commands::cmd_undistill(&UndistillArgs {
                n,
                r,
                restarts,
                seed,
            }),
            json,
        ),
    };

    match result {
        Ok((code, mut report)) => {
            report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            if let Some(path) = json_path {
                if let Err(e) = report.write_json(&path) {
                    eprintln!("error: {e}");
                    std::process::exit(2);
                }
            }
            std::process::exit(code);
        }
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
    }
}
