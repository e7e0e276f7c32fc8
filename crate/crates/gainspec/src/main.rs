//! Command-line front end: energy computation, characteristic
//! polynomial inspection, extremal-theorem verification, and the
//! odd-odd-odd counterexample scan.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical failure,
//! 3 verification failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gainspec::cli::{
    charpoly_csv, cmd_charpoly, cmd_energy, cmd_scan, cmd_table1, cmd_verify, energy_csv, scan_csv,
    table1_csv, verify_csv, CaseFilter, EnergyMethod, GainInput, Report,
};
use gainspec::search::SearchConfig;
use gainspec::Error;

#[derive(Parser)]
#[command(
    name = "gainspec",
    version,
    about = "Energy of complex unit gain dumbbell graphs: dual-route computation, extremal verification, counterexample scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Eig,
    Coulson,
    Both,
}

#[derive(Args)]
struct SearchArgs {
    /// Initial grid mesh (its reciprocal must be an integer).
    #[arg(long, default_value_t = 0.1)]
    mesh: f64,
    /// Number of mesh-halving refinement rounds.
    #[arg(long, default_value_t = 10)]
    rounds: u32,
    /// Refinement box half-width in current-mesh steps.
    #[arg(long, default_value_t = 2)]
    radius: i64,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            initial_mesh: self.mesh,
            rounds: self.rounds,
            neighborhood_radius: self.radius,
            ..SearchConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Energy of one dumbbell by eigenvalues, the Coulson kernel, or both.
    Energy {
        r: usize,
        s: usize,
        ell: usize,
        /// Case coordinate for the r-cycle gain, in [-1, 1].
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Case coordinate for the s-cycle gain, in [-1, 1].
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        /// Gain angle in radians (gamma_r = exp(i theta)).
        #[arg(long, allow_hyphen_values = true, conflicts_with = "alpha")]
        theta_r: Option<f64>,
        /// Gain angle in radians (gamma_s = exp(i theta)).
        #[arg(long, allow_hyphen_values = true, conflicts_with = "beta")]
        theta_s: Option<f64>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Characteristic polynomial coefficients and exact kernel tables.
    Charpoly {
        r: usize,
        s: usize,
        ell: usize,
        /// Real part of the r-cycle gain.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        a: f64,
        /// Real part of the s-cycle gain.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Verify predicted extremizers for every triple up to an order cap.
    Verify {
        /// Parity case filter: all, ee, oo, or mixed.
        #[arg(long, default_value = "all")]
        case: String,
        /// Largest graph order to include.
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Recompute the six reference counterexample rows and diff them.
    Table1 {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Scan odd (r, s, ell) triples for minima beating the origin.
    Scan {
        /// Odd r values (comma separated). Default: 3,5,...,17.
        #[arg(long, value_delimiter = ',')]
        rset: Option<Vec<usize>>,
        /// Odd s values (comma separated). Default: 3,5,...,17.
        #[arg(long, value_delimiter = ',')]
        sset: Option<Vec<usize>>,
        /// Odd ell values (comma separated). Default: 1,3,...,17.
        #[arg(long, value_delimiter = ',')]
        lset: Option<Vec<usize>>,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), std::io::Error> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                f.write_all(b"\n")?;
            }
            Ok(())
        }
        None => {
            println!("{}", text.trim_end_matches('\n'));
            Ok(())
        }
    }
}

/// GAINSPEC_THREADS caps the rayon pool used by scans and sweeps.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("GAINSPEC_THREADS") {
        if let Ok(k) = v.parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
        }
    }
}

fn run() -> Result<i32, Error> {
    let cli = Cli::parse();
    init_thread_pool();
    match cli.command {
        Command::Energy {
            r,
            s,
            ell,
            alpha,
            beta,
            theta_r,
            theta_s,
            method,
            format,
        } => {
            let gains = match (alpha, beta, theta_r, theta_s) {
                (Some(alpha), Some(beta), None, None) => GainInput::CaseCoords { alpha, beta },
                (None, None, Some(tr), Some(ts)) => GainInput::Angles {
                    theta_r: tr,
                    theta_s: ts,
                },
                (None, None, None, None) => GainInput::CaseCoords {
                    alpha: 0.0,
                    beta: 0.0,
                },
                _ => {
                    return Err(Error::BadConfig(
                        "give either --alpha and --beta, or --theta-r and --theta-s".into(),
                    ))
                }
            };
            let method = match method {
                Method::Eig => EnergyMethod::Eig,
                Method::Coulson => EnergyMethod::Coulson,
                Method::Both => EnergyMethod::Both,
            };
            let report = cmd_energy(r, s, ell, gains, method)?;
            let text = match format {
                Format::Json => Report::new("energy", &report).to_json(),
                Format::Csv => energy_csv(&report),
            };
            emit(&None, &text).map_err(io_error)?;
            Ok(0)
        }
        Command::Charpoly {
            r,
            s,
            ell,
            a,
            b,
            format,
        } => {
            let report = cmd_charpoly(r, s, ell, a, b)?;
            let text = match format {
                Format::Json => Report::new("charpoly", &report).to_json(),
                Format::Csv => charpoly_csv(&report),
            };
            emit(&None, &text).map_err(io_error)?;
            Ok(0)
        }
        Command::Verify {
            case,
            nmax,
            search,
            format,
        } => {
            let filter = CaseFilter::parse(&case)?;
            let table = cmd_verify(filter, nmax, &search.config())?;
            let failed = table.fail > 0;
            let text = match format {
                Format::Json => Report::new("verify", &table).to_json(),
                Format::Csv => verify_csv(&table),
            };
            emit(&None, &text).map_err(io_error)?;
            Ok(if failed { 3 } else { 0 })
        }
        Command::Table1 { format } => {
            let report = cmd_table1()?;
            let text = match format {
                Format::Json => Report::new("table1", &report).to_json(),
                Format::Csv => table1_csv(&report),
            };
            emit(&None, &text).map_err(io_error)?;
            Ok(0)
        }
        Command::Scan {
            rset,
            sset,
            lset,
            out,
            search,
            format,
        } => {
            let default_rs: Vec<usize> = (3..=17).step_by(2).collect();
            let default_l: Vec<usize> = (1..=17).step_by(2).collect();
            let report = cmd_scan(
                &rset.unwrap_or_else(|| default_rs.clone()),
                &sset.unwrap_or(default_rs),
                &lset.unwrap_or(default_l),
                &search.config(),
            )?;
            let text = match format {
                Format::Json => Report::new("scan", &report).to_json(),
                Format::Csv => scan_csv(&report),
            };
            emit(&out, &text).map_err(io_error)?;
            Ok(0)
        }
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::BadConfig(format!("failed to write output: {e}"))
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
