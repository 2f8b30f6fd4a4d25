//! Command-line front end behind the `blab` binary.
//!
//! Exit codes: 0 when the report passes, 1 when it fails, 2 for
//! configuration errors and quadrature that did not converge.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::harness::{alpha_key, default_settings, run_experiment, RunSettings, Verdict, EXPERIMENTS};
use crate::kernels::calibrate_c_alpha;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "BLAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "blab", version, about = "Numerical checks of weighted Bergman and Bloch space estimates on the upper half-plane")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the experiments and the estimate each one checks.
    List,
    /// Calibrate kernel constants c_alpha and store them as key=value lines.
    Calibrate {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        alphas: Vec<f64>,
        /// Existing entries for other alphas are kept.
        #[arg(long, default_value = "calibration.txt")]
        out: PathBuf,
        /// key=value files with quadrature settings.
        #[arg(long)]
        config: Vec<PathBuf>,
    },
    /// Run one experiment and write its samples.
    Run {
        experiment_id: String,
        /// key=value files, applied in order; a calibration file may be passed here.
        #[arg(long)]
        config: Vec<PathBuf>,
        /// Output file; the table goes to stdout and the summary to stderr when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Single overrides, applied after the config files.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    fn separator(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

pub fn cmd_list() -> String {
    EXPERIMENTS.iter().map(|e| format!("{:<20} {}\n", e.id, e.claim)).collect()
}

fn read_config(path: &Path, settings: &mut RunSettings) -> Result<()> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    settings.apply_text(&text)
}

/// Assembles the settings of a run: experiment defaults, then config files,
/// then single overrides, then the seed.
pub fn run_settings(id: &str, config: &[PathBuf], set: &[String], seed: Option<u64>) -> Result<RunSettings> {
    let mut s = default_settings(id)?;
    for path in config {
        read_config(path, &mut s)?;
    }
    for kv in set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Config(format!("--set {kv}: expected KEY=VALUE")))?;
        s.apply(k, v)?;
    }
    if let Some(seed) = seed {
        s.sweep.seed = seed;
    }
    s.validate()?;
    Ok(s)
}

/// Calibrates each alpha and merges the constants into the file at `out`,
/// one `c_alpha.<alpha>=re,im` line per alpha in ascending order.
pub fn cmd_calibrate(alphas: &[f64], out: &Path, config: &[PathBuf]) -> Result<String> {
    let mut s = RunSettings::default();
    for path in config {
        read_config(path, &mut s)?;
    }
    s.quad.validate()?;
    let mut entries: BTreeMap<String, (f64, String)> = BTreeMap::new();
    if out.exists() {
        let mut old = RunSettings::default();
        read_config(out, &mut old)?;
        for (k, c) in old.kernel_constants {
            let alpha: f64 = k.parse().map_err(|_| Error::Config(format!("bad alpha key {k}")))?;
            entries.insert(k, (alpha, format!("{:e},{:e}", c.re, c.im)));
        }
    }
    for &alpha in alphas {
        let c = calibrate_c_alpha(alpha, &s.quad)?;
        entries.insert(alpha_key(alpha), (alpha, format!("{:e},{:e}", c.re, c.im)));
    }
    let mut rows: Vec<(f64, String, String)> = entries.into_iter().map(|(k, (a, v))| (a, k, v)).collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut text = String::from("# kernel constants c_alpha = re,im from the reproducing probes\n");
    for (_, k, v) in rows {
        text.push_str(&format!("c_alpha.{k}={v}\n"));
    }
    fs::write(out, &text)?;
    Ok(text)
}

/// Builds the global worker pool from `BLAB_THREADS`, when set.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize =
        v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| Error::Config(format!("{THREADS_VAR}: '{v}' is not a positive integer")))?;
    // A pool built earlier in the process already fixes the thread count.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn report_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    2
}

/// Executes a parsed command and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    if let Err(e) = init_threads() {
        return report_error(&e);
    }
    match cli.command {
        Command::List => {
            print!("{}", cmd_list());
            0
        }
        Command::Calibrate { alphas, out, config } => match cmd_calibrate(&alphas, &out, &config) {
            Ok(text) => {
                print!("{text}");
                0
            }
            Err(e) => report_error(&e),
        },
        Command::Run { experiment_id, config, out, seed, format, set } => {
            let report = match run_settings(&experiment_id, &config, &set, seed).and_then(|s| run_experiment(&experiment_id, &s)) {
                Ok(r) => r,
                Err(e) => return report_error(&e),
            };
            let table = report.to_delimited(format.separator());
            let written = match &out {
                Some(path) => {
                    print!("{}", report.summary());
                    fs::write(path, &table)
                }
                None => {
                    eprint!("{}", report.summary());
                    std::io::stdout().lock().write_all(table.as_bytes())
                }
            };
            if let Err(e) = written {
                return report_error(&Error::from(e));
            }
            match (report.converged, report.verdict) {
                (false, _) => 2,
                (true, Verdict::Pass) => 0,
                (true, Verdict::Fail) => 1,
            }
        }
    }
}

/// Parses the process arguments and runs the command.
pub fn main_from_env() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => execute(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}
