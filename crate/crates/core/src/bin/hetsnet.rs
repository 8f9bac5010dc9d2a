use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use hetsnet::harness::{
    aggregate, estimate_complexity, run_experiment, write_csv, write_json, Algorithm, ExperimentSpec, HarnessError,
    OutputFormat, RunMetadata, Sweep,
};
use hetsnet::verify::run_verification;
use hetsnet::SelectionOrder;

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "hetsnet", version, about = "SU-to-SBS association experiments for two-tier networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo sweep and write per-run records.
    Run(RunArgs),
    /// Print worst-case operation counts of the four algorithms.
    Complexity {
        #[arg(short, long, default_value_t = 10)]
        k: usize,
        #[arg(short, long, default_value_t = 20)]
        n: usize,
        /// Fairness window.
        #[arg(short, long, default_value_t = 1000)]
        t: usize,
    },
    /// Cross-check solvers and formulations on random small networks.
    Verify {
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Experiment spec (JSON, or TOML by extension). Defaults apply without one.
    spec: Option<PathBuf>,
    /// PARAM=v1,v2,... with PARAM one of N, K, gamma_db, gamma0_db, beta_db, beta0_db.
    #[arg(long)]
    sweep: Option<Sweep>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    slots: Option<usize>,
    /// Comma-separated: BF, BnB, WBF, WBnB, UMRCG, WMRCG, MaxSinr, MinInterf.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<Algorithm>>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    fixed_sbs: bool,
    /// Hold SU/MU positions for a whole trial.
    #[arg(long)]
    hold_users: bool,
    #[arg(long)]
    selection_order: Option<SelectionOrder>,
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Record wall-clock time per solve.
    #[arg(long)]
    timing: bool,
    /// Print the aggregated table to stderr.
    #[arg(long)]
    summary: bool,
}

impl RunArgs {
    fn into_spec(self) -> Result<(ExperimentSpec, bool), HarnessError> {
        let mut spec = match &self.spec {
            Some(path) => ExperimentSpec::from_file(path)?,
            None => ExperimentSpec::default(),
        };
        if let Some(s) = self.sweep {
            spec.sweep = s;
        }
        if let Some(t) = self.trials {
            spec.trials = t;
        }
        if let Some(s) = self.slots {
            spec.slots = s;
        }
        if let Some(a) = self.algorithms {
            spec.algorithms = a;
        }
        if let Some(s) = self.seed {
            spec.base.seed = s;
        }
        if let Some(o) = self.out {
            spec.output = Some(o);
        }
        spec.fixed_sbs |= self.fixed_sbs;
        spec.hold_users |= self.hold_users;
        spec.record_timing |= self.timing;
        if let Some(o) = self.selection_order {
            spec.selection_order = o;
        }
        if let Some(f) = self.format {
            spec.format = f;
        }
        Ok((spec, self.summary))
    }
}

fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn run(args: RunArgs) -> Result<(), HarnessError> {
    let (spec, summary) = args.into_spec()?;
    let records = run_experiment(&spec)?;
    info!("{} records", records.len());

    match &spec.output {
        Some(path) => {
            let file = BufWriter::new(File::create(path)?);
            match spec.format {
                OutputFormat::Csv => {
                    write_csv(&records, file)?;
                    let meta = BufWriter::new(File::create(meta_path(path))?);
                    serde_json::to_writer_pretty(meta, &RunMetadata::new(&spec))
                        .map_err(|e| HarnessError::Output(e.to_string()))?;
                }
                OutputFormat::Json => write_json(&spec, &records, file)?,
            }
        }
        None => {
            let stdout = io::stdout().lock();
            match spec.format {
                OutputFormat::Csv => write_csv(&records, stdout)?,
                OutputFormat::Json => write_json(&spec, &records, stdout)?,
            }
        }
    }
    if summary && !records.is_empty() {
        eprint!("{}", aggregate(&records)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => match run(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(match e {
                    HarnessError::Config(_) => EXIT_CONFIG,
                    HarnessError::CapRefusal(_) => EXIT_CAP,
                    _ => EXIT_FAILURE,
                })
            }
        },
        Command::Complexity { k, n, t } => {
            print!("{}", estimate_complexity(k, n, t));
            ExitCode::SUCCESS
        }
        Command::Verify { cases, seed } => {
            let outcomes = run_verification(cases, seed);
            let mut out = io::stdout().lock();
            let mut ok = true;
            for c in &outcomes {
                ok &= c.passed();
                let _ = writeln!(
                    out,
                    "{} {} ({} checks, {} failures)",
                    if c.passed() { "PASS" } else { "FAIL" },
                    c.name,
                    c.cases,
                    c.failures
                );
                if let Some(d) = &c.detail {
                    let _ = writeln!(out, "     first failure: {d}");
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }
    }
}
