use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use minred_core::battery::{run_all, run_selected, BatteryConfig};
use minred_core::job::{JobSpec, SCHEMA};
use minred_core::report::{self, error_outcome, Outcome, RunOptions, EXIT_OK, EXIT_OTHER};
use minred_core::Error;

#[derive(Parser)]
#[command(name = "minred", version, about = "Minimal reductions from characteristic polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the minimal reduction partition.
    Compute(JobArgs),
    /// Split a polynomial into slope factors.
    Factor(JobArgs),
    /// Run the acceptance battery.
    Selftest {
        #[arg(long, default_value_t = 5)]
        max_rank: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Directory receiving oracle counterexamples.
        #[arg(long)]
        quarantine: Option<PathBuf>,
        /// Run only these criteria, e.g. `--only 3,6`.
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=9))]
        only: Vec<u8>,
    },
}

#[derive(Args)]
struct JobArgs {
    /// Job file, or `-` for standard input.
    #[arg(short, long)]
    input: PathBuf,
    /// Report file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    precision: Option<usize>,
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    strict_admissibility: bool,
    #[arg(long)]
    seed: Option<u64>,
}

fn read_input(path: &PathBuf) -> io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

fn load_job(a: &JobArgs) -> Result<JobSpec, Error> {
    let text = read_input(&a.input).map_err(|e| Error::Parse(format!("{}: {e}", a.input.display())))?;
    let mut job = JobSpec::from_json(&text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if a.precision.is_some() {
        job.precision = a.precision;
    }
    job.verify |= a.verify;
    job.oracle |= a.oracle;
    job.strict_admissibility |= a.strict_admissibility;
    if let Some(s) = a.seed {
        job.seed = s;
    }
    Ok(job)
}

fn emit(out: &Option<PathBuf>, o: &Outcome) -> i32 {
    let text = serde_json::to_string_pretty(&o.json).expect("json serializes") + "\n";
    let written = match out {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    eprintln!("{}", o.summary);
    match written {
        Ok(()) => o.exit,
        Err(e) => {
            eprintln!("cannot write report: {e}");
            EXIT_OTHER
        }
    }
}

fn oracle_bound() -> Option<usize> {
    std::env::var("MINRED_MAX_BOXES").ok().and_then(|v| v.trim().parse().ok())
}

fn run_job(name: &str, a: &JobArgs, f: impl Fn(&JobSpec) -> Outcome) -> i32 {
    let o = match load_job(a) {
        Ok(job) => f(&job),
        Err(e) => error_outcome(name, &e),
    };
    emit(&a.output, &o)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Compute(a) => {
            let opts = RunOptions { oracle_bound: oracle_bound() };
            run_job("compute", a, |j| report::compute(j, &opts))
        }
        Command::Factor(a) => run_job("factor", a, report::factor),
        Command::Selftest { max_rank, seed, output, quarantine, only } => {
            let mut cfg = BatteryConfig { max_rank: *max_rank, quarantine: quarantine.clone(), ..BatteryConfig::default() };
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            let start = std::time::Instant::now();
            let results = if only.is_empty() { run_all(&cfg) } else { run_selected(&cfg, only) };
            for r in &results {
                println!("{}", r.line());
            }
            let passed = results.iter().filter(|r| r.passed).count();
            let summary = format!(
                "{passed}/{} criteria passed in {:.1}s (max rank {}, seed {})",
                results.len(),
                start.elapsed().as_secs_f64(),
                cfg.max_rank,
                cfg.seed
            );
            println!("{summary}");
            let exit = if passed == results.len() { EXIT_OK } else { EXIT_OTHER };
            if let Some(p) = output {
                let doc = serde_json::json!({ "schema": SCHEMA, "command": "selftest", "results": results, "summary": summary, "exit_code": exit });
                if let Err(e) = fs::write(p, serde_json::to_string_pretty(&doc).expect("json serializes") + "\n") {
                    eprintln!("cannot write report: {e}");
                }
            }
            exit
        }
    };
    ExitCode::from(code as u8)
}
