use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use snumbers::{Exponent, Field};

use snum_cli::{run, Command, KRange, OutputFormat, Quantity, RunConfig};

#[derive(Parser)]
#[command(name = "snum", version, about = "Entropy, approximation and Kolmogorov numbers of l_p embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form envelopes for id: l_p^n -> l_q^n
    Idnumbers(Common),
    /// Bounds for an operator read from a CSV matrix
    Estimate(Common),
    /// Run the property suite; exit code 1 on any violation
    Verify(Common),
    /// Unit-ball volumes and volumetric entropy bounds
    Volume(Common),
    /// Envelopes over n = 1, 2, 4, ... up to --n
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "2")]
    p: Exponent,
    #[arg(long, default_value = "2")]
    q: Exponent,
    #[arg(long)]
    n: Option<usize>,
    /// Single index or inclusive range a..b
    #[arg(long, default_value = "1")]
    k: KRange,
    #[arg(long, default_value = "real")]
    field: Field,
    #[arg(long, env = "SNUM_SEED", default_value_t = snum_cli::config::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = snum_cli::config::DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, default_value_t = snum_cli::config::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    output: OutputFormat,
    #[arg(long)]
    input: Option<PathBuf>,
    /// Restrict to some of e, a, d
    #[arg(long = "quantity", value_enum, value_delimiter = ',')]
    quantities: Vec<Quantity>,
    /// Record wall time per row (breaks byte-identical output)
    #[arg(long)]
    timings: bool,
    /// Check Weyl's inequalities backwards to exercise the failure path
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn config(cli: Cli) -> RunConfig {
    let (command, c) = match cli.command {
        Cmd::Idnumbers(c) => (Command::Idnumbers, c),
        Cmd::Estimate(c) => (Command::Estimate, c),
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Volume(c) => (Command::Volume, c),
        Cmd::Sweep(c) => (Command::Sweep, c),
    };
    let mut cfg = RunConfig::new(command);
    cfg.p = c.p;
    cfg.q = c.q;
    cfg.n = c.n;
    cfg.k = c.k;
    cfg.field = c.field;
    cfg.seed = c.seed;
    cfg.budget = c.budget;
    cfg.tol = c.tol;
    cfg.output = c.output;
    cfg.input_path = c.input.map(|p| p.display().to_string());
    if !c.quantities.is_empty() {
        let mut q = c.quantities;
        q.sort();
        q.dedup();
        cfg.quantities = q;
    }
    cfg.timings = c.timings;
    cfg.inject_fault = c.inject_fault;
    cfg
}

fn main() -> ExitCode {
    let cfg = config(Cli::parse());
    match run(&cfg) {
        Ok(report) => {
            let text = match cfg.output {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Csv => report.to_csv(),
            };
            // a closed pipe is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
