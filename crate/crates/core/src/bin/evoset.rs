use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, ValueEnum};
use evoset::runner::{run, summarize, ExperimentConfig, Subcommand};

#[derive(Parser)]
#[command(name = "evoset", version, about = "Random walk entropy, evolving sets and transience checks")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Clone, Copy, ValueEnum)]
enum Command {
    Entropy,
    Escape,
    Evolve,
    Green,
    Verify,
    Counterexample,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Entropy => Subcommand::Entropy,
            Command::Escape => Subcommand::Escape,
            Command::Evolve => Subcommand::Evolve,
            Command::Green => Subcommand::Green,
            Command::Verify => Subcommand::Verify,
            Command::Counterexample => Subcommand::Counterexample,
        }
    }
}

#[derive(Args)]
struct Flags {
    /// Flat key = value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    x0: Option<String>,
    #[arg(long)]
    y: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    nmax: Option<String>,
    #[arg(long)]
    mmax: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
    /// Comma-separated return-frequency horizons.
    #[arg(long)]
    horizons: Option<String>,
    #[arg(long)]
    radius: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// all, exact or mc.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    support_cap: Option<String>,
    #[arg(long)]
    cert_nmax: Option<String>,
    /// Log full vertex sets in trajectories.
    #[arg(long)]
    vertices: bool,
    /// Output directory (default: $EVOSET_OUT_DIR, else ./evoset-out).
    #[arg(long)]
    out: Option<String>,
}

fn configure(flags: &Flags) -> evoset::Result<ExperimentConfig> {
    let mut cfg = match &flags.config {
        Some(path) => ExperimentConfig::load(path)?.0,
        None => ExperimentConfig::default(),
    };
    let overrides = [
        ("graph", &flags.graph),
        ("x0", &flags.x0),
        ("y", &flags.y),
        ("c", &flags.c),
        ("n_max", &flags.nmax),
        ("m_max", &flags.mmax),
        ("trials", &flags.trials),
        ("horizon", &flags.horizon),
        ("horizons", &flags.horizons),
        ("radius", &flags.radius),
        ("seed", &flags.seed),
        ("suite", &flags.suite),
        ("support_cap", &flags.support_cap),
        ("cert_n_max", &flags.cert_nmax),
        ("out", &flags.out),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if flags.vertices {
        cfg.vertices = true;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    // Usage errors exit with 1; 2 is reserved for bound failures.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => e.exit(),
    };
    let cfg = match configure(&cli.flags) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command.into(), &cfg) {
        Ok(outcome) => {
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            for (name, (checked, failed)) in summarize(&outcome.reports) {
                println!("{name}: {checked} checked, {failed} failed");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
