use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use pdnlab::cli::{parse_config, run, Subcommand};

#[derive(Clone, Copy, ValueEnum)]
enum Command {
    Topology,
    Aperture,
    Array,
    Compare,
    Report,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Topology => Subcommand::Topology,
            Command::Aperture => Subcommand::Aperture,
            Command::Array => Subcommand::Array,
            Command::Compare => Subcommand::Compare,
            Command::Report => Subcommand::Report,
        }
    }
}

/// Power-delivery-network, aperture-feed and array-budget reports for
/// scalable mm-wave phased arrays.
#[derive(Parser)]
#[command(name = "pdnlab", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to `outputs.dir` from the scenario.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `pattern.seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut cfg = match parse_config(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("pdnlab: {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = args.seed {
        cfg.pattern.seed = seed;
    }
    let Some(out) = args
        .out
        .or_else(|| cfg.outputs.dir.clone().map(PathBuf::from))
    else {
        eprintln!("pdnlab: no output directory: pass --out or set outputs.dir");
        return ExitCode::from(2);
    };
    match run(args.command.into(), &cfg, &out) {
        Ok(bundle) => {
            for e in &bundle.errors {
                eprintln!("pdnlab: {} {}: {}", e.source, e.key, e.message);
            }
            for c in bundle.checks.iter().filter(|c| !c.pass) {
                eprintln!("pdnlab: check {} failed: {} = {}", c.id, c.name, c.value);
            }
            println!("{}", bundle.manifest_path().display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("pdnlab: {e}");
            ExitCode::FAILURE
        }
    }
}
