use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spaceform::config::RunConfig;
use spaceform::pipeline;

#[derive(Parser)]
#[command(version, about = "Polyhedral fundamental domains for biquotients of the universal cover of SU(1,1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the domain and write all artifacts.
    Build(Args),
    /// Build the domain and run every check; exits 1 on any failure.
    Verify(Args),
    /// Write the star polygon and X_u strip figures only.
    Figures(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON run configuration.
    config: PathBuf,
    /// Output directory, overriding the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(args: &Args) -> spaceform::error::Result<(RunConfig, PathBuf)> {
    let cfg = RunConfig::load(&args.config)?;
    let out = args.out.clone().unwrap_or_else(|| cfg.out.clone());
    Ok((cfg, out))
}

fn execute(cli: Cli) -> spaceform::error::Result<bool> {
    match cli.command {
        Command::Build(args) => {
            let (cfg, out) = load(&args)?;
            let run = pipeline::run(&cfg)?;
            for path in pipeline::write_artifacts(&run, &out)? {
                println!("wrote {}", path.display());
            }
            print!("{}", spaceform::export::report(&run));
            Ok(true)
        }
        Command::Verify(args) => {
            let (cfg, _) = load(&args)?;
            let (_, checks) = pipeline::verify(&cfg)?;
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", checks.len());
            Ok(failed == 0)
        }
        Command::Figures(args) => {
            let (cfg, out) = load(&args)?;
            for path in pipeline::write_figures(&cfg, &out)? {
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
