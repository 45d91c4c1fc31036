use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ferrichain::cli::{self, RunError, STUDY_NAMES};

#[derive(Parser)]
#[command(name = "ferrichain", version, about = "Ground states, μ-magnon structures and entanglement of ferrimagnetic spin chains")]
struct Args {
    /// One of solve, amplitudes, dictionary, approx-gs, negativity-scan,
    /// fidelity-truncation, fidelity-distort, sector-scan, or validate.
    #[arg(value_parser = study_name)]
    study: String,
    #[arg(long)]
    config: PathBuf,
    /// Override a config value, e.g. `--set model.field=0.2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn study_name(s: &str) -> Result<String, String> {
    if s == "validate" || STUDY_NAMES.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!("expected validate or one of: {}", STUDY_NAMES.join(", ")))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    cli::init_threads();
    let result = if args.study == "validate" {
        cli::validate_file(&args.config, &args.overrides).map(|()| println!("{}: ok", args.config.display()))
    } else {
        cli::run(&args.study, &args.config, &args.overrides, args.out.as_deref()).map(|o| {
            for f in &o.files {
                println!("{}", f.display());
            }
        })
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(exit_status(&e))
        }
    }
}

fn exit_status(e: &RunError) -> u8 {
    e.exit_code() as u8
}
