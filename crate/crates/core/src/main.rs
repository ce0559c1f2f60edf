use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wavebie::cli::{run_scenario, Command};
use wavebie::config::ScenarioConfig;
use wavebie::WaveError;

/// Time-domain boundary integral toolkit for the wave equation.
#[derive(Parser)]
#[command(name = "wavebie", version)]
struct Args {
    command: Command,
    #[arg(long)]
    config: PathBuf,
    /// Directory for the CSV artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; 1 keeps runs reproducible.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Resolution multiplier applied to the whole scenario.
    #[arg(long, default_value_t = 1)]
    refine: usize,
}

fn run(args: &Args) -> Result<(), WaveError> {
    if args.parallel == 0 || args.refine == 0 {
        return Err(WaveError::Config("--parallel and --refine must be at least 1".into()));
    }
    let cfg = ScenarioConfig::load(&args.config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.parallel)
        .build()
        .map_err(|e| WaveError::Config(format!("--parallel: {e}")))?;
    let outcome = pool.install(|| run_scenario(&cfg, args.command, args.refine))?;
    for path in outcome.write(&args.out)? {
        println!("wrote {}", path.display());
    }
    for (name, value) in &outcome.summary {
        println!("{name} = {value:e}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            let kind = if code == 2 { "config" } else { "numerical" };
            let message = e.to_string();
            eprintln!("error[{kind}]: {message}");
            // machine-readable record next to the artifacts
            let record = format!("kind,exit_code,message\n{kind},{code},\"{}\"\n", message.replace('"', "\"\""));
            if std::fs::create_dir_all(&args.out).is_ok() {
                let _ = std::fs::write(args.out.join("error.csv"), record);
            }
            ExitCode::from(code as u8)
        }
    }
}
