//! Loads a scenario file and runs one command, printing its summary.
//!
//! ```sh
//! cargo run --example scenario_file -- configs/disk_plane_wave.toml represent
//! ```

use std::path::PathBuf;

use clap::ValueEnum;
use wavebie::cli::{run_scenario, Command};
use wavebie::config::ScenarioConfig;

fn main() -> wavebie::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/disk_plane_wave.toml").into()));
    let command = args.next().map(|c| Command::from_str(&c, true).expect("unknown command")).unwrap_or(Command::Represent);
    let cfg = ScenarioConfig::load(&path)?;
    let out = run_scenario(&cfg, command, 1)?;
    for (name, table) in &out.tables {
        println!("{name}: {} rows, columns {}", table.rows.len(), table.columns.join(","));
    }
    for (name, v) in &out.summary {
        println!("{name} = {v:e}");
    }
    Ok(())
}
