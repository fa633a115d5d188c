//! Runs the full `report` subcommand on the bundled 16-element scenario and
//! prints the self-checks.
//!
//! ```text
//! cargo run --example scenario_report -- [out_dir]
//! ```

use std::path::PathBuf;

use pdnlab::cli::{parse_config, run, Subcommand};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg_path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/paper16.cfg");
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("pdnlab_scenario_report"));
    let cfg = parse_config(&cfg_path)?;
    let bundle = run(Subcommand::Report, &cfg, &out)?;
    for c in &bundle.checks {
        println!(
            "[{}] {:>2} {}: {} (target {})",
            if c.pass { "ok" } else { "!!" },
            c.id,
            c.name,
            c.value,
            c.target
        );
    }
    println!(
        "{} files, manifest at {}",
        bundle.files.len(),
        bundle.manifest_path().display()
    );
    Ok(())
}
