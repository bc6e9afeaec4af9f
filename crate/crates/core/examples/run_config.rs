//! Run an experiment config and print its table.
//!
//! ```bash
//! cargo run --release --example run_config -- configs/advection_small.toml 2000
//! ```

use std::path::PathBuf;

use stratified_pinn::experiment::{make_table, run_experiment, ExperimentConfig, Overrides};

fn main() -> stratified_pinn::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| "configs/advection_small.toml".into()));
    let epochs = args.next().and_then(|s| s.parse().ok()).or(Some(1_000));
    let mut config = ExperimentConfig::load(&path)?;
    Overrides {
        seeds: vec![0],
        epochs,
        out_dir: Some(std::env::temp_dir().join("stratpinn-run-config")),
        ..Default::default()
    }
    .apply(&mut config)?;
    for run in run_experiment(&config)? {
        println!("{} -> {}", run.kind.label(), run.dir.display());
    }
    print!("{}", make_table(std::slice::from_ref(&config.out_dir))?);
    Ok(())
}
