//! Write the collocation set and slab zones for a fresh network as CSV.
//!
//! ```bash
//! cargo run --example sample_dump -- /tmp/samples
//! ```

use std::path::PathBuf;

use stratified_pinn::net::init_params;
use stratified_pinn::sampler::{sample_stratified, write_zones_csv, SamplerConfig};
use stratified_pinn::{Domain, NetworkShape};

fn main() -> stratified_pinn::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "samples".into()));
    let domain = Domain::new(-20.0, 80.0, 0.0, 60.0)?;
    let params = init_params(&NetworkShape::uniform(3, 20)?, 0);
    let config = SamplerConfig {
        density: 0.5,
        ..SamplerConfig::default()
    };
    let draw = sample_stratified(&params, &domain, &config, &mut config.rng())?;
    draw.samples.write_csv(&out)?;
    write_zones_csv(&out.join("zones.csv"), &draw.pde_zones)?;
    println!("{:?} points [IC, LBC, RBC, PDE] written to {}", draw.samples.sizes(), out.display());
    Ok(())
}
