//! Active-zone intervals of a random network on the initial line and per
//! time slab, plus one stratified draw.
//!
//! ```bash
//! cargo run --example zone_geometry -- 7      # network seed
//! ```

use stratified_pinn::net::init_params;
use stratified_pinn::sampler::{build_ic_zones, build_pde_zones, point_count, sample_stratified, SamplerConfig};
use stratified_pinn::{Domain, NetworkShape};

fn main() -> stratified_pinn::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let domain = Domain::new(-200.0, 800.0, 0.0, 600.0)?;
    let params = init_params(&NetworkShape::uniform(3, 20)?, seed);
    let config = SamplerConfig {
        density: 0.025,
        n_slabs: 10,
        ..SamplerConfig::default()
    };

    let ic = build_ic_zones(&params, &domain, &config)?;
    println!("initial-line zones ({} merged):", ic.len());
    for iv in &ic {
        println!("  [{:8.2}, {:8.2}]", iv.lo, iv.hi);
    }

    let zones = build_pde_zones(&params, &domain, &config)?;
    println!("\nslab zones:");
    for (i, slab) in zones.slabs.iter().enumerate() {
        let covered: f64 = slab.intervals.iter().map(|iv| iv.len()).sum();
        println!(
            "  slab {i} ({:5.0}, {:5.0}]: {} interval(s), {:6.1} of {} in x{}",
            slab.t_lo,
            slab.t_hi,
            slab.intervals.len(),
            covered,
            domain.width(),
            if slab.fallback { " (fallback)" } else { "" }
        );
    }

    let draw = sample_stratified(&params, &domain, &config, &mut config.rng())?;
    println!(
        "\nzone area {:.0} of {:.0}; interior points SS {} vs CS {}",
        zones.total_area(),
        domain.area(),
        draw.samples.interior.len(),
        point_count(config.density, domain.area())
    );
    Ok(())
}
