//! Classical vs stratified sampling on the advection equation
//! `u_t + u_x = 0`, `u(x, 0) = exp(-x²)`.
//!
//! At initialization the zones cover the whole domain, so the two samplers
//! draw the same sets until the first-layer weights grow.
//!
//! ```bash
//! cargo run --release --example advection_compare -- 5000
//! ```

use stratified_pinn::net::{init_params, Parallelism};
use stratified_pinn::pde::advection_problem;
use stratified_pinn::sampler::{SamplerConfig, SamplerKind};
use stratified_pinn::train::{mse_vs_exact, train_two_stage, TrainConfig, TrainContext};
use stratified_pinn::{Domain, NetworkShape};

fn main() -> stratified_pinn::Result<()> {
    let epochs: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3_000);
    let problem = advection_problem(1.0, Domain::new(-20.0, 80.0, 0.0, 60.0)?);
    let init = init_params(&NetworkShape::uniform(3, 20)?, 0);
    let config = TrainConfig {
        sampler: SamplerConfig {
            density: 0.5,
            line_density: Some(10.0),
            ..SamplerConfig::default()
        },
        eval_grid: (101, 61),
        ..TrainConfig::default()
    }
    .with_budget(epochs);

    for kind in [SamplerKind::Classical, SamplerKind::Stratified] {
        let mut ctx = TrainContext {
            parallelism: Parallelism::Serial,
            ..Default::default()
        };
        let (params, metrics) = train_two_stage(&init, &problem, &config, kind, &mut ctx)?;
        let mean_pde: f64 = metrics.records.iter().filter(|r| r.is_stage2()).map(|r| r.sizes[3] as f64).sum::<f64>()
            / config.stage2_epochs.max(1) as f64;
        println!(
            "{}: min Loss_Total {:.3e}, final MSE {:.3e}, mean interior points {:.0}",
            kind.short(),
            metrics.min_loss_total().unwrap_or(f64::NAN),
            mse_vs_exact(&params, &problem, config.eval_grid)?,
            mean_pde
        );
    }
    Ok(())
}
