//! Zeldovich's equation `u_t = u_xx + u²(1 - u)` with both samplers.
//!
//! ```bash
//! cargo run --release --example zeldovich -- 10000
//! ```

use stratified_pinn::net::init_params;
use stratified_pinn::pde::zeldovich_problem;
use stratified_pinn::sampler::{SamplerConfig, SamplerKind};
use stratified_pinn::train::{mse_vs_exact, train_two_stage, TrainConfig, TrainContext};
use stratified_pinn::{Domain, NetworkShape};

fn main() -> stratified_pinn::Result<()> {
    let epochs: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2_000);
    let problem = zeldovich_problem(Domain::new(-25.0, 175.0, 0.0, 80.0)?);
    let config = TrainConfig {
        sampler: SamplerConfig {
            density: 0.1,
            line_density: Some(5.0),
            ..SamplerConfig::default()
        },
        eval_grid: (201, 81),
        ..TrainConfig::default()
    }
    .with_budget(epochs);
    let init = init_params(&NetworkShape::uniform(3, 30)?, 1);
    for kind in [SamplerKind::Classical, SamplerKind::Stratified] {
        let (params, metrics) = train_two_stage(&init, &problem, &config, kind, &mut TrainContext::default())?;
        println!(
            "{}: min Loss_Total {:.3e}, final MSE {:.3e}",
            kind.short(),
            metrics.min_loss_total().unwrap_or(f64::NAN),
            mse_vs_exact(&params, &problem, config.eval_grid)?
        );
    }
    Ok(())
}
