//! Stage 1 on the sine-plateau profile: fit the initial condition while the
//! stratified sampler draws only inside the active zones.
//!
//! ```bash
//! cargo run --release --example fit_initial_condition -- 20000
//! ```

use stratified_pinn::net::{forward, init_params};
use stratified_pinn::pde::sine_plateau_problem;
use stratified_pinn::sampler::{SamplerConfig, SamplerKind};
use stratified_pinn::train::{train_stage1, TrainConfig};
use stratified_pinn::{Domain, NetworkShape};

fn main() -> stratified_pinn::Result<()> {
    let epochs: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5_000);
    let problem = sine_plateau_problem(Domain::new(-50.0, 150.0, 0.0, 1.0)?);
    let params = init_params(&NetworkShape::uniform(3, 60)?, 0);
    let config = TrainConfig {
        stage1_epochs: epochs,
        sampler: SamplerConfig {
            density: 1.0,
            line_density: Some(5.0),
            ..SamplerConfig::default()
        },
        ..TrainConfig::default()
    };
    let (fitted, metrics) = train_stage1(&params, &problem, &config, SamplerKind::Stratified)?;

    let stride = (epochs / 10).max(1);
    println!("epoch   loss_ic     n_ic");
    for r in metrics.records.iter().filter(|r| (r.epoch + 1) % stride == 0) {
        println!("{:>6}  {:.3e}  {:>5}", r.epoch + 1, r.losses.ic, r.sizes[0]);
    }
    println!("\n     x    u0(x)    U_T(x, 0)");
    for x in [-50.0, -10.0, 0.0, 5.0, 10.0, 20.0, 100.0, 150.0] {
        println!("{x:>6}  {:+.4}  {:+.4}", problem.initial_condition(x), forward(&fitted, x, 0.0)?);
    }
    Ok(())
}
