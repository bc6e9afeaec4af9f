//! Fisher's equation `u_t = u_xx + u(1 - u)`: train with stratified sampling
//! and track where the trained front crosses 1/2 against the exact speed
//! `5/√6`.
//!
//! ```bash
//! cargo run --release --example fisher_front -- 20000
//! ```

use stratified_pinn::net::{forward, init_params};
use stratified_pinn::pde::fisher_problem;
use stratified_pinn::sampler::{SamplerConfig, SamplerKind};
use stratified_pinn::train::{train_two_stage, TrainConfig, TrainContext};
use stratified_pinn::{Domain, NetworkParams, NetworkShape};

/// Leftmost x where `U_T(·, t)` drops below 1/2, by bisection on a bracket.
fn crossing(params: &NetworkParams, t: f64, mut lo: f64, mut hi: f64) -> f64 {
    let f = |x: f64| forward(params, x, t).unwrap() - 0.5;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn main() -> stratified_pinn::Result<()> {
    let epochs: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4_000);
    let domain = Domain::new(-20.0, 80.0, 0.0, 30.0)?;
    let problem = fisher_problem(domain);
    let config = TrainConfig {
        sampler: SamplerConfig {
            density: 0.5,
            line_density: Some(10.0),
            ..SamplerConfig::default()
        },
        eval_grid: (101, 31),
        ..TrainConfig::default()
    }
    .with_budget(epochs);
    let init = init_params(&NetworkShape::uniform(3, 40)?, 0);
    let (params, metrics) = train_two_stage(&init, &problem, &config, SamplerKind::Stratified, &mut TrainContext::default())?;
    println!(
        "min Loss_Total {:.3e}, last MSE {:.3e}",
        metrics.min_loss_total().unwrap_or(f64::NAN),
        metrics.last_mse().unwrap_or(f64::NAN)
    );

    // Exact front: (1 + e^{x/√6 - 5t/6})^-2 = 1/2.
    let offset = (2f64.sqrt() - 1.0).ln() * 6f64.sqrt();
    println!("\n    t   trained x_1/2   exact x_1/2");
    for t in [0.0, 5.0, 10.0, 20.0, 30.0] {
        let exact = offset + 5.0 / 6f64.sqrt() * t;
        println!("{t:>5}  {:>13.3}  {:>12.3}", crossing(&params, t, domain.x_lo, domain.x_hi), exact);
    }
    Ok(())
}
