//! After fitting the initial condition, compare first-layer loss gradients
//! on a uniform sample with and without its diminishing-zone points, and
//! audit parameter derivatives inside vs outside the zones.
//!
//! ```bash
//! cargo run --release --example gradient_filter
//! ```

use stratified_pinn::calculus::ZoneRadiusSpec;
use stratified_pinn::net::init_params;
use stratified_pinn::pde::fisher_problem;
use stratified_pinn::sampler::{sample_classical, SamplerConfig, SamplerKind};
use stratified_pinn::train::{train_stage1, TrainConfig};
use stratified_pinn::verify::{
    audit_zone_derivatives, compare_gradient_filtered, filter_sample, satisfaction_fraction, AuditOutcome,
};
use stratified_pinn::{Domain, NetworkShape};

fn main() -> stratified_pinn::Result<()> {
    // Wide enough that the zones leave part of the domain out.
    let domain = Domain::new(-200.0, 800.0, 0.0, 300.0)?;
    let problem = fisher_problem(domain);
    let sampler = SamplerConfig {
        density: 0.02,
        line_density: Some(1.0),
        derivative_order: 2,
        ..SamplerConfig::default()
    };
    let config = TrainConfig {
        stage1_epochs: 2_000,
        sampler,
        ..TrainConfig::default()
    };
    let init = init_params(&NetworkShape::uniform(3, 40)?, 0);
    let (params, _) = train_stage1(&init, &problem, &config, SamplerKind::Stratified)?;

    let spec = ZoneRadiusSpec::new(sampler.epsilon, sampler.derivative_order)?;
    let sample = sample_classical(&domain, &sampler, &mut sampler.rng());
    let kept = filter_sample(&params, &sample, &spec)?;
    println!("sample sizes [IC, LBC, RBC, PDE]: full {:?}, active zone {:?}", sample.sizes(), kept.sizes());

    let rows = compare_gradient_filtered(&params, &sample, &problem, &spec)?;
    for r in rows.iter().take(6) {
        println!("  {:<10} full {:.3e}  filtered {:.3e}", r.param_id, r.grad_full, r.grad_filtered);
    }
    println!("fraction with filtered >= full: {:.3}", satisfaction_fraction(&rows));

    match audit_zone_derivatives(&params, &domain, &spec, 200, 0)? {
        AuditOutcome::Audited(audits) => {
            let held = audits.iter().filter(|a| a.outside_max <= a.inside_max).count();
            println!("zone audit: outside <= inside for {held}/{} derivative families", audits.len());
        }
        AuditOutcome::Skipped { inside, outside } => {
            println!("zone audit skipped: {inside} probes inside, {outside} outside the zones");
        }
    }
    Ok(())
}
