//! Numerical checks of the zone semantics.
//!
//! [`audit_zone_derivatives`] compares first-layer parameter derivatives of
//! `U_T` inside and outside the active zones. [`compare_gradient_filtered`]
//! measures how removing diminishing-zone points changes the loss gradient
//! with respect to first-layer parameters.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::{delta_epsilon, ZoneRadiusSpec};
use crate::net::{accumulate_gradient, JetAdjoint, JetOrder, NetworkParams, Parallelism};
use crate::pde::{Domain, PdeProblem};
use crate::sampler::{build_pde_zones, Partition, Point, SampleSet, SamplerConfig, ZoneSet};
use crate::train::{loss_and_gradient, LossScope};
use crate::{Error, Result};

pub const MIN_PROBES: usize = 100;
pub const MAX_PROBE_ATTEMPTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZoneAudit {
    pub inside_max: f64,
    pub outside_max: f64,
    pub epsilon_used: f64,
    /// e.g. `d2U/dw1[3,0]dx`.
    pub derivative_name: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AuditOutcome {
    Audited(Vec<ZoneAudit>),
    /// No probe could be placed on one side of the zone boundary.
    Skipped { inside: usize, outside: usize },
}

/// Input-derivative channels audited for a given derivative order.
fn channels(order: u32) -> Vec<(&'static str, JetAdjoint)> {
    let unit = |u, u_x, u_t, u_xx| JetAdjoint { u, u_x, u_t, u_xx };
    let mut out = vec![
        ("", unit(1.0, 0.0, 0.0, 0.0)),
        ("dx", unit(0.0, 1.0, 0.0, 0.0)),
        ("dt", unit(0.0, 0.0, 1.0, 0.0)),
    ];
    if order >= 2 {
        out.push(("dxdx", unit(0.0, 0.0, 0.0, 1.0)));
    }
    out
}

fn derivative_name(param: &str, suffix: &str) -> String {
    let order = 1 + suffix.len() / 2;
    if order == 1 {
        format!("dU/d{param}")
    } else {
        format!("d{order}U/d{param}{suffix}")
    }
}

/// Gradient of one jet component at one point.
fn point_gradient(params: &NetworkParams, p: Point, seed: JetAdjoint) -> Result<Vec<f64>> {
    let mut g = vec![0.0; params.len()];
    accumulate_gradient(params, &[p], JetOrder::Full, &Parallelism::Serial, |_, _| Ok((0.0, seed)), &mut g)?;
    Ok(g)
}

/// Uniform probes in the open domain, split by zone membership.
pub fn draw_probes(zones: &ZoneSet, domain: &Domain, probes: usize, seed: u64) -> (Vec<Point>, Vec<Point>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut inside, mut outside) = (Vec::new(), Vec::new());
    for _ in 0..MAX_PROBE_ATTEMPTS {
        if inside.len() >= probes && outside.len() >= probes {
            break;
        }
        let p = Point::new(
            rng.random_range(domain.x_lo..domain.x_hi),
            rng.random_range(domain.t_lo..domain.t_hi),
        );
        let side = if zones.contains(p) { &mut inside } else { &mut outside };
        if side.len() < probes {
            side.push(p);
        }
    }
    (inside, outside)
}

/// Max `|∂^k U_T / ∂θ ∂(input)^m|` over in-zone and out-of-zone probes for
/// every first-layer parameter `θ`.
pub fn audit_zone_derivatives(
    params: &NetworkParams,
    domain: &Domain,
    spec: &ZoneRadiusSpec,
    probes: usize,
    seed: u64,
) -> Result<AuditOutcome> {
    if probes < MIN_PROBES {
        return Err(Error::Config(format!("at least {MIN_PROBES} probes are required, got {probes}")));
    }
    let sampler = SamplerConfig {
        epsilon: spec.epsilon(),
        derivative_order: spec.derivative_order(),
        ..SamplerConfig::default()
    };
    let zones = build_pde_zones(params, domain, &sampler)?;
    let (inside, outside) = draw_probes(&zones, domain, probes, seed);
    if inside.is_empty() || outside.is_empty() {
        return Ok(AuditOutcome::Skipped {
            inside: inside.len(),
            outside: outside.len(),
        });
    }

    let first = params.first_layer_indices();
    let chans = channels(spec.derivative_order());
    let side_max = |points: &[Point]| -> Result<Vec<Vec<f64>>> {
        let mut best = vec![vec![0.0f64; first.len()]; chans.len()];
        for &p in points {
            for (c, (_, seed)) in chans.iter().enumerate() {
                let g = point_gradient(params, p, *seed)?;
                for (b, v) in best[c].iter_mut().zip(&g[first.clone()]) {
                    *b = b.max(v.abs());
                }
            }
        }
        Ok(best)
    };
    let in_max = side_max(&inside)?;
    let out_max = side_max(&outside)?;

    let mut audits = Vec::with_capacity(chans.len() * first.len());
    for q in first.clone() {
        let id = params.param_id(q);
        for (c, (suffix, _)) in chans.iter().enumerate() {
            audits.push(ZoneAudit {
                inside_max: in_max[c][q - first.start],
                outside_max: out_max[c][q - first.start],
                epsilon_used: spec.epsilon(),
                derivative_name: derivative_name(&id, suffix),
            });
        }
    }
    Ok(AuditOutcome::Audited(audits))
}

/// True when some first-layer preactivation at `p` lies within `delta`.
pub fn in_active_zone(params: &NetworkParams, p: Point, delta: f64) -> Result<bool> {
    for j in 0..params.first_layer_width() {
        let (wx, wt, b) = params.first_layer_neuron(j)?;
        if (wx * p.x + wt * p.t + b).abs() <= delta {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `S − S_ε`: drops every point whose first-layer preactivations all exceed
/// the zone radius in magnitude.
pub fn filter_sample(params: &NetworkParams, sample: &SampleSet, spec: &ZoneRadiusSpec) -> Result<SampleSet> {
    let delta = delta_epsilon(spec)?;
    let mut out = SampleSet::default();
    for part in Partition::ALL {
        let kept = out.partition_mut(part);
        for &p in sample.partition(part) {
            if in_active_zone(params, p, delta)? {
                kept.push(p);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientComparison {
    pub param_id: String,
    pub grad_full: f64,
    pub grad_filtered: f64,
}

impl GradientComparison {
    pub fn ratio(&self) -> f64 {
        self.grad_filtered / self.grad_full
    }
}

/// `|∂Loss_Total/∂θ|` for each first-layer `θ`, on `sample` and on its
/// active-zone part.
pub fn compare_gradient_filtered(
    params: &NetworkParams,
    sample: &SampleSet,
    problem: &PdeProblem,
    spec: &ZoneRadiusSpec,
) -> Result<Vec<GradientComparison>> {
    compare_gradient_filtered_with(params, sample, problem, spec, &Parallelism::Serial)
}

pub fn compare_gradient_filtered_with(
    params: &NetworkParams,
    sample: &SampleSet,
    problem: &PdeProblem,
    spec: &ZoneRadiusSpec,
    par: &Parallelism,
) -> Result<Vec<GradientComparison>> {
    let filtered = filter_sample(params, sample, spec)?;
    for part in Partition::ALL {
        if !sample.partition(part).is_empty() && filtered.partition(part).is_empty() {
            return Err(Error::EmptyPartition(part));
        }
    }
    let (_, full) = loss_and_gradient(params, sample, problem, LossScope::Total, par)?;
    let (_, kept) = loss_and_gradient(params, &filtered, problem, LossScope::Total, par)?;
    Ok(params
        .first_layer_indices()
        .map(|q| GradientComparison {
            param_id: params.param_id(q),
            grad_full: full[q].abs(),
            grad_filtered: kept[q].abs(),
        })
        .collect())
}

/// Fraction of rows with `grad_filtered ≥ grad_full`.
pub fn satisfaction_fraction(rows: &[GradientComparison]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    rows.iter().filter(|r| r.grad_filtered >= r.grad_full).count() as f64 / rows.len() as f64
}

/// Header `param_id,grad_full,grad_filtered,ratio`.
pub fn write_gradient_csv(path: &Path, rows: &[GradientComparison]) -> Result<()> {
    let mut f = fs::File::create(path)?;
    writeln!(f, "param_id,grad_full,grad_filtered,ratio")?;
    for r in rows {
        writeln!(f, "\"{}\",{:e},{:e},{:e}", r.param_id, r.grad_full, r.grad_filtered, r.ratio())?;
    }
    Ok(())
}
