//! Loss assembly, Adam, and the two-stage training protocol.
//!
//! Stage 1 fits the initial condition alone. Stage 2 minimises
//!
//! ```text
//! Loss_Total = Loss_IC + Loss_LBC + Loss_RBC + Loss_PDE
//! ```
//!
//! where every term is a mean of squared errors over its partition of the
//! current collocation set. The learning rate switches between two levels
//! according to the infinity norm of the gradient.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::net::{accumulate_gradient, forward_batch, jet_batch, write_checkpoint, JetAdjoint, JetOrder, NetworkParams, Parallelism};
use crate::pde::PdeProblem;
use crate::sampler::{
    build_ic_zones, sample_classical, sample_classical_ic, sample_ic, sample_stratified, Partition,
    Point, SampleSet, SamplerConfig, SamplerKind,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainConfig {
    pub stage1_epochs: usize,
    pub stage2_epochs: usize,
    pub eta_high: f64,
    pub eta_low: f64,
    /// `τ`: the high rate applies while `‖g‖_∞ > τ`.
    pub grad_threshold: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub sampler: SamplerConfig,
    /// Draw a fresh collocation set every this many epochs.
    pub resample_every: usize,
    /// `(nx, nt)` grid for the exact-solution MSE.
    pub eval_grid: (usize, usize),
    pub eval_stride: usize,
    /// 0 disables periodic checkpoints.
    pub checkpoint_stride: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            stage1_epochs: 4_000,
            stage2_epochs: 16_000,
            eta_high: 1e-3,
            eta_low: 1e-4,
            grad_threshold: 1e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            sampler: SamplerConfig::default(),
            resample_every: 1,
            eval_grid: (201, 201),
            eval_stride: 100,
            checkpoint_stride: 0,
        }
    }
}

impl TrainConfig {
    /// Splits `total` epochs 20% / 80% between the stages.
    pub fn with_budget(mut self, total: usize) -> Self {
        self.stage1_epochs = total / 5;
        self.stage2_epochs = total - self.stage1_epochs;
        self
    }

    pub fn total_epochs(&self) -> usize {
        self.stage1_epochs + self.stage2_epochs
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta_low > 0.0 && self.eta_low <= self.eta_high && self.eta_high <= 1.0) {
            return Err(Error::Config(format!(
                "learning rates must satisfy 0 < eta_low <= eta_high <= 1, got {} and {}",
                self.eta_low, self.eta_high
            )));
        }
        if !(self.grad_threshold >= 0.0) {
            return Err(Error::Config("grad_threshold must be non-negative".into()));
        }
        if !(0.0..1.0).contains(&self.adam_beta1) || !(0.0..1.0).contains(&self.adam_beta2) {
            return Err(Error::Config("Adam betas must lie in [0, 1)".into()));
        }
        if !(self.adam_eps > 0.0) {
            return Err(Error::Config("adam_eps must be positive".into()));
        }
        if self.resample_every == 0 || self.eval_stride == 0 {
            return Err(Error::Config("resample_every and eval_stride must be at least 1".into()));
        }
        if self.eval_grid.0 == 0 || self.eval_grid.1 == 0 {
            return Err(Error::Config("eval grid needs at least one point per axis".into()));
        }
        self.sampler.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub first_moment: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub step_count: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self {
            first_moment: vec![0.0; len],
            second_moment: vec![0.0; len],
            step_count: 0,
        }
    }
}

/// One bias-corrected Adam update, in place.
pub fn adam_step(
    params: &mut NetworkParams,
    state: &mut AdamState,
    grad: &[f64],
    eta: f64,
    config: &TrainConfig,
) -> Result<()> {
    let n = params.len();
    for len in [grad.len(), state.first_moment.len(), state.second_moment.len()] {
        if len != n {
            return Err(Error::Dimension { expected: n, got: len });
        }
    }
    let (b1, b2) = (config.adam_beta1, config.adam_beta2);
    let step = state.step_count + 1;
    let c1 = 1.0 - b1.powf(step as f64);
    let c2 = 1.0 - b2.powf(step as f64);
    let theta = params.as_flat_mut();
    for i in 0..n {
        let g = grad[i];
        let m = b1 * state.first_moment[i] + (1.0 - b1) * g;
        let v = b2 * state.second_moment[i] + (1.0 - b2) * g * g;
        let next = theta[i] - eta * (m / c1) / ((v / c2).sqrt() + config.adam_eps);
        if !next.is_finite() {
            return Err(Error::NonFiniteUpdate { index: i });
        }
        state.first_moment[i] = m;
        state.second_moment[i] = v;
        theta[i] = next;
    }
    state.step_count = step;
    Ok(())
}

pub fn grad_inf_norm(grad: &[f64]) -> f64 {
    grad.iter().fold(0.0, |m, g| m.max(g.abs()))
}

pub fn adaptive_eta(grad: &[f64], config: &TrainConfig) -> f64 {
    if grad_inf_norm(grad) > config.grad_threshold {
        config.eta_high
    } else {
        config.eta_low
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub ic: f64,
    pub lbc: f64,
    pub rbc: f64,
    pub pde: f64,
    pub total: f64,
}

impl LossBreakdown {
    fn from_parts(ic: f64, lbc: f64, rbc: f64, pde: f64) -> Self {
        Self {
            ic,
            lbc,
            rbc,
            pde,
            total: ic + lbc + rbc + pde,
        }
    }

    pub fn get(&self, p: Partition) -> f64 {
        match p {
            Partition::Ic => self.ic,
            Partition::Lbc => self.lbc,
            Partition::Rbc => self.rbc,
            Partition::Pde => self.pde,
        }
    }
}

/// Which terms a stage optimises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossScope {
    InitialOnly,
    Total,
}

fn target(problem: &PdeProblem, part: Partition, p: Point) -> f64 {
    match part {
        Partition::Ic => problem.initial_condition(p.x),
        Partition::Lbc => problem.left_value(p.t),
        Partition::Rbc => problem.right_value(p.t),
        Partition::Pde => 0.0,
    }
}

fn non_finite(part: Partition, p: Point) -> Error {
    Error::NonFiniteLoss {
        partition: part,
        x: p.x,
        t: p.t,
    }
}

fn scored(scope: LossScope) -> &'static [Partition] {
    match scope {
        LossScope::InitialOnly => &[Partition::Ic],
        LossScope::Total => &Partition::ALL,
    }
}

fn partition_loss(
    params: &NetworkParams,
    problem: &PdeProblem,
    part: Partition,
    points: &[Point],
    par: &Parallelism,
) -> Result<f64> {
    if points.is_empty() {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    if part == Partition::Pde {
        for (p, j) in points.iter().zip(jet_batch(params, points, par)) {
            let r = problem.residual(&j);
            if !r.is_finite() {
                return Err(non_finite(part, *p));
            }
            sum += r * r;
        }
    } else {
        for (p, u) in points.iter().zip(forward_batch(params, points, par)) {
            let e = u - target(problem, part, *p);
            if !e.is_finite() {
                return Err(non_finite(part, *p));
            }
            sum += e * e;
        }
    }
    Ok(sum / points.len() as f64)
}

/// Mean squared errors per partition. An empty partition scores 0.
pub fn compute_losses(params: &NetworkParams, sample: &SampleSet, problem: &PdeProblem) -> Result<LossBreakdown> {
    compute_losses_with(params, sample, problem, &Parallelism::Serial)
}

pub fn compute_losses_with(
    params: &NetworkParams,
    sample: &SampleSet,
    problem: &PdeProblem,
    par: &Parallelism,
) -> Result<LossBreakdown> {
    let mut v = [0.0; 4];
    for (i, part) in Partition::ALL.into_iter().enumerate() {
        v[i] = partition_loss(params, problem, part, sample.partition(part), par)?;
    }
    Ok(LossBreakdown::from_parts(v[0], v[1], v[2], v[3]))
}

/// The scored loss and its exact gradient with respect to every parameter.
pub fn loss_and_gradient(
    params: &NetworkParams,
    sample: &SampleSet,
    problem: &PdeProblem,
    scope: LossScope,
    par: &Parallelism,
) -> Result<(LossBreakdown, Vec<f64>)> {
    let mut grad = vec![0.0; params.len()];
    let mut v = [0.0; 4];
    for &part in scored(scope) {
        let points = sample.partition(part);
        if points.is_empty() {
            continue;
        }
        let inv_n = 1.0 / points.len() as f64;
        let loss = if part == Partition::Pde {
            accumulate_gradient(
                params,
                points,
                JetOrder::Full,
                par,
                |i, jet| {
                    let r = problem.residual(jet);
                    if !r.is_finite() {
                        return Err(non_finite(part, points[i]));
                    }
                    Ok((r * r, problem.residual_partials(jet).scaled(2.0 * r * inv_n)))
                },
                &mut grad,
            )?
        } else {
            accumulate_gradient(
                params,
                points,
                JetOrder::Value,
                par,
                |i, jet| {
                    let e = jet.u - target(problem, part, points[i]);
                    if !e.is_finite() {
                        return Err(non_finite(part, points[i]));
                    }
                    let adj = JetAdjoint {
                        u: 2.0 * e * inv_n,
                        ..JetAdjoint::default()
                    };
                    Ok((e * e, adj))
                },
                &mut grad,
            )?
        };
        v[part as usize] = loss * inv_n;
    }
    Ok((LossBreakdown::from_parts(v[0], v[1], v[2], v[3]), grad))
}

/// Mean of `(U_T - exact)²` over a uniform `nx × nt` grid on the closed
/// domain. A single point on an axis sits at the lower edge.
pub fn mse_vs_exact(params: &NetworkParams, problem: &PdeProblem, grid: (usize, usize)) -> Result<f64> {
    mse_vs_exact_with(params, problem, grid, &Parallelism::Serial)
}

pub fn eval_grid_points(problem: &PdeProblem, grid: (usize, usize)) -> Vec<Point> {
    let d = problem.domain();
    let axis = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        if n == 1 {
            return vec![lo];
        }
        (0..n)
            .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect()
    };
    let xs = axis(d.x_lo, d.x_hi, grid.0);
    let ts = axis(d.t_lo, d.t_hi, grid.1);
    ts.iter().flat_map(|&t| xs.iter().map(move |&x| Point { x, t })).collect()
}

pub fn mse_vs_exact_with(
    params: &NetworkParams,
    problem: &PdeProblem,
    grid: (usize, usize),
    par: &Parallelism,
) -> Result<f64> {
    if !problem.has_exact() {
        return Err(Error::NoExactSolution(problem.name().into()));
    }
    if grid.0 == 0 || grid.1 == 0 {
        return Err(Error::Config("eval grid needs at least one point per axis".into()));
    }
    let points = eval_grid_points(problem, grid);
    let u = forward_batch(params, &points, par);
    let mut sum = 0.0;
    for (p, u) in points.iter().zip(u) {
        let e = u - problem.exact(p.x, p.t).ok_or_else(|| Error::NoExactSolution(problem.name().into()))?;
        sum += e * e;
    }
    Ok(sum / points.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub losses: LossBreakdown,
    pub mse: Option<f64>,
    /// `[n_ic, n_lbc, n_rbc, n_pde]`.
    pub sizes: [usize; 4],
    pub eta: f64,
}

impl EpochRecord {
    /// Stage-1 epochs never score interior points.
    pub fn is_stage2(&self) -> bool {
        self.sizes[3] > 0
    }
}

pub const METRICS_HEADER: &str = "epoch,loss_total,loss_ic,loss_lbc,loss_rbc,loss_pde,mse,eta,n_ic,n_lbc,n_rbc,n_pde";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainMetrics {
    pub records: Vec<EpochRecord>,
}

impl TrainMetrics {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }


    /// Minimum `Loss_Total` over stage-2 epochs.
    pub fn min_loss_total(&self) -> Option<f64> {
        self.records
            .iter()
            .filter(|r| r.is_stage2())
            .map(|r| r.losses.total)
            .min_by(f64::total_cmp)
    }

    pub fn min_loss_ic(&self) -> Option<f64> {
        self.records.iter().map(|r| r.losses.ic).min_by(f64::total_cmp)
    }

    pub fn last_mse(&self) -> Option<f64> {
        self.records.iter().rev().find_map(|r| r.mse)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(100 * (self.records.len() + 1));
        out.push_str(METRICS_HEADER);
        out.push('\n');
        for r in &self.records {
            let l = &r.losses;
            let mse = r.mse.map(|m| format!("{m:e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{:e},{:e},{:e},{:e},{:e},{},{:e},{},{},{},{}\n",
                r.epoch, l.total, l.ic, l.lbc, l.rbc, l.pde, mse, r.eta, r.sizes[0], r.sizes[1], r.sizes[2], r.sizes[3]
            ));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::Config(format!("metrics line {line}: {msg}"));
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(METRICS_HEADER) {
            return Err(bad(1, "unexpected header"));
        }
        let mut records = Vec::new();
        for (i, line) in lines.enumerate() {
            let n = i + 2;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 12 {
                return Err(bad(n, "expected 12 fields"));
            }
            let real = |s: &str| s.parse::<f64>().map_err(|e| bad(n, &e.to_string()));
            let int = |s: &str| s.parse::<usize>().map_err(|e| bad(n, &e.to_string()));
            records.push(EpochRecord {
                epoch: int(f[0])?,
                losses: LossBreakdown {
                    total: real(f[1])?,
                    ic: real(f[2])?,
                    lbc: real(f[3])?,
                    rbc: real(f[4])?,
                    pde: real(f[5])?,
                },
                mse: if f[6].is_empty() { None } else { Some(real(f[6])?) },
                eta: real(f[7])?,
                sizes: [int(f[8])?, int(f[9])?, int(f[10])?, int(f[11])?],
            });
        }
        Ok(Self { records })
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        Self::from_csv(&fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    One,
    Two,
}

pub type EpochHook<'a> = Box<dyn FnMut(&EpochRecord) + 'a>;

/// Runtime settings that do not change the numbers produced.
#[derive(Default)]
pub struct TrainContext<'a> {
    pub parallelism: Parallelism,
    /// Directory for periodic checkpoints (`checkpoint_<epoch>.txt`).
    pub checkpoint_dir: Option<PathBuf>,
    /// Number of the first epoch of the stage being run.
    pub epoch_offset: usize,
    pub on_epoch: Option<EpochHook<'a>>,
}

fn draw(
    params: &NetworkParams,
    problem: &PdeProblem,
    sampler: &SamplerConfig,
    kind: SamplerKind,
    stage: Stage,
    rng: &mut ChaCha8Rng,
) -> Result<SampleSet> {
    let domain = problem.domain();
    Ok(match (stage, kind) {
        (Stage::One, SamplerKind::Classical) => SampleSet {
            ic: sample_classical_ic(domain, sampler, rng),
            ..SampleSet::default()
        },
        (Stage::One, SamplerKind::Stratified) => {
            let zones = build_ic_zones(params, domain, sampler)?;
            SampleSet {
                ic: sample_ic(&zones, domain, sampler, rng),
                ..SampleSet::default()
            }
        }
        (Stage::Two, SamplerKind::Classical) => sample_classical(domain, sampler, rng),
        (Stage::Two, SamplerKind::Stratified) => sample_stratified(params, domain, sampler, rng)?.samples,
    })
}

/// Runs one stage with a fresh Adam state. Epoch numbers in the returned
/// metrics start at `ctx.epoch_offset`.
pub fn train_stage_with(
    params: &NetworkParams,
    problem: &PdeProblem,
    config: &TrainConfig,
    kind: SamplerKind,
    stage: Stage,
    ctx: &mut TrainContext<'_>,
) -> Result<(NetworkParams, TrainMetrics)> {
    config.validate()?;
    let (epochs, scope, stream) = match stage {
        Stage::One => (config.stage1_epochs, LossScope::InitialOnly, 1),
        Stage::Two => (config.stage2_epochs, LossScope::Total, 2),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.sampler.seed);
    rng.set_stream(stream);
    let mut params = params.clone();
    let mut adam = AdamState::new(params.len());
    let mut metrics = TrainMetrics {
        records: Vec::with_capacity(epochs),
    };
    let mut sample = SampleSet::default();
    for epoch in 0..epochs {
        if epoch % config.resample_every == 0 {
            sample = draw(&params, problem, &config.sampler, kind, stage, &mut rng)?;
        }
        let (losses, grad) = loss_and_gradient(&params, &sample, problem, scope, &ctx.parallelism)?;
        let eta = adaptive_eta(&grad, config);
        let mse = if stage == Stage::Two && ((epoch + 1) % config.eval_stride == 0 || epoch + 1 == epochs) {
            Some(mse_vs_exact_with(&params, problem, config.eval_grid, &ctx.parallelism)?)
        } else {
            None
        };
        adam_step(&mut params, &mut adam, &grad, eta, config)?;
        let sizes = match stage {
            Stage::One => [sample.ic.len(), 0, 0, 0],
            Stage::Two => sample.sizes(),
        };
        let record = EpochRecord {
            epoch: ctx.epoch_offset + epoch,
            losses,
            mse,
            sizes,
            eta,
        };
        if let Some(cb) = ctx.on_epoch.as_mut() {
            cb(&record);
        }
        metrics.records.push(record);
        if let Some(dir) = &ctx.checkpoint_dir {
            if config.checkpoint_stride > 0 && (ctx.epoch_offset + epoch + 1).is_multiple_of(config.checkpoint_stride) {
                let name = format!("checkpoint_{}.txt", ctx.epoch_offset + epoch + 1);
                write_checkpoint(&dir.join(name), &params)?;
            }
        }
    }
    Ok((params, metrics))
}

/// Fits the initial condition alone for `stage1_epochs`.
pub fn train_stage1(
    params: &NetworkParams,
    problem: &PdeProblem,
    config: &TrainConfig,
    kind: SamplerKind,
) -> Result<(NetworkParams, TrainMetrics)> {
    train_stage_with(params, problem, config, kind, Stage::One, &mut TrainContext::default())
}

/// Minimises `Loss_Total` for `stage2_epochs`.
pub fn train_stage2(
    params: &NetworkParams,
    problem: &PdeProblem,
    config: &TrainConfig,
    kind: SamplerKind,
) -> Result<(NetworkParams, TrainMetrics)> {
    train_stage_with(params, problem, config, kind, Stage::Two, &mut TrainContext::default())
}

/// Stage 1 followed by stage 2, with stage-2 epochs numbered after stage 1.
pub fn train_two_stage(
    params: &NetworkParams,
    problem: &PdeProblem,
    config: &TrainConfig,
    kind: SamplerKind,
    ctx: &mut TrainContext<'_>,
) -> Result<(NetworkParams, TrainMetrics)> {
    ctx.epoch_offset = 0;
    let (p1, mut metrics) = train_stage_with(params, problem, config, kind, Stage::One, ctx)?;
    ctx.epoch_offset = config.stage1_epochs;
    let (p2, m2) = train_stage_with(&p1, problem, config, kind, Stage::Two, ctx)?;
    metrics.records.extend(m2.records);
    Ok((p2, metrics))
}
