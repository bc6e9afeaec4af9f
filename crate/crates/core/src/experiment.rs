//! Config-driven experiments.
//!
//! A config is a TOML file:
//!
//! ```toml
//! problem = "advection"      # advection | fisher | zeldovich | sine-plateau
//! speed = 1.0                # advection only
//! seeds = [0, 1, 2]
//! sampler_kind = "both"      # classical | stratified | both
//! out_dir = "runs/advection"
//!
//! [domain]
//! x_lo = -20.0
//! x_hi = 80.0
//! t_lo = 0.0
//! t_hi = 60.0
//!
//! [network]
//! hidden = [20, 20, 20]
//!
//! [train]                    # every key optional, see TrainConfig
//! stage1_epochs = 4000
//! stage2_epochs = 16000
//!
//! [train.sampler]            # every key optional, see SamplerConfig
//! density = 0.5
//! ```
//!
//! Each (seed, sampler kind) pair gets its own directory
//! `<out_dir>/<kind>_seed<seed>/` holding `metrics.csv`, `final.txt`
//! (checkpoint), `summary.json` and the `loss.svg`, `mse.svg`, `samples.svg`
//! plots. The resolved config is written to `<out_dir>/config.toml`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::calculus::ZoneRadiusSpec;
use crate::net::{init_params, read_checkpoint, write_checkpoint, NetworkParams, NetworkShape, Parallelism};
use crate::pde::{problem_by_name, Domain, PdeProblem};
use crate::plot::{Chart, Series};
use crate::sampler::{sample_classical, sample_stratified, write_zones_csv, SamplerKind};
use crate::train::{
    mse_vs_exact_with, train_stage_with, train_two_stage, Stage, TrainConfig, TrainContext, TrainMetrics,
};
use crate::verify::{compare_gradient_filtered_with, satisfaction_fraction, write_gradient_csv, GradientComparison};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum KindSelection {
    Classical,
    #[default]
    Stratified,
    Both,
}

impl KindSelection {
    pub fn kinds(self) -> Vec<SamplerKind> {
        match self {
            KindSelection::Classical => vec![SamplerKind::Classical],
            KindSelection::Stratified => vec![SamplerKind::Stratified],
            KindSelection::Both => vec![SamplerKind::Classical, SamplerKind::Stratified],
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Self::Classical),
            "stratified" => Ok(Self::Stratified),
            "both" => Ok(Self::Both),
            other => Err(Error::Config(format!("unknown sampler `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub hidden: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed: Option<f64>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub sampler_kind: KindSelection,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "default_threads")]
    pub threads: usize,
    pub domain: Domain,
    pub network: NetworkSection,
    #[serde(default)]
    pub train: TrainConfig,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("runs")
}

fn default_threads() -> usize {
    1
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, origin: &Path) -> Result<Self> {
        let parse_err = |e: toml::de::Error| Error::ConfigParse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        };
        let table: toml::Table = toml::from_str(text).map_err(parse_err)?;
        let explicit_order = table
            .get("train")
            .and_then(|t| t.get("sampler"))
            .is_some_and(|s| s.get("derivative_order").is_some());
        let mut config: Self = toml::from_str(text).map_err(parse_err)?;
        config.validate()?;
        // Zones default to the order of the residual rather than the sampler's own default.
        if !explicit_order {
            config.train.sampler.derivative_order = config.problem()?.order();
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        Self::from_toml(&fs::read_to_string(path)?, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment config serialises")
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds must not be empty".into()));
        }
        self.domain.validate()?;
        NetworkShape::new(self.network.hidden.clone())?;
        self.problem()?;
        self.train.validate()
    }

    pub fn problem(&self) -> Result<PdeProblem> {
        problem_by_name(&self.problem, self.domain, self.speed)
    }

    pub fn shape(&self) -> Result<NetworkShape> {
        NetworkShape::new(self.network.hidden.clone())
    }

    /// Training config for one seed: the sampler draws from the run seed.
    pub fn train_for_seed(&self, seed: u64) -> TrainConfig {
        let mut t = self.train;
        t.sampler.seed = seed;
        t
    }

    pub fn run_dir(&self, kind: SamplerKind, seed: u64) -> PathBuf {
        self.out_dir.join(format!("{}_seed{seed}", kind.label()))
    }
}

/// Command-line overrides applied on top of a loaded config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seeds: Vec<u64>,
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Total epoch budget, split 20% / 80%.
    pub epochs: Option<usize>,
    pub sampler: Option<KindSelection>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ExperimentConfig) -> Result<()> {
        if !self.seeds.is_empty() {
            config.seeds = self.seeds.clone();
        }
        if let Some(out) = &self.out_dir {
            config.out_dir = out.clone();
        }
        if let Some(t) = self.threads {
            config.threads = t;
        }
        if let Some(e) = self.epochs {
            config.train = config.train.with_budget(e);
        }
        if let Some(s) = self.sampler {
            config.sampler_kind = s;
        }
        config.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub problem: String,
    pub sampler: String,
    pub seed: u64,
    pub domain: Domain,
    pub hidden: Vec<usize>,
    pub stage1_epochs: usize,
    pub stage2_epochs: usize,
    pub min_loss_total: Option<f64>,
    pub min_loss_ic: Option<f64>,
    pub final_loss_total: Option<f64>,
    pub final_mse: Option<f64>,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub kind: SamplerKind,
    pub seed: u64,
    pub params: NetworkParams,
    pub metrics: TrainMetrics,
    pub summary: RunSummary,
}

fn series(metrics: &TrainMetrics, f: impl Fn(&crate::train::EpochRecord) -> Option<f64>) -> Vec<(f64, f64)> {
    metrics
        .records
        .iter()
        .filter_map(|r| f(r).map(|v| (r.epoch as f64, v)))
        .collect()
}

/// Loss, MSE and sample-size panels for one run, built from its metrics.
pub fn write_run_plots(dir: &Path, label: &str, metrics: &TrainMetrics) -> Result<()> {
    Chart::new(format!("Loss ({label})"), "epoch", "loss")
        .log_y()
        .with_series(Series::new("total", series(metrics, |r| Some(r.losses.total))))
        .with_series(Series::new("IC", series(metrics, |r| Some(r.losses.ic))))
        .with_series(Series::new("PDE", series(metrics, |r| r.is_stage2().then_some(r.losses.pde))))
        .write(&dir.join("loss.svg"))?;
    Chart::new(format!("MSE vs exact ({label})"), "epoch", "MSE")
        .log_y()
        .with_series(Series::new("MSE", series(metrics, |r| r.mse)))
        .write(&dir.join("mse.svg"))?;
    Chart::new(format!("Sample size ({label})"), "epoch", "points")
        .with_series(Series::new("IC", series(metrics, |r| Some(r.sizes[0] as f64))))
        .with_series(Series::new("PDE", series(metrics, |r| r.is_stage2().then_some(r.sizes[3] as f64))))
        .write(&dir.join("samples.svg"))?;
    Ok(())
}

/// Overlay of classical (dashed) and stratified (solid) runs of one seed.
pub fn write_comparison_plots(path_prefix: &Path, cs: &TrainMetrics, ss: &TrainMetrics) -> Result<()> {
    let with_suffix = |s: &str| {
        let mut p = path_prefix.as_os_str().to_owned();
        p.push(s);
        PathBuf::from(p)
    };
    Chart::new("MSE vs exact", "epoch", "MSE")
        .log_y()
        .with_series(Series::new("SS", series(ss, |r| r.mse)))
        .with_series(Series::new("CS", series(cs, |r| r.mse)).dashed())
        .write(&with_suffix("_mse.svg"))?;
    Chart::new("Loss_Total", "epoch", "loss")
        .log_y()
        .with_series(Series::new("SS", series(ss, |r| r.is_stage2().then_some(r.losses.total))))
        .with_series(Series::new("CS", series(cs, |r| r.is_stage2().then_some(r.losses.total))).dashed())
        .write(&with_suffix("_loss.svg"))?;
    Chart::new("Interior sample size", "epoch", "points")
        .with_series(Series::new("SS", series(ss, |r| r.is_stage2().then_some(r.sizes[3] as f64))))
        .with_series(Series::new("CS", series(cs, |r| r.is_stage2().then_some(r.sizes[3] as f64))).dashed())
        .write(&with_suffix("_samples.svg"))?;
    Ok(())
}

/// Trains one (seed, kind) pair and writes its artifacts.
pub fn run_single(
    config: &ExperimentConfig,
    kind: SamplerKind,
    seed: u64,
    par: &Parallelism,
    progress: Option<&mut dyn FnMut(&crate::train::EpochRecord)>,
) -> Result<RunOutcome> {
    let problem = config.problem()?;
    let shape = config.shape()?;
    let train = config.train_for_seed(seed);
    let dir = config.run_dir(kind, seed);
    fs::create_dir_all(&dir)?;

    let start = Instant::now();
    let init = init_params(&shape, seed);
    let mut ctx = TrainContext {
        parallelism: par.clone(),
        checkpoint_dir: (train.checkpoint_stride > 0).then(|| dir.clone()),
        ..Default::default()
    };
    if let Some(cb) = progress {
        ctx.on_epoch = Some(Box::new(cb));
    }
    let (params, metrics) = train_two_stage(&init, &problem, &train, kind, &mut ctx)?;
    let final_mse = mse_vs_exact_with(&params, &problem, train.eval_grid, par)?;

    metrics.write_csv(&dir.join("metrics.csv"))?;
    write_checkpoint(&dir.join("final.txt"), &params)?;
    let summary = RunSummary {
        problem: problem.name().into(),
        sampler: kind.label().into(),
        seed,
        domain: config.domain,
        hidden: config.network.hidden.clone(),
        stage1_epochs: train.stage1_epochs,
        stage2_epochs: train.stage2_epochs,
        min_loss_total: metrics.min_loss_total(),
        min_loss_ic: metrics.min_loss_ic(),
        final_loss_total: metrics.records.last().map(|r| r.losses.total),
        final_mse: Some(final_mse),
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    write_run_plots(&dir, &format!("{} {}, seed {seed}", problem.name(), kind.short()), &metrics)?;
    Ok(RunOutcome {
        dir,
        kind,
        seed,
        params,
        metrics,
        summary,
    })
}

/// Runs every (seed, kind) pair of `config` sequentially.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunOutcome>> {
    config.validate()?;
    fs::create_dir_all(&config.out_dir)?;
    fs::write(config.out_dir.join("config.toml"), config.to_toml())?;
    let par = Parallelism::with_threads(config.threads)?;
    let mut out = Vec::new();
    for &seed in &config.seeds {
        let mut by_kind = BTreeMap::new();
        for kind in config.sampler_kind.kinds() {
            let run = run_single(config, kind, seed, &par, None)?;
            by_kind.insert(kind.label(), run.metrics.clone());
            out.push(run);
        }
        if let (Some(cs), Some(ss)) = (by_kind.get("classical"), by_kind.get("stratified")) {
            write_comparison_plots(&config.out_dir.join(format!("compare_seed{seed}")), cs, ss)?;
        }
    }
    Ok(out)
}

/// Writes the collocation set and zones the sampler would draw for the
/// checkpointed network: `samples_<PARTITION>.csv` and, for the stratified
/// sampler, `zones.csv`.
pub fn dump_samples(
    config: &ExperimentConfig,
    checkpoint: &Path,
    seed: u64,
    kind: SamplerKind,
    out: &Path,
) -> Result<()> {
    let params = read_checkpoint(checkpoint)?;
    let sampler = config.train_for_seed(seed).sampler;
    let mut rng = sampler.rng();
    fs::create_dir_all(out)?;
    match kind {
        SamplerKind::Classical => sample_classical(&config.domain, &sampler, &mut rng).write_csv(out),
        SamplerKind::Stratified => {
            let draw = sample_stratified(&params, &config.domain, &sampler, &mut rng)?;
            draw.samples.write_csv(out)?;
            write_zones_csv(&out.join("zones.csv"), &draw.pde_zones)
        }
    }
}

/// Gradient comparison for the `verify` command: trains stage 1 from the
/// seed (unless `checkpoint` is given) and compares gradients on a classical
/// sample of the whole domain.
pub fn verify_gradients(
    config: &ExperimentConfig,
    seed: u64,
    checkpoint: Option<&Path>,
    par: &Parallelism,
) -> Result<(NetworkParams, Vec<GradientComparison>)> {
    let problem = config.problem()?;
    let train = config.train_for_seed(seed);
    let params = match checkpoint {
        Some(path) => read_checkpoint(path)?,
        None => {
            let init = init_params(&config.shape()?, seed);
            let mut ctx = TrainContext {
                parallelism: par.clone(),
                ..Default::default()
            };
            train_stage_with(&init, &problem, &train, SamplerKind::Stratified, Stage::One, &mut ctx)?.0
        }
    };
    let spec = ZoneRadiusSpec::new(train.sampler.epsilon, train.sampler.derivative_order)?;
    let sample = sample_classical(&config.domain, &train.sampler, &mut train.sampler.rng());
    let rows = compare_gradient_filtered_with(&params, &sample, &problem, &spec, par)?;
    Ok((params, rows))
}

pub fn write_verify_outputs(dir: &Path, rows: &[GradientComparison]) -> Result<f64> {
    fs::create_dir_all(dir)?;
    write_gradient_csv(&dir.join("gradients.csv"), rows)?;
    Ok(satisfaction_fraction(rows))
}

/// Median of a non-empty slice.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

fn collect_run_dirs(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    if dir.join("summary.json").exists() {
        out.push(dir.to_path_buf());
        return Ok(());
    }
    if !dir.is_dir() {
        return Err(Error::MissingFile(dir.join("metrics.csv")));
    }
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    entries.sort();
    for e in entries {
        if e.join("summary.json").exists() {
            out.push(e);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
struct Cell {
    values: Vec<f64>,
}

impl Cell {
    fn render(&self) -> String {
        match median(&self.values) {
            None => "-".into(),
            Some(m) if self.values.len() == 1 => format!("{m:.3e}"),
            Some(m) => {
                let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                format!("{m:.3e} [{lo:.2e}, {hi:.2e}] n={}", self.values.len())
            }
        }
    }
}

/// Min-`Loss_Total` table over run directories (or experiment directories
/// containing runs). Values are recomputed from each run's `metrics.csv`.
pub fn make_table(dirs: &[PathBuf]) -> Result<String> {
    let mut runs = Vec::new();
    for d in dirs {
        collect_run_dirs(d, &mut runs)?;
    }
    if runs.is_empty() {
        return Err(Error::Config("no runs found".into()));
    }
    // (problem, domain, epochs) -> (CS cell, SS cell)
    let mut rows: BTreeMap<(String, String, usize), (Cell, Cell)> = BTreeMap::new();
    for dir in runs {
        let summary: RunSummary = serde_json::from_str(&fs::read_to_string(dir.join("summary.json"))?)?;
        let metrics = TrainMetrics::read_csv(&dir.join("metrics.csv"))?;
        let key = (
            summary.problem.clone(),
            summary.domain.to_string(),
            summary.stage1_epochs + summary.stage2_epochs,
        );
        let entry = rows.entry(key).or_default();
        let cell = if summary.sampler == "classical" { &mut entry.0 } else { &mut entry.1 };
        if let Some(v) = metrics.min_loss_total() {
            cell.values.push(v);
        }
    }
    let header = ["problem", "domain", "epochs", "CS min Loss_Total", "SS min Loss_Total"];
    let body: Vec<[String; 5]> = rows
        .into_iter()
        .map(|((p, d, e), (cs, ss))| [p, d, e.to_string(), cs.render(), ss.render()])
        .collect();
    let mut widths = header.map(str::len);
    for r in &body {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect(), &mut out);
    for r in &body {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(out: &Path) -> ExperimentConfig {
        let text = format!(
            r#"
problem = "advection"
seeds = [3]
sampler_kind = "both"
out_dir = "{}"

[domain]
x_lo = -5.0
x_hi = 10.0
t_lo = 0.0
t_hi = 5.0

[network]
hidden = [4, 4]

[train]
stage1_epochs = 6
stage2_epochs = 10
eval_grid = [11, 6]
eval_stride = 5

[train.sampler]
density = 0.5
n_slabs = 5
"#,
            out.display()
        );
        ExperimentConfig::from_toml(&text, Path::new("tiny.toml")).unwrap()
    }

    #[test]
    fn parse_errors_mention_location() {
        let err = ExperimentConfig::from_toml("problem = \"fisher\"\nseeds = [1,\n", Path::new("bad.toml")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.toml") && msg.contains("line"), "{msg}");
        let dir = tempfile::tempdir().unwrap();
        let mut c = tiny(dir.path());
        c.seeds.clear();
        assert!(c.validate().is_err());
        c.seeds = vec![1];
        c.problem = "heat".into();
        assert!(c.validate().is_err());
    }

    #[test]
    fn effective_config_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let c = tiny(dir.path());
        let back = ExperimentConfig::from_toml(&c.to_toml(), Path::new("x")).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn derivative_order_defaults_to_residual_order() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(tiny(dir.path()).train.sampler.derivative_order, 1);
        let fisher = tiny(dir.path()).to_toml().replace("\"advection\"", "\"fisher\"").replace("derivative_order = 1\n", "");
        let c = ExperimentConfig::from_toml(&fisher, Path::new("f")).unwrap();
        assert_eq!(c.train.sampler.derivative_order, 2);
        let pinned = fisher.replace("[train.sampler]\n", "[train.sampler]\nderivative_order = 3\n");
        let c = ExperimentConfig::from_toml(&pinned, Path::new("f")).unwrap();
        assert_eq!(c.train.sampler.derivative_order, 3);
    }

    #[test]
    fn overrides_apply() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = tiny(dir.path());
        Overrides {
            seeds: vec![7, 8],
            epochs: Some(100),
            sampler: Some(KindSelection::Classical),
            ..Default::default()
        }
        .apply(&mut c)
        .unwrap();
        assert_eq!(c.seeds, vec![7, 8]);
        assert_eq!((c.train.stage1_epochs, c.train.stage2_epochs), (20, 80));
        assert_eq!(c.sampler_kind, KindSelection::Classical);
    }

    #[test]
    fn experiment_writes_artifacts_and_rerun_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let c = tiny(dir.path());
        let runs = run_experiment(&c).unwrap();
        assert_eq!(runs.len(), 2);
        for r in &runs {
            for f in ["metrics.csv", "final.txt", "summary.json", "loss.svg", "mse.svg", "samples.svg"] {
                assert!(r.dir.join(f).exists(), "{f}");
            }
            assert_eq!(r.metrics.len(), 16);
        }
        assert!(dir.path().join("compare_seed3_mse.svg").exists());
        let first = fs::read_to_string(runs[1].dir.join("metrics.csv")).unwrap();

        let effective = ExperimentConfig::load(&dir.path().join("config.toml")).unwrap();
        run_experiment(&effective).unwrap();
        assert_eq!(fs::read_to_string(runs[1].dir.join("metrics.csv")).unwrap(), first);

        let table = make_table(&[dir.path().to_path_buf()]).unwrap();
        assert_eq!(table.lines().count(), 3);
        assert!(table.contains("advection"));
    }

    #[test]
    fn sample_dump_is_deterministic_and_in_domain() {
        let dir = tempfile::tempdir().unwrap();
        let c = tiny(dir.path());
        let ckpt = dir.path().join("init.txt");
        write_checkpoint(&ckpt, &init_params(&c.shape().unwrap(), 1)).unwrap();
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        dump_samples(&c, &ckpt, 4, SamplerKind::Stratified, &a).unwrap();
        dump_samples(&c, &ckpt, 4, SamplerKind::Stratified, &b).unwrap();
        for f in ["zones.csv", "samples_IC.csv", "samples_PDE.csv", "samples_LBC.csv", "samples_RBC.csv"] {
            assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
        }
        let zones = fs::read_to_string(a.join("zones.csv")).unwrap();
        let mut slabs = std::collections::BTreeSet::new();
        for line in zones.lines().skip(1) {
            let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            slabs.insert(v[0] as usize);
            assert!(v[3] <= v[4] && v[3] >= c.domain.x_lo && v[4] <= c.domain.x_hi);
        }
        assert_eq!(slabs.len(), 5);
        assert!(matches!(
            dump_samples(&c, &dir.path().join("missing.txt"), 0, SamplerKind::Stratified, &a),
            Err(Error::MissingFile(_))
        ));
    }

    #[test]
    fn median_and_table_errors() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0]), Some(2.5));
        assert_eq!(median(&[]), None);
        assert!(make_table(&[PathBuf::from("/nonexistent/run")]).is_err());
    }
}
