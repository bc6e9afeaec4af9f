//! Acceptance criteria. Prints one `PASS`/`FAIL` line per criterion and
//! exits non-zero when any fails.
//!
//! The training criteria (6, 7, 8) keep their run directories under
//! `target/tmp/acceptance/`. A run is reused when its stored effective
//! config matches the current one; set `STRATPINN_ACCEPTANCE_FRESH=1` to
//! retrain everything. `STRATPINN_ACCEPTANCE=1,2,5` selects criteria.

mod common;

use std::path::{Path, PathBuf};
use std::time::Instant;

use common::{brute_stirling, close, hand_sigmoid_derivatives, naive_forward, rasterize, richardson_d1, richardson_d2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stratified_pinn::calculus::{delta_epsilon, sigmoid_derivative, stirling2, ZoneRadiusSpec};
use stratified_pinn::experiment::{median, run_single, ExperimentConfig, RunSummary};
use stratified_pinn::net::{accumulate_gradient, eval_jet, init_params, JetAdjoint, JetOrder, Parallelism};
use stratified_pinn::pde::{advection_problem, exact_residual_check, fisher_problem, zeldovich_problem};
use stratified_pinn::sampler::{
    merge_intervals, point_count, sample_classical, sample_stratified, Interval, SamplerKind,
};
use stratified_pinn::train::{train_stage_with, Stage, TrainContext, TrainMetrics};
use stratified_pinn::verify::{compare_gradient_filtered, filter_sample, satisfaction_fraction};
use stratified_pinn::{Domain, NetworkParams, NetworkShape, Point};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn within(secs: f64, limit: f64) -> String {
    format!("runtime {secs:.2}s (limit {limit}s)")
}

fn crit1() -> Verdict {
    let start = Instant::now();
    let mut mismatches = 0;
    for m in 0..=12u32 {
        for n in 0..=m {
            if stirling2(m, n).unwrap() != brute_stirling(m as usize, n as usize) {
                mismatches += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        mismatches == 0 && secs < 1.0,
        format!("{mismatches} mismatches over 0<=n<=m<=12; {}", within(secs, 1.0)),
    )
}

fn crit2() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x = rng.random_range(-10.0..10.0);
        let hand = hand_sigmoid_derivatives(x);
        for n in 1..=3 {
            let v = sigmoid_derivative(n, x).unwrap();
            let h = hand[n as usize - 1];
            worst = worst.max((v - h).abs() / h.abs().max(1e-300));
        }
    }
    let mut symmetry = 0.0f64;
    for _ in 0..100 {
        let x = rng.random_range(-10.0..10.0);
        for n in 1..=6u32 {
            let a = sigmoid_derivative(n, x).unwrap();
            let b = if n % 2 == 1 { 1.0 } else { -1.0 } * sigmoid_derivative(n, -x).unwrap();
            symmetry = symmetry.max((a - b).abs() / a.abs().max(1e-12));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst < 1e-12 && symmetry < 1e-12 && secs < 1.0,
        format!(
            "max rel err vs hand-derived {worst:.1e} (tol 1e-12); symmetry rel err {symmetry:.1e}; {}",
            within(secs, 1.0)
        ),
    )
}

fn crit3() -> Verdict {
    let start = Instant::now();
    let spec = ZoneRadiusSpec::new(1e-3, 4).unwrap();
    let delta = delta_epsilon(&spec).unwrap();
    let mut worst = 0.0f64;
    for m in 1..=4u32 {
        for k in 0..=1000 {
            let x = delta + 0.01 * k as f64;
            for s in [x, -x] {
                worst = worst.max(sigmoid_derivative(m, s).unwrap().abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst < 1e-3 && secs < 1.0,
        format!("delta = {delta:.4}; max |sigma^(m)| for 1<=m<=4 beyond delta = {worst:.3e} (< 1e-3); {}", within(secs, 1.0)),
    )
}

fn one_point_loss(params: &NetworkParams, p: Point) -> f64 {
    let j = eval_jet(params, p.x, p.t).unwrap();
    let r = j.u_t - j.u_xx - j.u * (1.0 - j.u);
    r * r + 0.5 * j.u_x * j.u_x + (j.u - 0.25).powi(2)
}

fn crit4() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut checked, mut failed) = (0usize, 0usize);
    let mut worst = 0.0f64;
    let mut check = |a: f64, b: f64| {
        checked += 1;
        let rel = (a - b).abs() / b.abs().max(1e-300);
        if !close(a, b, 1e-5, 1e-9) {
            failed += 1;
        }
        if (a - b).abs() > 1e-9 {
            worst = worst.max(rel);
        }
    };
    for net in 0..20u64 {
        let layers = rng.random_range(1..=3);
        let widths = (0..layers).map(|_| rng.random_range(1..=10)).collect();
        let params = init_params(&NetworkShape::new(widths).unwrap(), net);
        let p = Point::new(rng.random_range(-3.0..3.0), rng.random_range(0.0..3.0));
        let j = eval_jet(&params, p.x, p.t).unwrap();
        let fx = |x: f64| naive_forward(&params, x, p.t);
        let ft = |t: f64| naive_forward(&params, p.x, t);
        check(j.u_x, richardson_d1(&fx, p.x, 1e-3));
        check(j.u_t, richardson_d1(&ft, p.t, 1e-3));
        check(j.u_xx, richardson_d2(&fx, p.x, 1e-2));

        let mut grad = vec![0.0; params.len()];
        accumulate_gradient(
            &params,
            &[p],
            JetOrder::Full,
            &Parallelism::Serial,
            |_, j| {
                let r = j.u_t - j.u_xx - j.u * (1.0 - j.u);
                let adj = JetAdjoint {
                    u: 2.0 * r * (2.0 * j.u - 1.0) + 2.0 * (j.u - 0.25),
                    u_x: j.u_x,
                    u_t: 2.0 * r,
                    u_xx: -2.0 * r,
                };
                Ok((0.0, adj))
            },
            &mut grad,
        )
        .unwrap();
        for k in 0..params.len() {
            let f = |v: f64| {
                let mut q = params.clone();
                q.as_flat_mut()[k] = v;
                one_point_loss(&q, p)
            };
            check(grad[k], richardson_d1(&f, params.as_flat()[k], 1e-4));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        failed == 0 && secs < 30.0,
        format!(
            "{failed}/{checked} derivatives outside rel 1e-5 / abs 1e-9 (worst rel above floor {worst:.1e}); {}",
            within(secs, 30.0)
        ),
    )
}

fn crit5() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let problems = [
        advection_problem(1.0, Domain::new(-20.0, 80.0, 0.0, 60.0).unwrap()),
        fisher_problem(Domain::new(-20.0, 80.0, 0.0, 30.0).unwrap()),
        zeldovich_problem(Domain::new(-25.0, 175.0, 0.0, 80.0).unwrap()),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for p in &problems {
        let d = *p.domain();
        let pts: Vec<Point> = (0..100)
            .map(|_| Point::new(rng.random_range(d.x_lo..d.x_hi), rng.random_range(d.t_lo..d.t_hi)))
            .collect();
        let r = exact_residual_check(p, &pts).unwrap();
        pass &= r < 1e-10;
        parts.push(format!("{} {r:.1e}", p.name()));
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        pass && secs < 1.0,
        format!("max |residual| of exact: {} (tol 1e-10); {}", parts.join(", "), within(secs, 1.0)),
    )
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn cache_dir() -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance")
}

/// Runs (or reuses) one seed of a config for one sampler.
fn cached_run(config: &ExperimentConfig, kind: SamplerKind, seed: u64) -> (RunSummary, TrainMetrics, bool) {
    let dir = config.run_dir(kind, seed);
    let stamp = dir.join("effective.toml");
    let fresh = std::env::var("STRATPINN_ACCEPTANCE_FRESH").is_ok_and(|v| v == "1");
    let wanted = config.to_toml();
    if !fresh && std::fs::read_to_string(&stamp).is_ok_and(|s| s == wanted) {
        if let (Ok(s), Ok(m)) = (
            std::fs::read_to_string(dir.join("summary.json")),
            TrainMetrics::read_csv(&dir.join("metrics.csv")),
        ) {
            if let Ok(summary) = serde_json::from_str::<RunSummary>(&s) {
                return (summary, m, true);
            }
        }
    }
    let _ = std::fs::remove_file(&stamp);
    let par = Parallelism::with_threads(config.threads).unwrap();
    let run = run_single(config, kind, seed, &par, None).expect("training run");
    std::fs::write(&stamp, wanted).unwrap();
    (run.summary, run.metrics, false)
}

fn load_config(name: &str) -> ExperimentConfig {
    let mut c = ExperimentConfig::load(&configs_dir().join(format!("{name}.toml"))).expect("config");
    c.out_dir = cache_dir().join(name);
    c
}

fn min_loss_criterion(name: &str, threshold: f64, limit_min: f64) -> Verdict {
    let start = Instant::now();
    let config = load_config(name);
    let mut mins = Vec::new();
    let mut reused = 0;
    for &seed in &config.seeds {
        let (summary, metrics, cached) = cached_run(&config, SamplerKind::Stratified, seed);
        reused += usize::from(cached);
        mins.push(metrics.min_loss_total().or(summary.min_loss_total).unwrap_or(f64::INFINITY));
    }
    let med = median(&mins).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let per_seed: Vec<String> = mins.iter().map(|v| format!("{v:.2e}")).collect();
    verdict(
        med <= threshold,
        format!(
            "median min Loss_Total {med:.3e} (<= {threshold:.0e}); seeds [{}]; {} run(s) reused; wall {:.1} min (target {limit_min} min)",
            per_seed.join(", "),
            reused,
            secs / 60.0
        ),
    )
}

fn crit6() -> Verdict {
    min_loss_criterion("advection_small", 3e-5, 15.0)
}

fn crit7() -> Verdict {
    min_loss_criterion("fisher_small", 3e-4, 20.0)
}

fn crit8() -> Verdict {
    let start = Instant::now();
    let config = load_config("advection_medium");
    let (mut cs, mut ss) = (Vec::new(), Vec::new());
    let mut reused = 0;
    for &seed in &config.seeds {
        for (kind, out) in [(SamplerKind::Classical, &mut cs), (SamplerKind::Stratified, &mut ss)] {
            let (summary, _, cached) = cached_run(&config, kind, seed);
            reused += usize::from(cached);
            out.push(summary.final_mse.unwrap_or(f64::INFINITY));
        }
    }
    let (mc, ms) = (median(&cs).unwrap(), median(&ss).unwrap());
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(", ");
    verdict(
        ms < mc,
        format!(
            "median final MSE SS {ms:.3e} vs CS {mc:.3e}; SS [{}], CS [{}]; {} run(s) reused; wall {:.1} min",
            fmt(&ss),
            fmt(&cs),
            reused,
            start.elapsed().as_secs_f64() / 60.0
        ),
    )
}

fn crit9() -> Verdict {
    let start = Instant::now();
    let config = load_config("fisher_small");
    let problem = config.problem().unwrap();
    let mut fractions = Vec::new();
    let mut removed = Vec::new();
    for &seed in &config.seeds {
        let train = config.train_for_seed(seed);
        let init = init_params(&config.shape().unwrap(), seed);
        let (params, _) = train_stage_with(
            &init,
            &problem,
            &train,
            SamplerKind::Stratified,
            Stage::One,
            &mut TrainContext::default(),
        )
        .unwrap();
        let spec = ZoneRadiusSpec::new(train.sampler.epsilon, train.sampler.derivative_order).unwrap();
        let sample = sample_classical(&config.domain, &train.sampler, &mut train.sampler.rng());
        removed.push(sample.len() - filter_sample(&params, &sample, &spec).unwrap().len());
        match compare_gradient_filtered(&params, &sample, &problem, &spec) {
            Ok(rows) => fractions.push(satisfaction_fraction(&rows)),
            Err(e) => {
                println!("      seed {seed}: {e}");
                fractions.push(0.0);
            }
        }
    }
    let med = median(&fractions).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let per: Vec<String> = fractions.iter().map(|f| format!("{f:.3}")).collect();
    verdict(
        med >= 0.9 && secs < 120.0,
        format!(
            "median fraction grad_filtered >= grad_full {med:.3} (>= 0.9); seeds [{}]; points removed by the zone filter {:?}; {}",
            per.join(", "),
            removed,
            within(secs, 120.0)
        ),
    )
}

fn crit10() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut merge_fail = 0;
    for _ in 0..1_000 {
        let n = rng.random_range(0..30);
        let raw: Vec<Interval> = (0..n)
            .map(|_| {
                let lo = rng.random_range(-400..400) as f64 / 8.0;
                let len = rng.random_range(0..80) as f64 / 8.0;
                Interval::new(lo, lo + len).unwrap()
            })
            .collect();
        let merged = merge_intervals(&raw);
        if merge_intervals(&merged) != merged || rasterize(&raw, -60.0, 70.0, 1040) != rasterize(&merged, -60.0, 70.0, 1040) {
            merge_fail += 1;
        }
    }

    let domain = Domain::new(-200.0, 800.0, 0.0, 600.0).unwrap();
    let config = stratified_pinn::SamplerConfig {
        density: 0.025,
        ..Default::default()
    };
    let cs = point_count(config.density, domain.area());
    let (mut expected_fail, mut count_fail, mut count_over_cs, mut det_fail) = (0, 0, 0, 0);
    for net in 0..100u64 {
        let params = init_params(&NetworkShape::uniform(3, 20).unwrap(), net);
        let cfg = stratified_pinn::SamplerConfig { seed: net, ..config };
        let a = sample_stratified(&params, &domain, &cfg, &mut cfg.rng()).unwrap();
        let b = sample_stratified(&params, &domain, &cfg, &mut cfg.rng()).unwrap();
        let c1 = sample_classical(&domain, &cfg, &mut cfg.rng());
        let c2 = sample_classical(&domain, &cfg, &mut cfg.rng());
        if a.samples != b.samples || c1 != c2 {
            det_fail += 1;
        }
        let ss = a.samples.interior.len();
        if cfg.density * a.pde_zones.total_area() > cfg.density * domain.area() * (1.0 + 1e-12) {
            expected_fail += 1;
        }
        if ss > cs + a.pde_zones.interval_count() {
            count_fail += 1;
        }
        if ss > cs {
            count_over_cs += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        merge_fail == 0 && expected_fail == 0 && count_fail == 0 && det_fail == 0 && secs < 30.0,
        format!(
            "merge failures {merge_fail}/1000; expected SS count > CS on {expected_fail}/100 nets; \
             drawn SS > CS + per-interval ceiling slack on {count_fail}/100 (raw SS > CS on {count_over_cs}); \
             nondeterministic draws {det_fail}/100; {}",
            within(secs, 30.0)
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Verdict); 10] = [
        (1, "Stirling numbers vs brute-force enumeration", crit1),
        (2, "sigmoid derivative formula", crit2),
        (3, "zone radius bounds sigmoid derivatives", crit3),
        (4, "derivative engine vs Richardson differences", crit4),
        (5, "exact-solution residuals", crit5),
        (6, "advection desk run, min Loss_Total", crit6),
        (7, "Fisher desk run, min Loss_Total", crit7),
        (8, "stratified beats classical on medium advection", crit8),
        (9, "filtered gradients dominate after stage 1", crit9),
        (10, "sampler properties", crit10),
    ];
    let selected: Option<Vec<u32>> = std::env::var("STRATPINN_ACCEPTANCE")
        .ok()
        .map(|s| s.split(',').filter_map(|v| v.trim().parse().ok()).collect());
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        if selected.as_ref().is_some_and(|s| !s.contains(&id)) {
            continue;
        }
        let v = run();
        println!("{} criterion {id:>2}: {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
