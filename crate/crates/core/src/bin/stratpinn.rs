use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stratified_pinn::calculus::ZoneRadiusSpec;
use stratified_pinn::experiment::{
    dump_samples, make_table, run_single, verify_gradients, write_comparison_plots, write_verify_outputs,
    ExperimentConfig, KindSelection, Overrides,
};
use stratified_pinn::net::{read_checkpoint, Parallelism};
use stratified_pinn::sampler::SamplerKind;
use stratified_pinn::train::EpochRecord;
use stratified_pinn::verify::{audit_zone_derivatives, AuditOutcome};
use stratified_pinn::Result;

#[derive(Parser)]
#[command(name = "stratpinn", version, about = "Sigmoid PINN training with stratified collocation sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Seed to run; repeat for several. Overrides the config's list.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Total epoch budget, split 20% stage 1 / 80% stage 2.
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long, value_parser = ["classical", "stratified", "both"])]
    sampler: Option<String>,
    /// Print progress every this many epochs (0 = silent).
    #[arg(long, default_value_t = 1000)]
    log_every: usize,
}

impl Common {
    fn load(&self, forced: Option<KindSelection>) -> Result<ExperimentConfig> {
        let mut config = ExperimentConfig::load(&self.config)?;
        let sampler = match (forced, &self.sampler) {
            (Some(k), _) => Some(k),
            (None, Some(s)) => Some(KindSelection::parse(s)?),
            (None, None) => None,
        };
        Overrides {
            seeds: self.seeds.clone(),
            out_dir: self.out.clone(),
            threads: self.threads,
            epochs: self.epochs,
            sampler,
        }
        .apply(&mut config)?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Train every configured (seed, sampler) pair.
    Train(Common),
    /// Train with both samplers and print the comparison table.
    Compare(Common),
    /// Compare first-layer gradients with and without diminishing-zone points.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Network to inspect; by default stage 1 is trained from the seed.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Probe points per side for the zone-derivative audit.
        #[arg(long, default_value_t = 200)]
        probes: usize,
    },
    /// Write the collocation samples and zones for a checkpoint.
    SampleDump {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        checkpoint: PathBuf,
    },
    /// Summarise finished runs.
    Table {
        /// Run or experiment directories.
        #[arg(required = true)]
        dirs: Vec<PathBuf>,
    },
}

fn train(config: &ExperimentConfig, log_every: usize) -> Result<()> {
    std::fs::create_dir_all(&config.out_dir)?;
    std::fs::write(config.out_dir.join("config.toml"), config.to_toml())?;
    let par = Parallelism::with_threads(config.threads)?;
    for &seed in &config.seeds {
        let mut metrics = Vec::new();
        for kind in config.sampler_kind.kinds() {
            let tag = format!("{} seed {seed}", kind.short());
            let mut log = |r: &EpochRecord| {
                if log_every > 0 && (r.epoch + 1).is_multiple_of(log_every) {
                    eprintln!(
                        "[{tag}] epoch {} loss_total {:.3e} loss_ic {:.3e} n_pde {}",
                        r.epoch + 1,
                        r.losses.total,
                        r.losses.ic,
                        r.sizes[3]
                    );
                }
            };
            let run = run_single(config, kind, seed, &par, Some(&mut log))?;
            let s = &run.summary;
            println!(
                "{} {} seed {}: min_loss_total {} final_mse {} ({:.1}s) -> {}",
                s.problem,
                kind.short(),
                seed,
                s.min_loss_total.map_or("-".into(), |v| format!("{v:.3e}")),
                s.final_mse.map_or("-".into(), |v| format!("{v:.3e}")),
                s.wall_seconds,
                run.dir.display()
            );
            metrics.push((kind, run.metrics));
        }
        if let [(SamplerKind::Classical, cs), (SamplerKind::Stratified, ss)] = metrics.as_slice() {
            write_comparison_plots(&config.out_dir.join(format!("compare_seed{seed}")), cs, ss)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(common) => train(&common.load(None)?, common.log_every),
        Command::Compare(common) => {
            let config = common.load(Some(KindSelection::Both))?;
            train(&config, common.log_every)?;
            print!("{}", make_table(std::slice::from_ref(&config.out_dir))?);
            Ok(())
        }
        Command::Verify {
            common,
            checkpoint,
            probes,
        } => {
            let config = common.load(None)?;
            let par = Parallelism::with_threads(config.threads)?;
            for &seed in &config.seeds {
                let (params, rows) = verify_gradients(&config, seed, checkpoint.as_deref(), &par)?;
                let dir = config.out_dir.join(format!("verify_seed{seed}"));
                let frac = write_verify_outputs(&dir, &rows)?;
                let held = rows.iter().filter(|r| r.grad_filtered >= r.grad_full).count();
                println!(
                    "seed {seed}: grad_filtered >= grad_full for {held}/{} first-layer parameters (fraction {frac:.3})",
                    rows.len()
                );
                let s = config.train_for_seed(seed).sampler;
                let spec = ZoneRadiusSpec::new(s.epsilon, s.derivative_order)?;
                match audit_zone_derivatives(&params, &config.domain, &spec, probes, seed)? {
                    AuditOutcome::Audited(audits) => {
                        let mut text = String::from("derivative,inside_max,outside_max,epsilon\n");
                        for a in &audits {
                            text.push_str(&format!(
                                "\"{}\",{:e},{:e},{:e}\n",
                                a.derivative_name, a.inside_max, a.outside_max, a.epsilon_used
                            ));
                        }
                        std::fs::write(dir.join("zone_audit.csv"), text)?;
                        let ok = audits.iter().filter(|a| a.outside_max <= a.inside_max).count();
                        println!("seed {seed}: zone audit outside <= inside for {ok}/{}", audits.len());
                    }
                    AuditOutcome::Skipped { inside, outside } => {
                        println!("seed {seed}: zone audit skipped ({inside} inside, {outside} outside probes)");
                    }
                }
            }
            Ok(())
        }
        Command::SampleDump { common, checkpoint } => {
            let config = common.load(None)?;
            read_checkpoint(&checkpoint)?;
            for &seed in &config.seeds {
                for kind in config.sampler_kind.kinds() {
                    let dir = config.out_dir.join(format!("samples_{}_seed{seed}", kind.label()));
                    dump_samples(&config, &checkpoint, seed, kind, &dir)?;
                    println!("{}", dir.display());
                }
            }
            Ok(())
        }
        Command::Table { dirs } => {
            print!("{}", make_table(&dirs)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
