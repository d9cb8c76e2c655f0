mod overrides;

use std::fmt;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use toml::{Table, Value};

use scomab_core::datafit::{filter_zero_days, fit_gamma_moments, load_step_csv, read_step_csv, synthetic_dataset, write_step_csv};
use scomab_core::experiments::{
    calibrate_regression_strategies, calibrate_step_features, paired_difference, presets, run_experiment, run_sweep, write_results_csv,
    ExperimentConfig, ExperimentError,
};
use scomab_core::regression::FeatureSpec;
use scomab_core::simulation::StepModel;
use scomab_service::{Service, StudyConfig};

const BUNDLED_STEPS: &str = include_str!("../data/steps_synthetic.csv");

/// Bad input from the user: flags, config files or values. Exits with 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn lift(e: ExperimentError) -> anyhow::Error {
    match e {
        ExperimentError::Config(msg) => ConfigError(msg).into(),
        other => other.into(),
    }
}

#[derive(Parser)]
#[command(name = "scomab", version, about = "Bandit player-modeling experiments and study server")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one experiment and print per-step means.
    Simulate(ExperimentArgs),
    /// Run one experiment per grid point with shared trial seeds.
    Sweep(SweepArgs),
    /// Fit the gamma step model to a `person_id,date,steps` CSV.
    FitData(FitArgs),
    /// Choose step-model features by backward elimination on pilot trials.
    Calibrate(CalibrateArgs),
    /// Serve the study API.
    Serve(ServeArgs),
}

#[derive(Args, Default)]
struct ExperimentArgs {
    /// TOML file with ExperimentConfig fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write `param,step,mean_reward,freq_A,freq_B,freq_C` CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, visible_alias = "master-seed")]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    horizon: Option<u32>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
    /// raw_steps or combined_z.
    #[arg(long)]
    reward_mode: Option<String>,
    #[arg(long)]
    start_date: Option<String>,
    #[arg(long)]
    retain_trials: Option<bool>,
    /// Strategy kind: random, ucb1, eps_greedy, eps_first, eps_dec_linear, eps_dec_exp.
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    linear_start: Option<f64>,
    #[arg(long)]
    linear_end: Option<f64>,
    #[arg(long)]
    linear_steps: Option<u32>,
    /// mean or regression.
    #[arg(long)]
    estimator: Option<String>,
    #[arg(long)]
    forced_exploration_pulls: Option<u32>,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    /// Any config field by dotted path, e.g. `--set player.profile_ranges.upward=[1.2,1.5]`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

impl ExperimentArgs {
    fn named_overrides(&self) -> Vec<(&'static str, Value)> {
        let mut out = Vec::new();
        let mut put = |key: &'static str, v: Option<Value>| {
            if let Some(v) = v {
                out.push((key, v));
            }
        };
        let int = |v: u64| Value::Integer(v as i64);
        put("master_seed", self.seed.map(int));
        put("trials", self.trials.map(int));
        put("horizon", self.horizon.map(|v| int(v.into())));
        put("workers", self.workers.map(|v| int(v as u64)));
        put("reward_mode", self.reward_mode.clone().map(Value::String));
        put("start_date", self.start_date.clone().map(Value::String));
        put("retain_trials", self.retain_trials.map(Value::Boolean));
        put("strategy.kind", self.strategy.clone().map(Value::String));
        put("strategy.c", self.c.map(Value::Float));
        put("strategy.epsilon", self.epsilon.map(Value::Float));
        put("strategy.linear_start", self.linear_start.map(Value::Float));
        put("strategy.linear_end", self.linear_end.map(Value::Float));
        put("strategy.linear_steps", self.linear_steps.map(|v| int(v.into())));
        put("strategy.estimator", self.estimator.clone().map(Value::String));
        put("strategy.forced_exploration_pulls", self.forced_exploration_pulls.map(|v| int(v.into())));
        put("player.u", self.u.map(Value::Float));
        put("player.d", self.d.map(Value::Float));
        put("player.k", self.k.map(Value::Float));
        put("player.theta", self.theta.map(Value::Float));
        out
    }

    /// File (or `base`) first, then named flags, then `--set` assignments.
    fn build(&self, base: Option<&ExperimentConfig>) -> Result<ExperimentConfig> {
        let mut table = match (&self.config, base) {
            (Some(_), Some(_)) => bail!(ConfigError("--config and --preset are mutually exclusive".into())),
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
                toml::from_str::<Table>(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?
            }
            (None, Some(cfg)) => toml::from_str::<Table>(&cfg.to_toml_string()).expect("config round-trips"),
            (None, None) => toml::from_str::<Table>("[strategy]\nkind = \"random\"\n").expect("literal"),
        };
        for (key, value) in self.named_overrides() {
            overrides::set_path(&mut table, key, value)?;
        }
        overrides::apply_sets(&mut table, &self.sets)?;
        let text = toml::to_string(&table).map_err(|e| ConfigError(e.to_string()))?;
        ExperimentConfig::from_toml_str(&text).map_err(lift)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// UCB1 over C = 400..3600.
    Exp1,
    /// UCB1 vs epsilon-decreasing vs epsilon-greedy.
    Exp2,
    /// Mean vs regression estimators with nine forced pulls.
    Exp3,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    exp: ExperimentArgs,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Pilot trials for the exp3 feature calibration.
    #[arg(long, default_value_t = 2000)]
    pilot_trials: u64,
    /// Compare points on mean reward over steps FROM-TO (1-based) instead of the whole horizon.
    #[arg(long, value_name = "FROM-TO")]
    window: Option<String>,
}

#[derive(Args)]
struct FitArgs {
    /// CSV to fit; the bundled synthetic dataset when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Fit without dropping zero-step days.
    #[arg(long)]
    keep_zero_days: bool,
    /// Write a seeded synthetic dataset to this path instead of fitting.
    #[arg(long)]
    synthesize: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    persons: usize,
    #[arg(long, default_value_t = 90)]
    days: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.03)]
    zero_rate: f64,
}

#[derive(Args)]
struct CalibrateArgs {
    #[command(flatten)]
    exp: ExperimentArgs,
    #[arg(long, default_value_t = 2000)]
    pilot_trials: u64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    /// Root seed of every participant's random streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Event log; replayed on start, appended to while running.
    #[arg(long, default_value = "events.jsonl")]
    log: PathBuf,
    #[arg(long, default_value_t = 21)]
    program_days: u32,
}

fn print_result_table(label: &str, result: &scomab_core::experiments::ExperimentResult) {
    println!("strategy {label}");
    println!("trials {}  horizon {}", result.trials_run, result.horizon);
    println!("overall mean reward {:.3}", result.overall_mean);
    println!("{:>4} {:>14} {:>8} {:>8} {:>8}", "step", "mean_reward", "freq_A", "freq_B", "freq_C");
    for (i, (r, f)) in result.per_step_mean_reward.iter().zip(&result.per_step_arm_frequencies).enumerate() {
        println!("{:>4} {:>14.3} {:>8.4} {:>8.4} {:>8.4}", i + 1, r, f[0], f[1], f[2]);
    }
}

fn simulate(args: &ExperimentArgs) -> Result<()> {
    let cfg = args.build(None)?;
    let started = Instant::now();
    let result = run_experiment(&cfg).map_err(lift)?;
    eprintln!("{} trials in {:.2?}", result.trials_run, started.elapsed());
    let label = cfg.strategy.label();
    print_result_table(&label, &result);
    if let Some(out) = &args.out {
        write_results_csv(&[(label, &result)], out).map_err(lift)?;
    }
    Ok(())
}

fn parse_window(raw: &str) -> Result<(u32, u32)> {
    let parsed = raw.split_once('-').and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
    parsed.ok_or_else(|| ConfigError(format!("window must look like 10-21, got `{raw}`")).into())
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let base = args.preset.map(|p| match p {
        Preset::Exp1 => presets::c_sweep(100_000, 1),
        Preset::Exp2 => presets::strategy_comparison(100_000, 1),
        Preset::Exp3 => presets::regression_comparison(100_000, 1, &FeatureSpec::step_default()),
    });
    let mut cfg = args.exp.build(base.as_ref())?;
    let window = args.window.as_deref().map(parse_window).transpose()?;
    if window.is_some() {
        cfg.retain_trials = true;
    }
    if matches!(args.preset, Some(Preset::Exp3)) {
        let el = calibrate_regression_strategies(&mut cfg, args.pilot_trials, 0.05).map_err(lift)?;
        eprintln!("calibrated step features: {}", el.spec.column_names().join(", "));
    }
    let Some(grid) = cfg.sweep.clone() else {
        bail!(ConfigError("sweep needs a [sweep] grid in the config or a --preset".into()));
    };
    let started = Instant::now();
    let result = run_sweep(&cfg, &grid).map_err(lift)?;
    eprintln!("{} points in {:.2?}", result.points.len(), started.elapsed());

    let per_trial = |i: usize| -> Vec<f64> {
        let r = &result.points[i].result;
        match window {
            Some((a, b)) => r.window_means(a, b).unwrap_or_default(),
            None => r.trial_means.clone(),
        }
    };
    let scores: Vec<f64> =
        (0..result.points.len()).map(|i| per_trial(i).iter().sum::<f64>() / per_trial(i).len().max(1) as f64).collect();
    let best = (0..scores.len()).max_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(b.cmp(&a))).unwrap_or(0);
    let best_trials = per_trial(best);
    println!("{:<44} {:>14} {:>30}", "param", "mean_reward", "difference vs best (95% CI)");
    for (i, p) in result.points.iter().enumerate() {
        let mark = if i == best { "*" } else { " " };
        let diff = match paired_difference(&per_trial(i), &best_trials) {
            Some(d) if i != best => format!("{:.3} [{:.3}, {:.3}]", d.mean, d.lower, d.upper),
            _ => String::from("-"),
        };
        println!("{mark}{:<43} {:>14.3} {:>30}", p.param, scores[i], diff);
    }
    if let Some(out) = &args.exp.out {
        write_results_csv(&result.csv_rows(), out).map_err(lift)?;
    }
    Ok(())
}

fn fit_data(args: &FitArgs) -> Result<()> {
    if let Some(path) = &args.synthesize {
        if !(0.0..1.0).contains(&args.zero_rate) {
            bail!(ConfigError(format!("zero rate must be in [0, 1), got {}", args.zero_rate)));
        }
        let start = NaiveDate::from_ymd_opt(2016, 3, 12).expect("valid date");
        let set = synthetic_dataset(args.persons, args.days, start, &StepModel::default(), args.zero_rate, args.seed);
        let file = std::fs::File::create(path).with_context(|| path.display().to_string())?;
        write_step_csv(&set, std::io::BufWriter::new(file)).with_context(|| path.display().to_string())?;
        println!("wrote {} records to {}", set.len(), path.display());
        return Ok(());
    }
    let report = match &args.input {
        Some(path) => load_step_csv(path)?,
        None => read_step_csv(BUNDLED_STEPS.as_bytes())?,
    };
    for err in &report.row_errors {
        eprintln!("line {}: {}", err.line, err.message);
    }
    let set = if args.keep_zero_days { report.set.clone() } else { filter_zero_days(&report.set) };
    let model = fit_gamma_moments(&set.steps())?;
    println!("records {}", report.set.len());
    println!("row errors {}", report.row_errors.len());
    println!("zero-step days removed {}", report.set.len() - set.len());
    println!("k {:.4}", model.k);
    println!("theta {:.2}", model.theta);
    println!("mean {:.2}", model.mean());
    Ok(())
}

fn calibrate(args: &CalibrateArgs) -> Result<()> {
    let cfg = args.exp.build(None)?;
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        bail!(ConfigError(format!("alpha must be in (0, 1), got {}", args.alpha)));
    }
    let el = calibrate_step_features(&cfg, &FeatureSpec::step_default(), args.pilot_trials, args.alpha)
        .map_err(lift)?;
    let removed: Vec<String> = el.removed.iter().map(|f| f.to_string()).collect();
    println!("removed {}", removed.join(", "));
    println!("kept {}", el.spec.column_names().join(", "));
    let names: Vec<String> = el.spec.names.iter().map(|f| format!("\"{f}\"")).collect();
    println!("\n[strategy.regression.steps]\nnames = [{}]\nincludes_intercept = {}", names.join(", "), el.spec.includes_intercept);
    Ok(())
}

fn serve(args: &ServeArgs) -> Result<()> {
    let config = StudyConfig { seed: args.seed, program_days: args.program_days, ..StudyConfig::default() };
    let (service, report) =
        Service::open(config, &args.log).map_err(|e| anyhow::anyhow!("opening {}: {e}", args.log.display()))?;
    if let Some(halt) = &report.halted {
        eprintln!("event log damaged at line {}: {}; kept events up to seq {}", halt.line, halt.reason, report.last_seq);
    }
    eprintln!("replayed {} events; listening on {}", report.events_applied, args.addr);
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(scomab_service::serve(service, args.addr))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Cmd::Simulate(args) => simulate(args),
        Cmd::Sweep(args) => sweep(args),
        Cmd::FitData(args) => fit_data(args),
        Cmd::Calibrate(args) => calibrate(args),
        Cmd::Serve(args) => serve(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
