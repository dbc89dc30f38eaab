use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use isac_nd::analytics::curve_strict;
use isac_nd::engine::EventLog;
use isac_nd::harness::{self, emit, ScenarioConfig, SweepAxis};
use isac_nd::policies::AlgorithmId;
use isac_nd::NdError;

#[derive(Parser)]
#[command(name = "isacnd", about = "Sensing-assisted directional neighbor discovery experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replicated runs of one algorithm; writes the ND-ratio curve.
    Run {
        #[command(flatten)]
        common: Common,
        /// Per-slot event log (JSON lines) of the first replication.
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// One experiment per value of a config axis; writes the summary table.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// nodes, rc_ratio, epsilon0, learning_rate or beamwidth_deg.
        #[arg(long)]
        axis: SweepAxis,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Analytic expected-discovery curve.
    Theory {
        #[command(flatten)]
        common: Common,
    },
    /// All configured algorithms on the same seeds, one column each.
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Analytic curve against the simulated mean, joined by slot.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// TOML scenario file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Generic override, repeatable: `--set key=value`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the full result as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Fail on non-convergent experiments, clamped curves or a failed fit.
    #[arg(long)]
    strict: bool,

    #[arg(long)]
    nodes: Option<String>,
    #[arg(long)]
    area_side_km: Option<String>,
    #[arg(long)]
    beamwidth_deg: Option<String>,
    #[arg(long)]
    comm_range_km: Option<String>,
    #[arg(long)]
    rc_ratio: Option<String>,
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long)]
    sensing_slot_cost: Option<String>,
    #[arg(long)]
    transmit_probability: Option<String>,
    /// Comma-separated algorithm ids; the first is used where only one applies.
    #[arg(long)]
    algorithms: Option<String>,
    #[arg(long)]
    epsilon0: Option<String>,
    #[arg(long)]
    epsilon_decay: Option<String>,
    #[arg(long)]
    learning_rate: Option<String>,
    #[arg(long)]
    discount: Option<String>,
    #[arg(long)]
    lambda_basis: Option<String>,
    #[arg(long)]
    random_orientation: Option<String>,
    #[arg(long)]
    replications: Option<String>,
    #[arg(long)]
    base_seed: Option<String>,
    #[arg(long)]
    warmup: Option<String>,
    #[arg(long)]
    slot_cap: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
}

impl Common {
    fn scenario(&self) -> Result<ScenarioConfig, NdError> {
        let mut cfg = match &self.config {
            Some(path) => ScenarioConfig::load(path)?,
            None => ScenarioConfig::default(),
        };
        let flags = [
            ("nodes", &self.nodes),
            ("area_side_km", &self.area_side_km),
            ("beamwidth_deg", &self.beamwidth_deg),
            ("comm_range_km", &self.comm_range_km),
            ("rc_ratio", &self.rc_ratio),
            ("resolution", &self.resolution),
            ("sensing_slot_cost", &self.sensing_slot_cost),
            ("transmit_probability", &self.transmit_probability),
            ("algorithms", &self.algorithms),
            ("epsilon0", &self.epsilon0),
            ("epsilon_decay", &self.epsilon_decay),
            ("learning_rate", &self.learning_rate),
            ("discount", &self.discount),
            ("lambda_basis", &self.lambda_basis),
            ("random_orientation", &self.random_orientation),
            ("replications", &self.replications),
            ("base_seed", &self.base_seed),
            ("warmup", &self.warmup),
            ("slot_cap", &self.slot_cap),
            ("horizon", &self.horizon),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        for kv in &self.sets {
            let (k, v) = kv.split_once('=').ok_or_else(|| NdError::Config(format!("`--set {kv}` is not key=value")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn sink(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn json<T: serde::Serialize>(&self, value: &T) -> Result<(), NdError> {
        match &self.json {
            Some(p) => emit::write_json(value, p),
            None => Ok(()),
        }
    }
}

fn first_algorithm(cfg: &ScenarioConfig) -> Result<AlgorithmId, NdError> {
    cfg.algorithms.first().copied().ok_or_else(|| NdError::Config("no algorithm configured".into()))
}

enum Failure {
    Config(NdError),
    Runtime(NdError),
    Strict(String),
}

impl From<NdError> for Failure {
    fn from(e: NdError) -> Self {
        match e {
            NdError::Io(_) | NdError::Csv(_) | NdError::Json(_) => Failure::Runtime(e),
            other => Failure::Config(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn check_convergent<'a>(
    strict: bool,
    results: impl IntoIterator<Item = &'a harness::ExperimentResult>,
) -> Result<(), Failure> {
    for r in results {
        if strict && r.summary.non_convergent {
            return Err(Failure::Strict(format!(
                "{}: {} of {} runs hit the slot cap",
                r.algorithm, r.summary.capped_runs, r.summary.replications
            )));
        }
    }
    Ok(())
}

fn write_events(cfg: &ScenarioConfig, alg: AlgorithmId, path: &Path) -> Result<(), Failure> {
    let mut log = EventLog::new(BufWriter::new(File::create(path)?));
    harness::simulate_once_logged(cfg, alg, cfg.base_seed, &mut log)?;
    log.into_inner().flush()?;
    Ok(())
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { common, events } => {
            let cfg = common.scenario()?;
            let alg = first_algorithm(&cfg)?;
            let result = harness::run_experiment(&cfg, alg)?;
            emit::write_simulation_csv(&result, common.sink()?)?;
            common.json(&result)?;
            if let Some(path) = events {
                write_events(&cfg, alg, &path)?;
            }
            let s = &result.summary;
            eprintln!(
                "{alg}: mean convergence {:.1} ± {:.1} slots, completeness {:.3}",
                s.mean_convergence_slots, s.ci_halfwidth, s.completeness_rate
            );
            check_convergent(common.strict, [&result])
        }
        Command::Sweep { common, axis, values } => {
            let cfg = common.scenario()?;
            let alg = first_algorithm(&cfg)?;
            let results = harness::sweep(&cfg, alg, axis, &values)?;
            emit::write_summary_csv(results.iter().map(|r| &r.summary), common.sink()?)?;
            common.json(&results)?;
            check_convergent(common.strict, &results)
        }
        Command::Theory { common } => {
            let cfg = common.scenario()?;
            let alg = first_algorithm(&cfg)?;
            let series =
                if common.strict { curve_strict(alg, &cfg.analytic_params())? } else { harness::theory(&cfg, alg)? };
            emit::write_theory_csv(&series, common.sink()?)?;
            common.json(&series)?;
            Ok(())
        }
        Command::Compare { common } => {
            let cfg = common.scenario()?;
            let results = harness::compare(&cfg, &cfg.algorithms)?;
            emit::write_compare_csv(&results, common.sink()?)?;
            common.json(&results)?;
            for r in &results {
                eprintln!("{}: mean convergence {:.1} slots", r.algorithm, r.summary.mean_convergence_slots);
            }
            check_convergent(common.strict, &results)
        }
        Command::Validate { common } => {
            let cfg = common.scenario()?;
            let alg = first_algorithm(&cfg)?;
            let report = harness::validate(&cfg, alg)?;
            emit::write_validation_csv(&report, common.sink()?)?;
            common.json(&report)?;
            eprintln!(
                "{alg}: mean |sim − theory| = {:.3} over {} slots (tolerance {:.3})",
                report.mean_abs_deviation, report.window_end, report.tolerance
            );
            if common.strict && !report.passes() {
                return Err(Failure::Strict(format!("{alg}: fit outside tolerance")));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Strict(msg)) => {
            eprintln!("strict: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
