use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{curve, AnalyticSeries};
use crate::engine::{EventLog, Network, RunRecord, RunSettings, Simulation};
use crate::error::{NdError, Result};
use crate::geometry::place_nodes;
use crate::geometry::SectorTable;
use crate::policies::AlgorithmId;
use crate::sensing::sense_with_table;

use super::config::ScenarioConfig;

/// z-score of a two-sided 95% normal interval.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub algorithm: AlgorithmId,
    pub nodes: usize,
    pub rc_ratio: f64,
    pub replications: usize,
    pub mean_convergence_slots: f64,
    pub median_convergence_slots: f64,
    pub ci_halfwidth: f64,
    pub mean_last_discovery_slot: f64,
    pub completeness_rate: f64,
    pub capped_runs: usize,
    /// More than half of the runs hit the slot cap.
    pub non_convergent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ScenarioConfig,
    pub algorithm: AlgorithmId,
    pub runs: Vec<RunRecord>,
    pub summary: Summary,
    /// Mean ND ratio at the end of each slot; finished runs hold their final value.
    pub nd_ratio: Vec<f64>,
    pub nd_ratio_ci: Vec<f64>,
}

fn mean_and_halfwidth(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, Z95 * (var / n as f64).sqrt())
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let mid = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    }
}

/// Per-slot mean of per-run curves, holding each run's last value.
pub fn mean_curve(curves: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let len = curves.iter().map(Vec::len).max().unwrap_or(0);
    let at = |c: &Vec<f64>, t: usize| c.get(t).or(c.last()).copied().unwrap_or(0.0);
    (0..len).map(|t| mean_and_halfwidth(curves.iter().map(move |c| at(c, t)))).unzip()
}

impl ExperimentResult {
    /// Aggregates recomputed from the raw run records.
    pub fn from_runs(config: ScenarioConfig, algorithm: AlgorithmId, runs: Vec<RunRecord>) -> Self {
        let times = runs.iter().map(|r| r.convergence_slots() as f64);
        let (mean, half) = mean_and_halfwidth(times.clone());
        let capped = runs.iter().filter(|r| r.capped()).count();
        let n = runs.len().max(1) as f64;
        let summary = Summary {
            algorithm,
            nodes: config.nodes,
            rc_ratio: config.rc_ratio,
            replications: runs.len(),
            mean_convergence_slots: mean,
            median_convergence_slots: median(times.collect()),
            ci_halfwidth: half,
            mean_last_discovery_slot: runs.iter().map(|r| r.last_discovery_slot as f64).sum::<f64>() / n,
            completeness_rate: runs.iter().filter(|r| r.complete).count() as f64 / n,
            capped_runs: capped,
            non_convergent: 2 * capped > runs.len(),
        };
        let curves: Vec<Vec<f64>> = runs.iter().map(RunRecord::nd_ratio_curve).collect();
        let (nd_ratio, nd_ratio_ci) = mean_curve(&curves);
        Self { config, algorithm, runs, summary, nd_ratio, nd_ratio_ci }
    }

    /// Mean discovered neighbors per node at the end of each slot.
    pub fn mean_discovered(&self) -> Vec<f64> {
        let curves: Vec<Vec<f64>> = self.runs.iter().map(RunRecord::mean_discovered_curve).collect();
        mean_curve(&curves).0
    }
}

fn build(cfg: &ScenarioConfig, algorithm: AlgorithmId, seed: u64) -> Result<Simulation> {
    let layout = place_nodes(cfg.nodes, cfg.area_side_km, cfg.comm_range_km, seed)?;
    let spec = cfg.beam_spec(seed)?;
    let sensing_cfg = cfg.sensing_config();
    let radar = SectorTable::new(&layout, &spec, sensing_cfg.radar_range());
    let sensing = sense_with_table(&radar, &spec, &sensing_cfg, seed);
    let net = Network::new(layout, spec, cfg.comm_range_km);
    let settings = RunSettings {
        algorithm,
        policy: cfg.policy_config()?,
        warmup: cfg.warmup_slots(),
        slot_cap: cfg.slot_cap,
        extreme_point: cfg.extreme_point(),
    };
    Simulation::new(net, sensing, settings, seed)
}

/// One replication: placement, sensing and the handshake phase, all drawn
/// from `seed`.
pub fn simulate_once(cfg: &ScenarioConfig, algorithm: AlgorithmId, seed: u64) -> Result<RunRecord> {
    build(cfg, algorithm, seed)?.run()
}

pub fn simulate_once_logged<W: std::io::Write>(
    cfg: &ScenarioConfig,
    algorithm: AlgorithmId,
    seed: u64,
    log: &mut EventLog<W>,
) -> Result<RunRecord> {
    build(cfg, algorithm, seed)?.run_logged(log)
}

/// Runs `cfg.replications` independent replications with seeds
/// `base_seed..base_seed + replications`.
pub fn run_experiment(cfg: &ScenarioConfig, algorithm: AlgorithmId) -> Result<ExperimentResult> {
    cfg.validate()?;
    if algorithm.needs_exact_counts() && cfg.resolution == crate::sensing::Resolution::Low {
        return Err(NdError::NeedsExactCounts(algorithm.as_str()));
    }
    let runs = (0..cfg.replications as u64)
        .into_par_iter()
        .map(|r| simulate_once(cfg, algorithm, cfg.base_seed.wrapping_add(r)))
        .collect::<Result<Vec<_>>>()?;
    let result = ExperimentResult::from_runs(cfg.clone(), algorithm, runs);
    if result.summary.capped_runs > 0 {
        log::warn!(
            "{algorithm}: {} of {} runs hit the {}-slot cap",
            result.summary.capped_runs,
            result.summary.replications,
            cfg.slot_cap
        );
    }
    Ok(result)
}

/// One result per algorithm, all on the same seeds.
pub fn compare(cfg: &ScenarioConfig, algorithms: &[AlgorithmId]) -> Result<Vec<ExperimentResult>> {
    algorithms.iter().map(|&a| run_experiment(cfg, a)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Nodes,
    RcRatio,
    Epsilon0,
    LearningRate,
    Beamwidth,
}

impl SweepAxis {
    pub fn key(&self) -> &'static str {
        match self {
            SweepAxis::Nodes => "nodes",
            SweepAxis::RcRatio => "rc_ratio",
            SweepAxis::Epsilon0 => "epsilon0",
            SweepAxis::LearningRate => "learning_rate",
            SweepAxis::Beamwidth => "beamwidth_deg",
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = NdError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "n" | "nodes" => SweepAxis::Nodes,
            "rc_ratio" | "rc" => SweepAxis::RcRatio,
            "epsilon0" | "epsilon" => SweepAxis::Epsilon0,
            "learning_rate" | "alpha" => SweepAxis::LearningRate,
            "beamwidth" | "beamwidth_deg" => SweepAxis::Beamwidth,
            _ => return Err(NdError::Config(format!("unknown sweep axis `{s}`"))),
        })
    }
}

/// One experiment per axis value. Every point reuses the same base seed, so
/// placements and decision streams are shared across the sweep.
pub fn sweep(
    cfg: &ScenarioConfig,
    algorithm: AlgorithmId,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<ExperimentResult>> {
    values
        .iter()
        .map(|&v| {
            let mut point = cfg.clone();
            match axis {
                SweepAxis::Nodes => {
                    if v < 1.0 || v.fract() != 0.0 {
                        return Err(NdError::Config(format!("node count {v} is not a positive integer")));
                    }
                    point.nodes = v as usize;
                }
                SweepAxis::RcRatio => point.rc_ratio = v,
                SweepAxis::Epsilon0 => point.epsilon0 = v,
                SweepAxis::LearningRate => point.learning_rate = v,
                SweepAxis::Beamwidth => point.beamwidth_deg = v,
            }
            run_experiment(&point, algorithm)
        })
        .collect()
}

/// Analytic curve for `algorithm` at the config's node count, beam count,
/// transmit probability and horizon.
pub fn theory(cfg: &ScenarioConfig, algorithm: AlgorithmId) -> Result<AnalyticSeries> {
    curve(algorithm, &cfg.analytic_params())
}
