use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::policies::AlgorithmId;

use super::config::ScenarioConfig;
use super::experiment::{run_experiment, theory};

/// Simulated against analytic mean discovered neighbors, slot by slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub algorithm: AlgorithmId,
    pub nodes: usize,
    pub simulated: Vec<f64>,
    pub analytic: Vec<f64>,
    /// Last slot of the comparison window: the first slot where the simulated
    /// mean reaches 90% of `N - 1`.
    pub window_end: usize,
    pub mean_abs_deviation: f64,
    pub tolerance: f64,
}

impl ValidationReport {
    pub fn from_curves(algorithm: AlgorithmId, nodes: usize, simulated: Vec<f64>, analytic: Vec<f64>) -> Self {
        let full = nodes.saturating_sub(1) as f64;
        let len = simulated.len().min(analytic.len());
        let window_end = simulated.iter().position(|&v| v >= 0.9 * full).map_or(len, |i| i + 1).min(len);
        let mad = if window_end == 0 {
            0.0
        } else {
            (0..window_end).map(|i| (simulated[i] - analytic[i]).abs()).sum::<f64>() / window_end as f64
        };
        Self { algorithm, nodes, simulated, analytic, window_end, mean_abs_deviation: mad, tolerance: 0.15 * full }
    }

    pub fn passes(&self) -> bool {
        self.mean_abs_deviation <= self.tolerance
    }

    /// `(slot, simulated, analytic)` rows over the shorter of the two series.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.simulated.iter().zip(&self.analytic).enumerate().map(|(i, (&s, &a))| (i + 1, s, a))
    }
}

/// Runs the experiment and the analytic model for one algorithm and joins them.
pub fn validate(cfg: &ScenarioConfig, algorithm: AlgorithmId) -> Result<ValidationReport> {
    let series = theory(cfg, algorithm)?;
    let result = run_experiment(cfg, algorithm)?;
    let mut simulated = result.mean_discovered();
    let horizon = series.expected.len();
    if let Some(&last) = simulated.last() {
        simulated.resize(simulated.len().max(horizon), last);
    }
    simulated.truncate(horizon);
    Ok(ValidationReport::from_curves(algorithm, cfg.nodes, simulated, series.expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_stops_at_ninety_percent() {
        let sim = vec![1.0, 5.0, 9.0, 10.0];
        let ana = vec![2.0, 5.0, 8.0, 0.0];
        let r = ValidationReport::from_curves(AlgorithmId::GnRS, 11, sim, ana);
        assert_eq!(r.window_end, 3);
        assert!((r.mean_abs_deviation - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.tolerance - 1.5).abs() < 1e-12);
        assert!(r.passes());
    }
}
