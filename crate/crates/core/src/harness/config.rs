use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytics::{occupancy_pmf, AnalyticParams};
use crate::error::{NdError, Result};
use crate::geometry::BeamSpec;
use crate::policies::{AlgorithmId, PolicyConfig};
use crate::qlearning::{extreme_point_for_mean, LearningParams};
use crate::sensing::{Resolution, SensingConfig};

/// Denominator of the mean beam population used for the reward threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaBasis {
    /// `N / B0`
    AllBeams,
    /// `N / B` with `B` the expected number of non-empty beams.
    NonEmptyBeams,
}

/// Every knob of one scenario. Loaded from a flat TOML document; unknown keys
/// are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub nodes: usize,
    pub area_side_km: f64,
    pub beamwidth_deg: f64,
    pub comm_range_km: f64,
    pub rc_ratio: f64,
    pub resolution: Resolution,
    pub sensing_slot_cost: u64,
    pub transmit_probability: f64,
    pub algorithms: Vec<AlgorithmId>,
    pub epsilon0: f64,
    pub epsilon_decay: f64,
    pub learning_rate: f64,
    pub discount: f64,
    pub lambda_basis: LambdaBasis,
    pub random_orientation: bool,
    pub replications: usize,
    pub base_seed: u64,
    /// Defaults to twice the beam count.
    pub warmup: Option<u64>,
    pub slot_cap: u64,
    pub horizon: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let learning = LearningParams::default();
        Self {
            nodes: 50,
            area_side_km: 2.0,
            beamwidth_deg: 14.4,
            comm_range_km: 2.0 * std::f64::consts::SQRT_2,
            rc_ratio: 1.0,
            resolution: Resolution::High,
            sensing_slot_cost: 1,
            transmit_probability: 0.5,
            algorithms: vec![AlgorithmId::GnRS],
            epsilon0: learning.epsilon0,
            epsilon_decay: learning.decay,
            learning_rate: learning.alpha,
            discount: learning.gamma,
            lambda_basis: LambdaBasis::AllBeams,
            random_orientation: false,
            replications: 200,
            base_seed: 1,
            warmup: None,
            slot_cap: 100_000,
            horizon: 2000,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Overrides one key with a textual value, as given on a command line.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let mut table: toml::Table = toml::from_str(&self.to_toml_string())?;
        let parsed = if key == "algorithms" {
            toml::Value::Array(value.split(',').map(|s| toml::Value::String(s.trim().to_string())).collect())
        } else {
            let probe = format!("v = {value}");
            match toml::from_str::<toml::Table>(&probe) {
                Ok(mut t) => t.remove("v").expect("probe key"),
                Err(_) => toml::Value::String(value.to_string()),
            }
        };
        table.insert(key.to_string(), parsed);
        let updated: Self =
            toml::Table::try_into(table).map_err(|e: toml::de::Error| NdError::Config(e.to_string()))?;
        *self = updated;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(NdError::Config("nodes must be at least 1".into()));
        }
        if self.replications == 0 {
            return Err(NdError::Config("replications must be at least 1".into()));
        }
        if self.slot_cap == 0 {
            return Err(NdError::Config("slot_cap must be at least 1".into()));
        }
        self.beam_spec_aligned()?;
        self.sensing_config().validate()?;
        self.policy_config()?;
        let diagonal = self.area_side_km * std::f64::consts::SQRT_2;
        if self.area_side_km.is_nan() || self.area_side_km <= 0.0 || diagonal > self.comm_range_km * (1.0 + 1e-9) {
            return Err(NdError::NotOneHop { diagonal, range: self.comm_range_km });
        }
        if self.resolution == Resolution::Low {
            if let Some(a) = self.algorithms.iter().find(|a| a.needs_exact_counts()) {
                return Err(NdError::NeedsExactCounts(a.as_str()));
            }
        }
        Ok(())
    }

    fn beam_spec_aligned(&self) -> Result<BeamSpec> {
        BeamSpec::from_degrees(self.beamwidth_deg)
    }

    pub fn beam_count(&self) -> usize {
        self.beam_spec_aligned().map(|s| s.beam_count()).unwrap_or(0)
    }

    /// Beam spec for the replication with `seed`.
    pub fn beam_spec(&self, seed: u64) -> Result<BeamSpec> {
        let spec = self.beam_spec_aligned()?;
        Ok(if self.random_orientation { spec.with_random_orientation(self.nodes, seed) } else { spec })
    }

    pub fn sensing_config(&self) -> SensingConfig {
        SensingConfig {
            comm_range: self.comm_range_km,
            rc_ratio: self.rc_ratio,
            resolution: self.resolution,
            sensing_slot_cost: self.sensing_slot_cost,
        }
    }

    pub fn learning(&self) -> LearningParams {
        LearningParams {
            epsilon0: self.epsilon0,
            decay: self.epsilon_decay,
            alpha: self.learning_rate,
            gamma: self.discount,
        }
    }

    pub fn policy_config(&self) -> Result<PolicyConfig> {
        PolicyConfig::new(self.transmit_probability, self.learning())
    }

    pub fn warmup_slots(&self) -> u64 {
        self.warmup.unwrap_or(2 * self.beam_count() as u64)
    }

    pub fn extreme_point(&self) -> u32 {
        let beams = self.beam_count();
        let denom = match self.lambda_basis {
            LambdaBasis::AllBeams => beams as f64,
            LambdaBasis::NonEmptyBeams => occupancy_pmf(self.nodes.saturating_sub(1), beams).effective_beams,
        };
        extreme_point_for_mean(self.nodes as f64 / denom)
    }

    pub fn analytic_params(&self) -> AnalyticParams {
        AnalyticParams {
            nodes: self.nodes,
            beams: self.beam_count(),
            p0: self.transmit_probability,
            horizon: self.horizon,
        }
    }
}
