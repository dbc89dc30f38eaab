//! Radar sensing phase producing each node's per-beam prior.
//!
//! The radar is modelled as a ground-truth oracle limited by range
//! (`rc_ratio × comm_range`) and resolution. It never reports a node that is
//! not there.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{NdError, Result};
use crate::geometry::{BeamIndex, BeamSpec, NodeLayout, SectorTable};
use crate::rng::{stream_rng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    /// Only presence/absence per beam.
    Low,
    /// Exact node count per beam.
    High,
}

/// Radar List: what a node sensed in each of its beams.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadarList {
    Counts(Vec<u32>),
    Presence(Vec<bool>),
}

impl RadarList {
    pub fn beam_count(&self) -> usize {
        match self {
            RadarList::Counts(c) => c.len(),
            RadarList::Presence(p) => p.len(),
        }
    }

    pub fn is_nonempty(&self, beam: BeamIndex) -> bool {
        match self {
            RadarList::Counts(c) => c[beam] > 0,
            RadarList::Presence(p) => p[beam],
        }
    }

    /// Exact sensed count, when the radar resolves it.
    pub fn count(&self, beam: BeamIndex) -> Option<u32> {
        match self {
            RadarList::Counts(c) => Some(c[beam]),
            RadarList::Presence(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RadarList::Counts(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensingConfig {
    pub comm_range: f64,
    pub rc_ratio: f64,
    pub resolution: Resolution,
    pub sensing_slot_cost: u64,
}

impl SensingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rc_ratio > 0.0 && self.rc_ratio <= 1.0) {
            return Err(NdError::Config(format!("rc_ratio must lie in (0, 1], got {}", self.rc_ratio)));
        }
        if self.sensing_slot_cost == 0 {
            return Err(NdError::Config("sensing_slot_cost must be at least 1".into()));
        }
        if self.comm_range.is_nan() || self.comm_range <= 0.0 {
            return Err(NdError::Config("comm_range must be positive".into()));
        }
        Ok(())
    }

    pub fn radar_range(&self) -> f64 {
        self.rc_ratio * self.comm_range
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensingReport {
    pub lists: Vec<RadarList>,
    /// Slots spent in sensing mode, excluded from convergence time.
    pub duration: u64,
    /// Order in which each node scanned its beams.
    pub scan_orders: Vec<Vec<BeamIndex>>,
}

pub fn run_sensing_phase(
    layout: &NodeLayout,
    spec: &BeamSpec,
    cfg: &SensingConfig,
    seed: u64,
) -> Result<SensingReport> {
    cfg.validate()?;
    let table = SectorTable::new(layout, spec, cfg.radar_range());
    Ok(sense_with_table(&table, spec, cfg, seed))
}

pub(crate) fn sense_with_table(table: &SectorTable, spec: &BeamSpec, cfg: &SensingConfig, seed: u64) -> SensingReport {
    let beams = spec.beam_count();
    let mut rng = stream_rng(seed, Stream::Sensing);
    let mut lists = Vec::with_capacity(table.node_count());
    let mut scan_orders = Vec::with_capacity(table.node_count());
    for i in 0..table.node_count() {
        let mut order: Vec<BeamIndex> = (0..beams).collect();
        order.shuffle(&mut rng);
        let mut counts = vec![0u32; beams];
        for &m in &order {
            counts[m] = table.members(i, m).len() as u32;
        }
        lists.push(match cfg.resolution {
            Resolution::High => RadarList::Counts(counts),
            Resolution::Low => RadarList::Presence(counts.iter().map(|&c| c > 0).collect()),
        });
        scan_orders.push(order);
    }
    SensingReport { lists, duration: beams as u64 * cfg.sensing_slot_cost, scan_orders }
}
