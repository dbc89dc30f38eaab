//! Expected-discovery curves for the four gossip algorithms.
//!
//! All four use the same homogenized picture: `B` expected non-empty beams,
//! `M` mean population of a non-empty beam, and a per-slot probability that a
//! given pair completes a handshake. What differs is how that probability
//! evolves:
//!
//! * reply / non-stop: constant;
//! * non-reply / stop: per slot, with the number of in-beam nodes that
//!   already know the receiver tracked from the running pair-discovery
//!   probability, and the number of completed beams from the direct one;
//! * non-reply / non-stop: constant, averaged over discovery intervals and
//!   beam populations;
//! * reply / stop: per slot first, then averaged over the discovery ramp.

use serde::{Deserialize, Serialize};

use crate::error::{NdError, Result};
use crate::policies::AlgorithmId;

use super::gossip::{expected_discovered, GossipSeries, GossipStepper};
use super::occupancy::{occupancy_pmf, OccupancyModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticParams {
    pub nodes: usize,
    pub beams: usize,
    pub p0: f64,
    pub horizon: usize,
}

impl AnalyticParams {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(NdError::Config("analytic model needs at least two nodes".into()));
        }
        if self.beams < 1 {
            return Err(NdError::Config("analytic model needs at least one beam".into()));
        }
        if !(self.p0 > 0.0 && self.p0 < 1.0) {
            return Err(NdError::TransmitProbability(self.p0));
        }
        Ok(())
    }

    /// Occupancy of one node's beams by its `nodes − 1` neighbors.
    pub fn occupancy(&self) -> OccupancyModel {
        occupancy_pmf(self.nodes - 1, self.beams)
    }

    fn relays(&self) -> usize {
        self.nodes - 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSeries {
    pub algorithm: AlgorithmId,
    pub params: AnalyticParams,
    /// Per-slot pair handshake probability that drove the recursion.
    pub pair: Vec<f64>,
    pub direct: Vec<f64>,
    pub indirect: Vec<f64>,
    pub combined: Vec<f64>,
    pub expected: Vec<f64>,
    pub clamps: usize,
}

impl AnalyticSeries {
    fn from_gossip(algorithm: AlgorithmId, params: AnalyticParams, pair: Vec<f64>, g: GossipSeries) -> Self {
        let expected = expected_discovered(&g.combined, params.nodes);
        Self {
            algorithm,
            params,
            pair,
            direct: g.direct,
            indirect: g.indirect,
            combined: g.combined,
            expected,
            clamps: g.clamps,
        }
    }

    pub fn len(&self) -> usize {
        self.expected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expected.is_empty()
    }
}

/// Probability that a transmitter and a receiver point at each other when
/// each picks uniformly among `beams_i` and `beams_j` beams.
pub fn align_probability(p0: f64, beams_i: f64, beams_j: f64) -> f64 {
    p0 * (1.0 - p0) / (beams_i * beams_j)
}

/// Homogenized alignment over both directions, `2·P0(1−P0)/(B − B_done)²`.
pub fn mean_align_probability(p0: f64, beams: f64, completed: f64) -> f64 {
    let eff = beams - completed;
    2.0 * p0 * (1.0 - p0) / (eff * eff)
}

/// Chance that an in-beam node still has undiscovered neighbors in the beam
/// pointing at the receiver: `(B − B_done)/B`.
pub fn unfinished_probability(beams: f64, completed: f64) -> f64 {
    ((beams - completed) / beams).clamp(0.0, 1.0)
}

/// Expected interferers at the transmitter during feedback,
/// `(M − 1 − U)·P_emp`.
pub fn feedback_interferers(m: f64, known_by: f64, unfinished: f64) -> f64 {
    (m - 1.0 - known_by).max(0.0) * unfinished
}

/// Per-slot pair probability with reply and non-empty beam filtering:
/// `2(1−P0)P0/B² · (1 − (1−P0)/B)^{M−1} · (1 − P0/B)^{M−1}`.
pub fn reply_pair_probability(p0: f64, beams: f64, m: f64) -> f64 {
    2.0 * (1.0 - p0) * p0 / (beams * beams)
        * (1.0 - (1.0 - p0) / beams).powf(m - 1.0)
        * (1.0 - p0 / beams).powf(m - 1.0)
}

/// Per-slot pair probability with non-reply, one term per direction; `known_i`
/// in-beam nodes of `i` already know `i` and stay silent.
pub fn non_reply_pair_probability(p0: f64, beams: f64, m_i: f64, m_j: f64, known_i: f64, known_j: f64) -> f64 {
    let c = (1.0 - p0) * p0 / (beams * beams);
    let tx = |m: f64, u: f64| (1.0 - (1.0 - p0) / beams).powf((m - 1.0 - u).max(0.0));
    let rx = |m: f64| (1.0 - p0 / beams).powf(m - 1.0);
    c * tx(m_i, known_i) * rx(m_j) + c * tx(m_j, known_j) * rx(m_i)
}

/// Per-slot pair probability under the stop rule with `completed` beams
/// finished on average.
pub fn stop_pair_probability(p0: f64, beams: f64, completed: f64, a: f64, b: f64) -> f64 {
    let eff = (beams - completed).max(1.0);
    let align = mean_align_probability(p0, eff, 0.0);
    align * (1.0 - (1.0 - p0) / eff).powf(a) * (1.0 - p0 / eff).powf(b)
}

fn constant_curve(algorithm: AlgorithmId, params: &AnalyticParams, pair: f64) -> AnalyticSeries {
    let mut g = GossipStepper::new(params.relays());
    for _ in 0..params.horizon {
        g.step(pair);
    }
    AnalyticSeries::from_gossip(algorithm, *params, vec![pair; params.horizon], g.series)
}

/// Runs the tracked per-slot recursion of a stop-mechanism algorithm.
fn tracked_curve(params: &AnalyticParams, non_reply: bool) -> (Vec<f64>, GossipSeries) {
    let occ = params.occupancy();
    let beams = occ.effective_beams;
    let m = occ.mean_occupancy;
    let mut g = GossipStepper::new(params.relays());
    let mut pair = Vec::with_capacity(params.horizon);
    for _ in 0..params.horizon {
        let known = g.combined();
        let handshaken = g.series.direct.last().copied().unwrap_or(0.0);
        let completed = beams * occ.completion_probability(handshaken);
        let p = if beams - completed <= 0.0 {
            1.0
        } else {
            let unfinished = unfinished_probability(beams, completed);
            let b = (m - 1.0) * unfinished;
            let a = if non_reply { feedback_interferers(m, (m - 1.0) * known, unfinished) } else { b };
            stop_pair_probability(params.p0, beams, completed, a, b)
        };
        pair.push(p);
        g.step(p);
    }
    (pair, g.series)
}

/// Non-reply + stop.
pub fn gnrs_curve(params: &AnalyticParams) -> Result<AnalyticSeries> {
    params.validate()?;
    let (pair, g) = tracked_curve(params, true);
    Ok(AnalyticSeries::from_gossip(AlgorithmId::GnRS, *params, pair, g))
}

/// Reply + non-stop.
pub fn grns_curve(params: &AnalyticParams) -> Result<AnalyticSeries> {
    params.validate()?;
    let occ = params.occupancy();
    let p = reply_pair_probability(params.p0, occ.effective_beams, occ.mean_occupancy);
    Ok(constant_curve(AlgorithmId::GRnS, params, p))
}

/// Time-and-space averaged pair probability for non-reply + non-stop.
///
/// Within a beam of `m` nodes the `u`-th discovery interval has constant
/// probability `p_u`; with geometric interval lengths `1/p_u` the time
/// average is `m / Σ 1/p_u`. Beam sizes are then averaged over the
/// non-empty occupancy distribution.
pub fn gnrns_pair_probability(params: &AnalyticParams) -> f64 {
    let occ = params.occupancy();
    let beams = occ.effective_beams;
    let mean = occ.mean_occupancy;
    let p0 = params.p0;
    let one_way = |m: usize| -> f64 {
        let inv: f64 = (0..m)
            .map(|u| 1.0 / (0.5 * non_reply_pair_probability(p0, beams, m as f64, mean, u as f64, u as f64)))
            .sum();
        m as f64 / inv
    };
    let sized: f64 = occ.truncated.iter().enumerate().skip(1).map(|(m, &w)| w * one_way(m)).sum();
    2.0 * sized
}

/// Non-reply + non-stop.
pub fn gnrns_curve(params: &AnalyticParams) -> Result<AnalyticSeries> {
    params.validate()?;
    let p = gnrns_pair_probability(params);
    Ok(constant_curve(AlgorithmId::GnRnS, params, p))
}

/// Reply + stop.
pub fn grs_curve(params: &AnalyticParams) -> Result<AnalyticSeries> {
    params.validate()?;
    let (pair, tracked) = tracked_curve(params, false);
    let others = (params.nodes - 1) as f64;
    let ramp_end = tracked.combined.iter().position(|&p| (1.0 - p) * others < 0.5).map_or(pair.len(), |t| t + 1);
    let mean = if ramp_end == 0 { 0.0 } else { pair[..ramp_end].iter().sum::<f64>() / ramp_end as f64 };
    let mut series = constant_curve(AlgorithmId::GRS, params, mean);
    series.clamps += tracked.clamps;
    Ok(series)
}

/// Curve for `algorithm`; learning and non-gossip variants have no model.
pub fn curve(algorithm: AlgorithmId, params: &AnalyticParams) -> Result<AnalyticSeries> {
    match algorithm {
        AlgorithmId::GnRS => gnrs_curve(params),
        AlgorithmId::GRnS => grns_curve(params),
        AlgorithmId::GnRnS => gnrns_curve(params),
        AlgorithmId::GRS => grs_curve(params),
        other => Err(NdError::NoAnalyticModel(other.to_string())),
    }
}

/// Like [`curve`] but fails if any probability had to be clamped.
pub fn curve_strict(algorithm: AlgorithmId, params: &AnalyticParams) -> Result<AnalyticSeries> {
    let s = curve(algorithm, params)?;
    if s.clamps > 0 {
        return Err(NdError::Clamp(format!("{} clamps in {algorithm} curve", s.clamps)));
    }
    Ok(s)
}
