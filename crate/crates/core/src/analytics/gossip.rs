//! Gossip composition of direct and indirect discovery probabilities.
//!
//! `I(t) = I(t−1) + (1 − I(t−1))·A(t)` with `I(1) = 0`, where `A(t)` is the
//! chance that at least one of `r` relays, each already knowing the target
//! with probability `P(t−1)`, hands it over this slot:
//! `A(t) = 1 − (1 − pair(t)·P(t−1))^r`.
//!
//! To first order `A ≈ r·pair·P(t−1)`, and with that linearization and a
//! constant pair probability `p = 1 − q` the recursion expands to the
//! quadratic form
//! `−r·p·q^{t−1}·I² + [1 + r(2p·q^{t−1} − p)]·I + r·p(1 − q^{t−1})`.
//! The linear sum exceeds 1 once `r·p·P > 1`, which the stop-mechanism
//! curves reach late in the ramp; the product form stays a probability.

use serde::{Deserialize, Serialize};

/// Direct, indirect and combined pair-discovery probabilities by slot.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GossipSeries {
    pub direct: Vec<f64>,
    pub indirect: Vec<f64>,
    pub combined: Vec<f64>,
    /// Slots whose pair probability fell outside `[0, 1]` and was clamped.
    pub clamps: usize,
}

/// Incremental evaluator, one slot at a time.
#[derive(Debug, Clone)]
pub struct GossipStepper {
    relays: f64,
    miss: f64,
    indirect: f64,
    combined: f64,
    slot: u64,
    pub series: GossipSeries,
}

impl GossipStepper {
    pub fn new(relays: usize) -> Self {
        Self {
            relays: relays as f64,
            miss: 1.0,
            indirect: 0.0,
            combined: 0.0,
            slot: 0,
            series: GossipSeries::default(),
        }
    }

    /// Combined probability after the last step (0 before the first).
    pub fn combined(&self) -> f64 {
        self.combined
    }

    /// Advances one slot given this slot's per-pair direct probability.
    pub fn step(&mut self, pair: f64) -> f64 {
        self.slot += 1;
        let pair = clamp_pair(pair, self.slot, &mut self.series.clamps);
        self.miss *= 1.0 - pair;
        let direct = 1.0 - self.miss;
        if self.slot > 1 {
            self.indirect += (1.0 - self.indirect) * relay_probability(self.relays, pair, self.combined);
        }
        self.combined = direct + (1.0 - direct) * self.indirect;
        self.series.direct.push(direct);
        self.series.indirect.push(self.indirect);
        self.series.combined.push(self.combined);
        self.combined
    }
}

fn clamp_pair(pair: f64, slot: u64, clamps: &mut usize) -> f64 {
    if !(0.0..=1.0).contains(&pair) {
        *clamps += 1;
        log::warn!("pair probability {pair:.4} clamped at slot {slot}");
    }
    pair.clamp(0.0, 1.0)
}

/// Probability that at least one of `relays` relays passes the target on.
pub fn relay_probability(relays: f64, pair: f64, known_before: f64) -> f64 {
    1.0 - (1.0 - pair * known_before).powf(relays)
}

/// Indirect and combined series from a direct series `direct` (cumulative,
/// `D(t)`) and the per-slot pair probability `pair` used for relays.
pub fn gossip_recursion(direct: &[f64], pair: &[f64], relays: usize) -> GossipSeries {
    assert_eq!(direct.len(), pair.len());
    let r = relays as f64;
    let mut out = GossipSeries { direct: direct.to_vec(), ..Default::default() };
    let mut indirect = 0.0f64;
    let mut prev = 0.0f64;
    for (t, (&d, &p)) in direct.iter().zip(pair).enumerate() {
        let p = clamp_pair(p, t as u64 + 1, &mut out.clamps);
        if t > 0 {
            indirect += (1.0 - indirect) * relay_probability(r, p, prev);
        }
        prev = d + (1.0 - d) * indirect;
        out.indirect.push(indirect);
        out.combined.push(prev);
    }
    out
}

/// Cumulative direct probability `D(t) = 1 − Π(1 − pair(g))`.
pub fn direct_series(pair: &[f64]) -> Vec<f64> {
    let mut miss = 1.0;
    pair.iter()
        .map(|&p| {
            miss *= 1.0 - p;
            1.0 - miss
        })
        .collect()
}

/// Expected discovered neighbors per node, `P(t)·(N − 1)`.
pub fn expected_discovered(combined: &[f64], nodes: usize) -> Vec<f64> {
    let others = nodes.saturating_sub(1) as f64;
    combined.iter().map(|&p| p * others).collect()
}
