use serde::{Deserialize, Serialize};

/// Per-beam occupancy of `points` independently placed neighbors over
/// `beam_count` equally likely beams.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyModel {
    pub points: usize,
    pub beam_count: usize,
    /// P(u nodes in a beam), u = 0..=points.
    pub pmf: Vec<f64>,
    /// Same distribution conditioned on the beam being non-empty (index 0 is 0).
    pub truncated: Vec<f64>,
    /// Expected number of non-empty beams.
    pub effective_beams: f64,
    /// Mean population of a non-empty beam.
    pub mean_occupancy: f64,
}

impl OccupancyModel {
    pub fn empty_probability(&self) -> f64 {
        self.pmf[0]
    }

    /// Probability that every node of a non-empty beam is discovered when
    /// each one is independently discovered with probability `pair`.
    pub fn completion_probability(&self, pair: f64) -> f64 {
        let mut acc = 0.0;
        let mut pow = 1.0;
        for &w in self.truncated.iter().skip(1) {
            pow *= pair;
            acc += w * pow;
        }
        acc
    }
}

/// Binomial(points, 1/beam_count) occupancy and the quantities derived from it.
pub fn occupancy_pmf(points: usize, beam_count: usize) -> OccupancyModel {
    assert!(beam_count >= 1);
    let p = 1.0 / beam_count as f64;
    let q = 1.0 - p;
    let mut pmf = vec![0.0; points + 1];
    let mut binom = 1.0f64;
    for (u, slot) in pmf.iter_mut().enumerate() {
        if u > 0 {
            binom = binom * (points - u + 1) as f64 / u as f64;
        }
        *slot = binom * p.powi(u as i32) * q.powi((points - u) as i32);
    }
    let nonempty = 1.0 - pmf[0];
    let truncated: Vec<f64> =
        pmf.iter().enumerate().map(|(u, &w)| if u == 0 || nonempty <= 0.0 { 0.0 } else { w / nonempty }).collect();
    let mean_occupancy = truncated.iter().enumerate().map(|(u, &w)| u as f64 * w).sum();
    OccupancyModel { points, beam_count, pmf, truncated, effective_beams: beam_count as f64 * nonempty, mean_occupancy }
}
