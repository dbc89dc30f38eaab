//! Tabular Q-learning over (transceiver state, beam) pairs.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::BeamIndex;
use crate::policies::Transceiver;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearningParams {
    pub epsilon0: f64,
    pub decay: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for LearningParams {
    fn default() -> Self {
        Self { epsilon0: 0.5, decay: 0.995, alpha: 0.5, gamma: 0.3 }
    }
}

impl LearningParams {
    pub fn validate(&self) -> crate::Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.epsilon0) || !unit(self.alpha) || !unit(self.gamma) {
            return Err(crate::NdError::Config("epsilon0, alpha and gamma must lie in [0, 1]".into()));
        }
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return Err(crate::NdError::Config("epsilon decay must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn schedule(&self) -> ExplorationSchedule {
        ExplorationSchedule { epsilon0: self.epsilon0, decay: self.decay }
    }
}

/// ε(t) = ε0 · d^t
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplorationSchedule {
    pub epsilon0: f64,
    pub decay: f64,
}

impl ExplorationSchedule {
    pub fn epsilon(&self, t: u64) -> f64 {
        self.epsilon0 * self.decay.powf(t as f64)
    }
}

/// 2 × B action values, row 0 = receive, row 1 = transmit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QTable {
    values: Vec<f64>,
    beams: usize,
    pub alpha: f64,
    pub gamma: f64,
}

fn row(s: Transceiver) -> usize {
    match s {
        Transceiver::Receive => 0,
        Transceiver::Transmit => 1,
    }
}

impl QTable {
    pub fn new(beams: usize, alpha: f64, gamma: f64) -> Self {
        Self { values: vec![0.0; 2 * beams], beams, alpha, gamma }
    }

    pub fn beam_count(&self) -> usize {
        self.beams
    }

    pub fn get(&self, s: Transceiver, a: BeamIndex) -> f64 {
        self.values[row(s) * self.beams + a]
    }

    pub fn set(&mut self, s: Transceiver, a: BeamIndex, v: f64) {
        self.values[row(s) * self.beams + a] = v;
    }

    pub fn row(&self, s: Transceiver) -> &[f64] {
        let r = row(s) * self.beams;
        &self.values[r..r + self.beams]
    }

    pub fn max(&self, s: Transceiver) -> f64 {
        self.row(s).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Q(s,a) ← Q(s,a) + α·[r + γ·max_a' Q(s',a') − Q(s,a)]
    pub fn update(&mut self, s: Transceiver, a: BeamIndex, reward: f64, s_next: Transceiver) {
        let old = self.get(s, a);
        let target = reward + self.gamma * self.max(s_next);
        self.set(s, a, old + self.alpha * (target - old));
    }

    /// ε-greedy choice. A fresh all-zero table always picks uniformly.
    pub fn select_action<R: Rng + ?Sized>(&self, s: Transceiver, epsilon: f64, rng: &mut R) -> BeamIndex {
        if self.is_zero() || rng.random::<f64>() < epsilon {
            return rng.random_range(0..self.beams);
        }
        let best = self.max(s);
        let ties: Vec<BeamIndex> = self.row(s).iter().enumerate().filter(|(_, &v)| v == best).map(|(a, _)| a).collect();
        if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.random_range(0..ties.len())]
        }
    }
}

/// Mode of Poisson(`nodes / beams`), with ties at integer λ resolved upward.
pub fn extreme_point(nodes: usize, beams: usize) -> u32 {
    assert!(nodes >= 1 && beams >= 1);
    extreme_point_for_mean(nodes as f64 / beams as f64)
}

pub fn extreme_point_for_mean(lambda: f64) -> u32 {
    lambda.max(0.0).floor() as u32
}

/// Reward for having used a beam with sensed count `rl` and discovered count `cl`.
pub fn reward(rl: u32, cl: u32, ep: u32) -> i32 {
    if rl > cl {
        2
    } else if cl <= ep {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reward_branches() {
        assert_eq!(reward(3, 1, 0), 2);
        assert_eq!(reward(1, 2, 3), 1);
        assert_eq!(reward(1, 4, 3), -1);
    }

    #[test]
    fn update_substitution() {
        let mut q = QTable::new(4, 0.5, 0.5);
        q.update(Transceiver::Transmit, 2, 2.0, Transceiver::Receive);
        assert_eq!(q.get(Transceiver::Transmit, 2), 1.0);
        assert_eq!(q.row(Transceiver::Receive), &[0.0; 4]);

        let mut frozen = QTable::new(4, 0.0, 0.9);
        frozen.set(Transceiver::Receive, 1, 3.0);
        let before = frozen.clone();
        frozen.update(Transceiver::Receive, 1, 2.0, Transceiver::Transmit);
        assert_eq!(frozen, before);
    }

    #[test]
    fn bellman_fixed_point_is_stable() {
        let mut q = QTable::new(3, 0.7, 0.5);
        q.set(Transceiver::Transmit, 0, 2.0);
        q.set(Transceiver::Receive, 1, 4.0);
        // r + γ·max Q(receive) = 0 + 0.5·4 = 2 = Q(transmit, 0)
        let before = q.clone();
        q.update(Transceiver::Transmit, 0, 0.0, Transceiver::Receive);
        assert_eq!(q, before);
    }

    #[test]
    fn greedy_picks_argmax() {
        let mut q = QTable::new(5, 0.5, 0.5);
        q.set(Transceiver::Transmit, 3, 1.5);
        q.set(Transceiver::Transmit, 1, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            assert_eq!(q.select_action(Transceiver::Transmit, 0.0, &mut rng), 3);
        }
    }

    #[test]
    fn extreme_point_values() {
        assert_eq!(extreme_point(50, 10), 5);
        assert_eq!(extreme_point(3, 10), 0);
        assert_eq!(extreme_point_for_mean(3.7), 3);
    }

    #[test]
    fn schedule_decays() {
        let s = ExplorationSchedule { epsilon0: 0.5, decay: 0.9 };
        assert_eq!(s.epsilon(0), 0.5);
        assert!(s.epsilon(10) < s.epsilon(9));
        assert!((s.epsilon(2) - 0.405).abs() < 1e-12);
    }
}
