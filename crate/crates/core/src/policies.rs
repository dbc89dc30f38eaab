//! Per-algorithm decision policies and the algorithm registry.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::NodeState;
use crate::error::{NdError, Result};
use crate::geometry::BeamIndex;
use crate::qlearning::{ExplorationSchedule, LearningParams};
use crate::sensing::RadarList;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Transceiver {
    Transmit,
    Receive,
}

/// What one node does in one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlotDecision {
    Idle,
    Active { state: Transceiver, beam: BeamIndex },
}

impl SlotDecision {
    pub fn transmit(beam: BeamIndex) -> Self {
        SlotDecision::Active { state: Transceiver::Transmit, beam }
    }

    pub fn receive(beam: BeamIndex) -> Self {
        SlotDecision::Active { state: Transceiver::Receive, beam }
    }

    pub fn beam(&self) -> Option<BeamIndex> {
        match self {
            SlotDecision::Idle => None,
            SlotDecision::Active { beam, .. } => Some(*beam),
        }
    }

    pub fn transmitting_on(&self) -> Option<BeamIndex> {
        match self {
            SlotDecision::Active { state: Transceiver::Transmit, beam } => Some(*beam),
            _ => None,
        }
    }

    pub fn receiving_on(&self) -> Option<BeamIndex> {
        match self {
            SlotDecision::Active { state: Transceiver::Receive, beam } => Some(*beam),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BeamPolicy {
    /// Every beam, the prior is ignored.
    AllBeams,
    /// Beams the radar saw something in.
    NonEmpty,
    /// Beams whose sensed count still exceeds the discovered count.
    StopFiltered,
    /// Every beam, chosen by the node's Q-table.
    QLearning,
}

/// The (gossip, non-reply, beam policy) triple behind an algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mechanisms {
    pub gossip: bool,
    pub non_reply: bool,
    pub beam_policy: BeamPolicy,
}

#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmId {
    CRA,
    GCRA,
    NRS,
    RnS,
    NRnS,
    RS,
    GnRS,
    GRnS,
    GnRnS,
    GRS,
    QND,
    QnR,
    GQND,
    GQnRnS,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 14] = [
        AlgorithmId::CRA,
        AlgorithmId::GCRA,
        AlgorithmId::NRS,
        AlgorithmId::RnS,
        AlgorithmId::NRnS,
        AlgorithmId::RS,
        AlgorithmId::GnRS,
        AlgorithmId::GRnS,
        AlgorithmId::GnRnS,
        AlgorithmId::GRS,
        AlgorithmId::QND,
        AlgorithmId::QnR,
        AlgorithmId::GQND,
        AlgorithmId::GQnRnS,
    ];

    /// Stable identifier used in config files and CSV columns.
    pub fn as_str(&self) -> &'static str {
        match self {
            AlgorithmId::CRA => "CRA",
            AlgorithmId::GCRA => "G-CRA",
            AlgorithmId::NRS => "nRS",
            AlgorithmId::RnS => "RnS",
            AlgorithmId::NRnS => "nRnS",
            AlgorithmId::RS => "RS",
            AlgorithmId::GnRS => "G-nRS",
            AlgorithmId::GRnS => "G-RnS",
            AlgorithmId::GnRnS => "G-nRnS",
            AlgorithmId::GRS => "G-RS",
            AlgorithmId::QND => "Q-ND",
            AlgorithmId::QnR => "Q-nR",
            AlgorithmId::GQND => "GQ-ND",
            AlgorithmId::GQnRnS => "GQ-nRnS",
        }
    }

    pub fn mechanisms(&self) -> Mechanisms {
        use BeamPolicy::*;
        let (gossip, non_reply, beam_policy) = match self {
            AlgorithmId::CRA => (false, false, AllBeams),
            AlgorithmId::GCRA => (true, false, AllBeams),
            AlgorithmId::NRS => (false, true, StopFiltered),
            AlgorithmId::RnS => (false, false, NonEmpty),
            AlgorithmId::NRnS => (false, true, NonEmpty),
            AlgorithmId::RS => (false, false, StopFiltered),
            AlgorithmId::GnRS => (true, true, StopFiltered),
            AlgorithmId::GRnS => (true, false, NonEmpty),
            AlgorithmId::GnRnS => (true, true, NonEmpty),
            AlgorithmId::GRS => (true, false, StopFiltered),
            AlgorithmId::QND => (false, false, QLearning),
            AlgorithmId::QnR => (false, true, QLearning),
            AlgorithmId::GQND => (true, false, QLearning),
            AlgorithmId::GQnRnS => (true, true, QLearning),
        };
        Mechanisms { gossip, non_reply, beam_policy }
    }

    pub fn is_learning(&self) -> bool {
        self.mechanisms().beam_policy == BeamPolicy::QLearning
    }

    /// Whether the policy needs exact per-beam counts from the radar.
    pub fn needs_exact_counts(&self) -> bool {
        matches!(self.mechanisms().beam_policy, BeamPolicy::StopFiltered | BeamPolicy::QLearning)
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmId {
    type Err = NdError;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmId::ALL
            .iter()
            .copied()
            .find(|a| a.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| NdError::UnknownAlgorithm(s.to_string()))
    }
}

impl Serialize for AlgorithmId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for AlgorithmId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub transmit_probability: f64,
    pub learning: LearningParams,
}

impl PolicyConfig {
    pub fn new(transmit_probability: f64, learning: LearningParams) -> Result<Self> {
        let cfg = Self { transmit_probability, learning };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let p0 = self.transmit_probability;
        if !(p0 > 0.0 && p0 < 1.0) {
            log::warn!("transmit probability {p0} makes discovery impossible");
            return Err(NdError::TransmitProbability(p0));
        }
        self.learning.validate()
    }

    pub fn schedule(&self) -> ExplorationSchedule {
        self.learning.schedule()
    }
}

pub fn choose_transceiver_state<R: Rng + ?Sized>(p0: f64, rng: &mut R) -> Transceiver {
    debug_assert!(p0 > 0.0 && p0 < 1.0);
    if rng.random::<f64>() < p0 {
        Transceiver::Transmit
    } else {
        Transceiver::Receive
    }
}

/// Beams a node may pick from under `policy`, given its current CL.
pub fn eligible_beams(rl: &RadarList, cl: &[u32], policy: BeamPolicy) -> Result<Vec<BeamIndex>> {
    let beams = rl.beam_count();
    Ok(match policy {
        BeamPolicy::AllBeams | BeamPolicy::QLearning => (0..beams).collect(),
        BeamPolicy::NonEmpty => (0..beams).filter(|&m| rl.is_nonempty(m)).collect(),
        BeamPolicy::StopFiltered => match rl {
            RadarList::Counts(counts) => (0..beams).filter(|&m| counts[m] > cl[m]).collect(),
            RadarList::Presence(_) => return Err(NdError::NeedsExactCounts("the stop mechanism")),
        },
    })
}

/// Uniform choice over `eligible`; `None` means the node idles.
pub fn choose_beam<R: Rng + ?Sized>(eligible: &[BeamIndex], rng: &mut R) -> Option<BeamIndex> {
    match eligible.len() {
        0 => None,
        1 => Some(eligible[0]),
        n => Some(eligible[rng.random_range(0..n)]),
    }
}

/// Decision of `state`'s node for slot `slot` (1-based).
pub fn make_decision<R: Rng + ?Sized>(
    algorithm: AlgorithmId,
    state: &mut NodeState,
    slot: u64,
    cfg: &PolicyConfig,
    rng: &mut R,
) -> Result<SlotDecision> {
    let policy = algorithm.mechanisms().beam_policy;
    if policy == BeamPolicy::QLearning {
        if !state.rl.is_exact() {
            return Err(NdError::NeedsExactCounts("Q-learning reward"));
        }
        let s = state.pending_state.take().unwrap_or_else(|| choose_transceiver_state(cfg.transmit_probability, rng));
        let epsilon = cfg.schedule().epsilon(slot.saturating_sub(1));
        let beam = state.q.select_action(s, epsilon, rng);
        return Ok(SlotDecision::Active { state: s, beam });
    }
    let eligible = eligible_beams(&state.rl, &state.cl, policy)?;
    if eligible.is_empty() {
        // A node that has finished every beam stops initiating but keeps
        // listening, so neighbors that learned of it second-hand can still
        // complete the handshake with it.
        let listening = match policy {
            BeamPolicy::StopFiltered => eligible_beams(&state.rl, &state.cl, BeamPolicy::NonEmpty)?,
            _ => Vec::new(),
        };
        return Ok(match choose_beam(&listening, rng) {
            Some(beam) => SlotDecision::Active { state: Transceiver::Receive, beam },
            None => SlotDecision::Idle,
        });
    }
    let s = choose_transceiver_state(cfg.transmit_probability, rng);
    let beam = choose_beam(&eligible, rng).expect("non-empty eligible set");
    Ok(SlotDecision::Active { state: s, beam })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::qlearning::QTable;

    #[test]
    fn ids_round_trip_and_are_unique() {
        let mut triples = std::collections::HashSet::new();
        for a in AlgorithmId::ALL {
            assert_eq!(a.as_str().parse::<AlgorithmId>().unwrap(), a);
            assert!(triples.insert(a.mechanisms()), "{a} shares its mechanisms");
        }
        assert!("G-XYZ".parse::<AlgorithmId>().is_err());
    }

    #[test]
    fn transmit_fraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let tx = (0..n).filter(|_| choose_transceiver_state(0.5, &mut rng) == Transceiver::Transmit).count();
        assert!((tx as f64 / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn rejects_degenerate_p0() {
        assert!(PolicyConfig::new(0.0, LearningParams::default()).is_err());
        assert!(PolicyConfig::new(1.0, LearningParams::default()).is_err());
        assert!(PolicyConfig::new(0.3, LearningParams::default()).is_ok());
    }

    #[test]
    fn eligibility_rules() {
        let rl = RadarList::Counts(vec![2, 0, 1]);
        assert_eq!(eligible_beams(&rl, &[2, 0, 0], BeamPolicy::StopFiltered).unwrap(), vec![2]);
        assert_eq!(eligible_beams(&rl, &[2, 0, 1], BeamPolicy::StopFiltered).unwrap(), Vec::<usize>::new());
        assert_eq!(eligible_beams(&rl, &[2, 0, 1], BeamPolicy::NonEmpty).unwrap(), vec![0, 2]);
        assert_eq!(eligible_beams(&rl, &[2, 0, 1], BeamPolicy::AllBeams).unwrap(), vec![0, 1, 2]);

        let flags = RadarList::Presence(vec![true, false]);
        assert_eq!(eligible_beams(&flags, &[0, 0], BeamPolicy::NonEmpty).unwrap(), vec![0]);
        assert!(eligible_beams(&flags, &[0, 0], BeamPolicy::StopFiltered).is_err());
    }

    fn stop_node(counts: Vec<u32>, cl: Vec<u32>) -> NodeState {
        let beams = counts.len();
        let mut st = NodeState::new(0, 4, RadarList::Counts(counts), QTable::new(beams, 0.5, 0.3));
        st.cl = cl;
        st
    }

    #[test]
    fn stop_decisions() {
        let cfg = PolicyConfig::new(0.5, LearningParams::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut one_left = stop_node(vec![1, 2, 0], vec![1, 1, 0]);
        let mut finished = stop_node(vec![1, 0, 2], vec![1, 0, 2]);
        let mut alone = stop_node(vec![0, 0, 0], vec![0, 0, 0]);
        for t in 1..200 {
            let d = make_decision(AlgorithmId::GnRS, &mut one_left, t, &cfg, &mut rng).unwrap();
            assert_eq!(d.beam(), Some(1));
            match make_decision(AlgorithmId::GRS, &mut finished, t, &cfg, &mut rng).unwrap() {
                SlotDecision::Active { state: Transceiver::Receive, beam } => assert!(beam == 0 || beam == 2),
                other => panic!("finished node decided {other:?}"),
            }
            assert_eq!(make_decision(AlgorithmId::GnRS, &mut alone, t, &cfg, &mut rng).unwrap(), SlotDecision::Idle);
        }
    }

    #[test]
    fn beam_choice() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(choose_beam(&[7], &mut rng), Some(7));
        assert_eq!(choose_beam(&[], &mut rng), None);
        let all: Vec<usize> = (0..10).collect();
        let mut hist = [0usize; 10];
        let n = 100_000;
        for _ in 0..n {
            hist[choose_beam(&all, &mut rng).unwrap()] += 1;
        }
        for h in hist {
            assert!((h as f64 / n as f64 - 0.1).abs() < 0.01);
        }
    }
}
