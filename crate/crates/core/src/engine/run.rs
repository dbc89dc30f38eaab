use std::io::Write;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NdError, Result};
use crate::policies::{choose_transceiver_state, make_decision, AlgorithmId, PolicyConfig, SlotDecision};
use crate::qlearning::{reward, QTable};
use crate::rng::{stream_rng, Stream};
use crate::sensing::SensingReport;

use super::convergence::{check_convergence, detection_slot_after, ConvergenceStatus};
use super::events::EventLog;
use super::slot::{run_slot, Network, SlotOutcome};
use super::state::NodeState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub algorithm: AlgorithmId,
    pub policy: PolicyConfig,
    pub warmup: u64,
    pub slot_cap: u64,
    /// Reward threshold for learning policies.
    pub extreme_point: u32,
}

/// Everything one replication produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: AlgorithmId,
    pub seed: u64,
    pub nodes: usize,
    pub sensing_slots: u64,
    /// New ordered-pair discoveries in slot `t` at index `t - 1`.
    pub discoveries_per_slot: Vec<u32>,
    pub gossip_discoveries: u64,
    /// Slot at which each node's list became complete.
    pub completion_slots: Vec<Option<u64>>,
    pub last_discovery_slot: u64,
    pub detection_slot: u64,
    pub status: ConvergenceStatus,
    pub discovered_pairs: u64,
    pub reachable_pairs: u64,
    pub complete: bool,
}

impl RunRecord {
    /// Reported convergence time.
    pub fn convergence_slots(&self) -> u64 {
        self.detection_slot
    }

    pub fn capped(&self) -> bool {
        self.status == ConvergenceStatus::Capped
    }

    /// Fraction of discoverable neighbors known at the end of slot `t`,
    /// averaged over nodes.
    pub fn nd_ratio_curve(&self) -> Vec<f64> {
        let denom = self.reachable_pairs.max(1) as f64;
        let mut acc = 0u64;
        self.discoveries_per_slot
            .iter()
            .map(|&d| {
                acc += d as u64;
                acc as f64 / denom
            })
            .collect()
    }

    /// Mean number of neighbors known per node at the end of each slot.
    pub fn mean_discovered_curve(&self) -> Vec<f64> {
        let n = self.nodes.max(1) as f64;
        let mut acc = 0u64;
        self.discoveries_per_slot
            .iter()
            .map(|&d| {
                acc += d as u64;
                acc as f64 / n
            })
            .collect()
    }
}

/// One replication of the handshake process, after sensing.
pub struct Simulation {
    net: Network,
    states: Vec<NodeState>,
    settings: RunSettings,
    rng: ChaCha8Rng,
    seed: u64,
    sensing_slots: u64,
    slot: u64,
}

impl Simulation {
    pub fn new(net: Network, sensing: SensingReport, settings: RunSettings, seed: u64) -> Result<Self> {
        settings.policy.validate()?;
        let n = net.node_count();
        if sensing.lists.len() != n {
            return Err(NdError::Config("radar lists do not match the layout".into()));
        }
        if settings.algorithm.needs_exact_counts() && sensing.lists.iter().any(|rl| !rl.is_exact()) {
            return Err(NdError::NeedsExactCounts(settings.algorithm.as_str()));
        }
        let beams = net.beam_count();
        let learning = settings.policy.learning;
        let states = sensing
            .lists
            .into_iter()
            .enumerate()
            .map(|(id, rl)| NodeState::new(id, n, rl, QTable::new(beams, learning.alpha, learning.gamma)))
            .collect();
        Ok(Self {
            net,
            states,
            settings,
            rng: stream_rng(seed, Stream::Decisions),
            seed,
            sensing_slots: sensing.duration,
            slot: 0,
        })
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    pub fn states(&self) -> &[NodeState] {
        &self.states
    }

    pub fn slot(&self) -> u64 {
        self.slot
    }

    /// Draws every node's decision for the next slot.
    pub fn decide(&mut self) -> Result<Vec<SlotDecision>> {
        let slot = self.slot + 1;
        let alg = self.settings.algorithm;
        let cfg = self.settings.policy;
        self.states.iter_mut().map(|st| make_decision(alg, st, slot, &cfg, &mut self.rng)).collect()
    }

    /// Resolves the next slot with the given decisions.
    pub fn apply(&mut self, decisions: &[SlotDecision]) -> Result<SlotOutcome> {
        self.slot += 1;
        let mech = self.settings.algorithm.mechanisms();
        let outcome = run_slot(self.slot, &mut self.states, decisions, &self.net, mech)?;
        if self.settings.algorithm.is_learning() {
            let p0 = self.settings.policy.transmit_probability;
            let ep = self.settings.extreme_point;
            for (st, d) in self.states.iter_mut().zip(decisions) {
                let SlotDecision::Active { state, beam } = *d else { continue };
                let rl = st.rl.count(beam).expect("learning policies need exact counts");
                let r = reward(rl, st.cl[beam], ep);
                let next = choose_transceiver_state(p0, &mut self.rng);
                st.pending_state = Some(next);
                st.q.update(state, beam, r as f64, next);
            }
        }
        Ok(outcome)
    }

    pub fn step(&mut self) -> Result<SlotOutcome> {
        let decisions = self.decide()?;
        self.apply(&decisions)
    }

    pub fn run(self) -> Result<RunRecord> {
        self.run_inner(None::<&mut EventLog<std::io::Sink>>)
    }

    pub fn run_logged<W: Write>(self, log: &mut EventLog<W>) -> Result<RunRecord> {
        self.run_inner(Some(log))
    }

    fn run_inner<W: Write>(mut self, mut log: Option<&mut EventLog<W>>) -> Result<RunRecord> {
        let n = self.net.node_count();
        let reachable = self.net.reachable_pairs() as u64;
        let per_node_reachable: Vec<usize> =
            (0..n).map(|i| (0..self.net.beam_count()).map(|b| self.net.table.members(i, b).len()).sum()).collect();
        let mut completion: Vec<Option<u64>> =
            per_node_reachable.iter().map(|&r| if r == 0 { Some(0) } else { None }).collect();
        let RunSettings { warmup, slot_cap, .. } = self.settings;

        let mut per_slot = Vec::new();
        let mut discovered = 0u64;
        let mut gossip = 0u64;
        let mut last = 0u64;
        let (detection, status) = loop {
            if discovered == reachable {
                // nothing can change any more; jump straight to the stopping slot
                let (t, status) = detection_slot_after(last, self.slot.max(1), warmup, slot_cap);
                per_slot.resize(t as usize, 0);
                break (t, status);
            }
            let outcome = self.step()?;
            if let Some(log) = log.as_deref_mut() {
                log.record(&outcome)?;
            }
            let found = outcome.discovery_count() as u64;
            per_slot.push(found as u32);
            discovered += found;
            gossip += outcome.gossip.len() as u64;
            if found > 0 {
                last = self.slot;
                for d in outcome.direct.iter().chain(&outcome.gossip) {
                    let o = d.observer;
                    if completion[o].is_none() && self.states[o].nl.len() == per_node_reachable[o] {
                        completion[o] = Some(self.slot);
                    }
                }
            }
            match check_convergence(last, self.slot, warmup, slot_cap) {
                ConvergenceStatus::Running => {}
                status => break (self.slot, status),
            }
        };

        Ok(RunRecord {
            algorithm: self.settings.algorithm,
            seed: self.seed,
            nodes: n,
            sensing_slots: self.sensing_slots,
            discoveries_per_slot: per_slot,
            gossip_discoveries: gossip,
            completion_slots: completion,
            last_discovery_slot: last,
            detection_slot: detection,
            status,
            discovered_pairs: discovered,
            reachable_pairs: reachable,
            complete: discovered == reachable,
        })
    }
}
