//! One slot of the directional two-way handshake.
//!
//! Sub-slot 1 carries hellos from transmitters, sub-slot 2 carries feedback
//! from the receivers that decoded one. A node decodes a packet only when
//! exactly one sender reaches it; two or more collide. Neighbor lists are
//! updated only after both sub-slots resolve, so feedback payloads are the
//! senders' lists as they stood at the start of the slot.

use serde::{Deserialize, Serialize};

use crate::error::{NdError, Result};
use crate::geometry::{BeamSpec, NodeId, NodeLayout, SectorTable};
use crate::policies::{Mechanisms, SlotDecision};

use super::state::NodeState;

/// Static per-run geometry shared by every slot.
#[derive(Debug, Clone)]
pub struct Network {
    pub layout: NodeLayout,
    pub spec: BeamSpec,
    pub comm_range: f64,
    pub table: SectorTable,
}

impl Network {
    pub fn new(layout: NodeLayout, spec: BeamSpec, comm_range: f64) -> Self {
        let table = SectorTable::new(&layout, &spec, comm_range);
        Self { layout, spec, comm_range, table }
    }

    pub fn node_count(&self) -> usize {
        self.layout.len()
    }

    pub fn beam_count(&self) -> usize {
        self.spec.beam_count()
    }

    /// Ordered node pairs within communication range.
    pub fn reachable_pairs(&self) -> usize {
        let n = self.node_count();
        (0..n).map(|i| (0..self.beam_count()).map(|b| self.table.members(i, b).len()).sum::<usize>()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubSlot {
    Hello,
    Feedback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    pub subslot: SubSlot,
    pub at: NodeId,
    pub senders: Vec<NodeId>,
}

/// Discovery of `discovered` by `observer`; `relay` is set for gossip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discovery {
    pub observer: NodeId,
    pub discovered: NodeId,
    pub relay: Option<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotOutcome {
    pub slot: u64,
    pub decisions: Vec<SlotDecision>,
    /// (receiver, transmitter) for every decoded hello.
    pub hellos: Vec<(NodeId, NodeId)>,
    /// (receiver, transmitter) pairs where the receiver withheld its feedback.
    pub suppressed: Vec<(NodeId, NodeId)>,
    /// (transmitter, replier) for every decoded feedback.
    pub feedbacks: Vec<(NodeId, NodeId)>,
    pub collisions: Vec<Collision>,
    pub direct: Vec<Discovery>,
    pub gossip: Vec<Discovery>,
}

impl SlotOutcome {
    pub fn discovery_count(&self) -> usize {
        self.direct.len() + self.gossip.len()
    }
}

/// Resolves one slot and applies the resulting list updates to `states`.
pub fn run_slot(
    slot: u64,
    states: &mut [NodeState],
    decisions: &[SlotDecision],
    net: &Network,
    mechanisms: Mechanisms,
) -> Result<SlotOutcome> {
    let n = net.node_count();
    assert_eq!(states.len(), n);
    assert_eq!(decisions.len(), n);
    let beams = net.beam_count();
    if let Some(bad) = decisions.iter().filter_map(|d| d.beam()).find(|&b| b >= beams) {
        return Err(NdError::Config(format!("decision references beam {bad} of {beams}")));
    }
    let table = &net.table;
    let mut out = SlotOutcome {
        slot,
        decisions: decisions.to_vec(),
        hellos: Vec::new(),
        suppressed: Vec::new(),
        feedbacks: Vec::new(),
        collisions: Vec::new(),
        direct: Vec::new(),
        gossip: Vec::new(),
    };

    // sub-slot 1: hellos
    let mut replying = vec![false; n];
    for (rx, d) in decisions.iter().enumerate() {
        let Some(rx_beam) = d.receiving_on() else { continue };
        let senders: Vec<NodeId> = table
            .members(rx, rx_beam)
            .iter()
            .copied()
            .filter(|&tx| decisions[tx].transmitting_on() == Some(table.beam(tx, rx)))
            .collect();
        match senders.len() {
            0 => {}
            1 => {
                let tx = senders[0];
                out.hellos.push((rx, tx));
                if mechanisms.non_reply && states[rx].confirmed.contains(tx) {
                    out.suppressed.push((rx, tx));
                } else {
                    replying[rx] = true;
                }
            }
            _ => out.collisions.push(Collision { subslot: SubSlot::Hello, at: rx, senders }),
        }
    }

    // sub-slot 2: feedback, aimed back along each replier's receive beam
    for (tx, d) in decisions.iter().enumerate() {
        let Some(tx_beam) = d.transmitting_on() else { continue };
        let repliers: Vec<NodeId> = table
            .members(tx, tx_beam)
            .iter()
            .copied()
            .filter(|&k| replying[k] && decisions[k].receiving_on() == Some(table.beam(k, tx)))
            .collect();
        match repliers.len() {
            0 => {}
            1 => out.feedbacks.push((tx, repliers[0])),
            _ => out.collisions.push(Collision { subslot: SubSlot::Feedback, at: tx, senders: repliers }),
        }
    }

    // gossip payloads are read before any list changes
    let mut gossip_candidates: Vec<(NodeId, NodeId, Vec<NodeId>)> = Vec::new();
    if mechanisms.gossip {
        for &(tx, replier) in &out.feedbacks {
            let fresh = states[tx].nl.missing_from(&states[replier].nl, tx);
            if !fresh.is_empty() {
                gossip_candidates.push((tx, replier, fresh));
            }
        }
    }

    let positions = &net.layout.positions;
    let direct_pairs = out.hellos.iter().copied().chain(out.feedbacks.iter().copied());
    for (observer, discovered) in direct_pairs {
        let st = &mut states[observer];
        if st.nl.insert(discovered, positions[discovered]) {
            st.cl[table.beam(observer, discovered)] += 1;
            out.direct.push(Discovery { observer, discovered, relay: None });
        }
    }
    for &(tx, replier) in &out.feedbacks {
        states[tx].confirmed.insert(replier, positions[replier]);
    }
    for (observer, relay, fresh) in gossip_candidates {
        for discovered in fresh {
            let pos = states[relay].nl.position(discovered).expect("relay knows the position");
            let st = &mut states[observer];
            if st.nl.insert(discovered, pos) {
                st.cl[table.beam(observer, discovered)] += 1;
                out.gossip.push(Discovery { observer, discovered, relay: Some(relay) });
            }
        }
    }
    Ok(out)
}
