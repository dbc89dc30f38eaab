use serde::{Deserialize, Serialize};

use crate::geometry::{beam_index, BeamIndex, BeamSpec, NodeId, NodeLayout, Point};
use crate::policies::Transceiver;
use crate::qlearning::QTable;
use crate::sensing::RadarList;

/// Neighbor List: discovered ids together with the positions learned for them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborList {
    words: Vec<u64>,
    positions: Vec<Option<Point>>,
    len: usize,
}

impl NeighborList {
    pub fn new(capacity: usize) -> Self {
        Self { words: vec![0; capacity.div_ceil(64)], positions: vec![None; capacity], len: 0 }
    }

    pub fn capacity(&self) -> usize {
        self.positions.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.words[id / 64] >> (id % 64) & 1 == 1
    }

    pub fn position(&self, id: NodeId) -> Option<Point> {
        self.positions[id]
    }

    /// Adds `id`; returns false if it was already present.
    pub fn insert(&mut self, id: NodeId, position: Point) -> bool {
        if self.contains(id) {
            return false;
        }
        self.words[id / 64] |= 1 << (id % 64);
        self.positions[id] = Some(position);
        self.len += 1;
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Point)> + '_ {
        self.positions.iter().enumerate().filter_map(|(id, p)| p.map(|p| (id, p)))
    }

    pub fn ids(&self) -> Vec<NodeId> {
        self.iter().map(|(id, _)| id).collect()
    }

    /// Entries of `other` missing here, excluding `skip`.
    pub fn missing_from(&self, other: &NeighborList, skip: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        for (w, (&mine, &theirs)) in self.words.iter().zip(&other.words).enumerate() {
            let mut fresh = theirs & !mine;
            while fresh != 0 {
                let bit = fresh.trailing_zeros() as usize;
                let id = w * 64 + bit;
                if id != skip {
                    out.push(id);
                }
                fresh &= fresh - 1;
            }
        }
        out
    }
}

/// Union of `own` and `payload`, minus `self_id`. Returns the merged list and
/// the ids that were new.
pub fn merge_gossip(own: &NeighborList, payload: &NeighborList, self_id: NodeId) -> (NeighborList, Vec<NodeId>) {
    let mut merged = own.clone();
    let fresh = own.missing_from(payload, self_id);
    for &id in &fresh {
        merged.insert(id, payload.position(id).expect("payload entry has a position"));
    }
    (merged, fresh)
}

/// Communication List recomputed from scratch: discovered neighbors per beam.
pub fn update_cl(owner: NodeId, nl: &NeighborList, layout: &NodeLayout, spec: &BeamSpec) -> Vec<u32> {
    let mut cl = vec![0u32; spec.beam_count()];
    let origin = layout.positions[owner];
    let offset = spec.reference_orientation(owner);
    for (id, pos) in nl.iter() {
        debug_assert_ne!(id, owner);
        cl[spec.beam_for_bearing(origin.bearing_to(&pos), offset)] += 1;
    }
    debug_assert!(nl.iter().all(|(id, _)| cl[beam_index(owner, id, layout, spec)] > 0));
    cl
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeState {
    pub id: NodeId,
    pub rl: RadarList,
    pub nl: NeighborList,
    pub cl: Vec<u32>,
    /// Neighbors known to have discovered this node too: they answered one
    /// of its hellos. The non-reply mechanism keys on this list.
    pub confirmed: NeighborList,
    pub q: QTable,
    /// Transceiver state already drawn for the next slot (learning policies).
    pub pending_state: Option<Transceiver>,
}

impl NodeState {
    pub fn new(id: NodeId, nodes: usize, rl: RadarList, q: QTable) -> Self {
        let beams = rl.beam_count();
        Self {
            id,
            rl,
            nl: NeighborList::new(nodes),
            cl: vec![0; beams],
            confirmed: NeighborList::new(nodes),
            q,
            pending_state: None,
        }
    }

    /// Beams whose exact sensed count has been reached by discovered neighbors.
    pub fn completed_beams(&self) -> Vec<BeamIndex> {
        (0..self.cl.len()).filter(|&m| matches!(self.rl.count(m), Some(c) if self.cl[m] >= c)).collect()
    }
}
