//! Node placement and sector geometry.
//!
//! Beam `k` of a node covers bearings in `[k·θ, (k+1)·θ)` measured from the
//! node's reference orientation.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NdError, Result};
use crate::rng::{stream_rng, Stream};

/// Slack used when testing floating-point sector boundaries.
const ANGLE_EPS: f64 = 1e-9;

pub type NodeId = usize;
pub type BeamIndex = usize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    /// Bearing from `self` to `other` in `[0, 2π)`.
    pub fn bearing_to(&self, other: &Point) -> f64 {
        (other.y - self.y).atan2(other.x - self.x).rem_euclid(TAU)
    }
}

/// Node positions (km) inside a square of side `area_side`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeLayout {
    pub positions: Vec<Point>,
    pub area_side: f64,
}

impl NodeLayout {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> f64 {
        self.positions[a].distance(&self.positions[b])
    }
}

/// Per-node angular reference frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Orientation {
    /// Every node measures bearings from the global x axis.
    Aligned,
    /// Node `i` measures bearings from `offsets[i]`.
    PerNode(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamSpec {
    beamwidth: f64,
    beam_count: usize,
    orientation: Orientation,
}

impl BeamSpec {
    /// Builds a spec from a beamwidth in radians. The width must tile the
    /// circle exactly.
    pub fn from_radians(beamwidth: f64) -> Result<Self> {
        if !(beamwidth > 0.0 && beamwidth <= TAU + ANGLE_EPS) {
            return Err(NdError::Beamwidth(beamwidth));
        }
        let ratio = TAU / beamwidth;
        let count = ratio.round();
        if (ratio - count).abs() > 1e-9 * ratio.max(1.0) || count < 1.0 {
            return Err(NdError::Beamwidth(beamwidth));
        }
        Ok(Self::from_beam_count(count as usize))
    }

    pub fn from_degrees(degrees: f64) -> Result<Self> {
        Self::from_radians(degrees.to_radians())
    }

    pub fn from_beam_count(beam_count: usize) -> Self {
        assert!(beam_count >= 1, "at least one beam is required");
        Self { beamwidth: TAU / beam_count as f64, beam_count, orientation: Orientation::Aligned }
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// Draws an independent uniform reference orientation for each node.
    pub fn with_random_orientation(self, nodes: usize, seed: u64) -> Self {
        let mut rng = stream_rng(seed, Stream::Orientation);
        let offsets = (0..nodes).map(|_| rng.random_range(0.0..TAU)).collect();
        self.with_orientation(Orientation::PerNode(offsets))
    }

    pub fn beamwidth(&self) -> f64 {
        self.beamwidth
    }

    pub fn beam_count(&self) -> usize {
        self.beam_count
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn reference_orientation(&self, node: NodeId) -> f64 {
        match &self.orientation {
            Orientation::Aligned => 0.0,
            Orientation::PerNode(offsets) => offsets[node],
        }
    }

    /// Beam of a node with reference `offset` that contains `bearing`.
    pub fn beam_for_bearing(&self, bearing: f64, offset: f64) -> BeamIndex {
        let relative = (bearing - offset).rem_euclid(TAU);
        let k = (relative / self.beamwidth + ANGLE_EPS).floor() as usize;
        k % self.beam_count
    }
}

/// Places `nodes` positions uniformly at random in `[0, side]²`.
pub fn place_nodes(nodes: usize, area_side: f64, comm_range: f64, seed: u64) -> Result<NodeLayout> {
    if nodes == 0 {
        return Err(NdError::Config("node count must be at least 1".into()));
    }
    if area_side.is_nan() || area_side <= 0.0 {
        return Err(NdError::Config(format!("area side must be positive, got {area_side}")));
    }
    let diagonal = area_side * std::f64::consts::SQRT_2;
    if diagonal > comm_range * (1.0 + 1e-9) {
        return Err(NdError::NotOneHop { diagonal, range: comm_range });
    }
    let mut rng = stream_rng(seed, Stream::Placement);
    let positions =
        (0..nodes).map(|_| Point::new(rng.random_range(0.0..area_side), rng.random_range(0.0..area_side))).collect();
    Ok(NodeLayout { positions, area_side })
}

/// Beam of `observer` that contains `target`.
pub fn beam_index(observer: NodeId, target: NodeId, layout: &NodeLayout, spec: &BeamSpec) -> BeamIndex {
    assert_ne!(observer, target, "a node has no bearing to itself");
    let bearing = layout.positions[observer].bearing_to(&layout.positions[target]);
    spec.beam_for_bearing(bearing, spec.reference_orientation(observer))
}

/// Whether `observer`, pointing `chosen_beam`, covers `target` within `range`.
pub fn covers(
    observer: NodeId,
    chosen_beam: BeamIndex,
    target: NodeId,
    layout: &NodeLayout,
    spec: &BeamSpec,
    range: f64,
) -> bool {
    layout.distance(observer, target) <= range && beam_index(observer, target, layout, spec) == chosen_beam
}

/// Precomputed pairwise beam indices and in-range neighbor lists for one
/// layout. The slot engine only ever consults this table.
#[derive(Debug, Clone)]
pub struct SectorTable {
    n: usize,
    beams: usize,
    beam: Vec<u16>,
    members: Vec<Vec<Vec<NodeId>>>,
}

impl SectorTable {
    pub fn new(layout: &NodeLayout, spec: &BeamSpec, range: f64) -> Self {
        let n = layout.len();
        let beams = spec.beam_count();
        let mut beam = vec![0u16; n * n];
        let mut members = vec![vec![Vec::new(); beams]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let k = beam_index(i, j, layout, spec);
                beam[i * n + j] = k as u16;
                if layout.distance(i, j) <= range {
                    members[i][k].push(j);
                }
            }
        }
        Self { n, beams, beam, members }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn beam_count(&self) -> usize {
        self.beams
    }

    pub fn beam(&self, observer: NodeId, target: NodeId) -> BeamIndex {
        self.beam[observer * self.n + target] as BeamIndex
    }

    /// In-range nodes inside `beam` of `observer`.
    pub fn members(&self, observer: NodeId, beam: BeamIndex) -> &[NodeId] {
        &self.members[observer][beam]
    }
}
