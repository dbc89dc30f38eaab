//! Expected-discovery model: beam occupancy, per-slot pair probabilities,
//! and the gossip recursion that turns them into `N(t)` curves.

mod curves;
mod gossip;
mod occupancy;

pub use curves::{
    align_probability, curve, curve_strict, feedback_interferers, gnrns_curve, gnrns_pair_probability, gnrs_curve,
    grns_curve, grs_curve, mean_align_probability, non_reply_pair_probability, reply_pair_probability,
    stop_pair_probability, unfinished_probability, AnalyticParams, AnalyticSeries,
};
pub use gossip::{
    direct_series, expected_discovered, gossip_recursion, relay_probability, GossipSeries, GossipStepper,
};
pub use occupancy::{occupancy_pmf, OccupancyModel};
