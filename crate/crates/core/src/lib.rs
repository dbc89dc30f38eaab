//! Slotted-time simulation and analytical model of directional-antenna
//! neighbor discovery (ND) in single-hop ad hoc networks.
//!
//! Nodes first scan every beam with a radar (the sensing phase), producing a
//! per-beam prior. They then run a two-sub-slot hello/feedback handshake with
//! directional transmit and receive beams. Three acceleration mechanisms can
//! be switched on independently:
//!
//! * **non-reply**: a receiver stays silent towards a sender once each is
//!   known to have discovered the other,
//! * **stop**: a node skips beams whose sensed population it has fully
//!   discovered; once every beam is done it only listens,
//! * **gossip**: feedback packets carry the sender's neighbor list, which the
//!   recipient merges into its own.
//!
//! A tabular Q-learning beam selector replaces the stop rule when the prior is
//! unreliable. The [`analytics`] module evaluates the expected number of
//! discovered neighbors over time for the four gossip algorithms, and
//! [`harness`] runs seeded replication batches and emits CSV/JSON.
//!
//! ```no_run
//! use isac_nd::harness::{run_experiment, ScenarioConfig};
//! use isac_nd::policies::AlgorithmId;
//!
//! let mut cfg = ScenarioConfig::default();
//! cfg.nodes = 20;
//! cfg.replications = 10;
//! let result = run_experiment(&cfg, AlgorithmId::GnRS).unwrap();
//! println!("mean convergence: {:.1} slots", result.summary.mean_convergence_slots);
//! ```

pub mod analytics;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod policies;
pub mod qlearning;
pub mod sensing;

mod rng;

pub use error::{NdError, Result};
