//! Slotted handshake engine: hello delivery, collisions, feedback, gossip
//! merging and convergence detection.

mod convergence;
mod events;
mod run;
mod slot;
mod state;

pub use convergence::{check_convergence, detection_slot_after, ConvergenceStatus};
pub use events::{slot_events, Event, EventLog};
pub use run::{RunRecord, RunSettings, Simulation};
pub use slot::{run_slot, Collision, Discovery, Network, SlotOutcome, SubSlot};
pub use state::{merge_gossip, update_cl, NeighborList, NodeState};
