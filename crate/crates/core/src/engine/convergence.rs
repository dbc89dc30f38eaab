use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergenceStatus {
    Running,
    Converged,
    Capped,
}

/// Network-wide stopping rule: converged once no list has grown for at least
/// half of the elapsed slots, after the warm-up. `last_discovery` is 0 when
/// nothing has been discovered yet.
pub fn check_convergence(last_discovery: u64, slot: u64, warmup: u64, cap: u64) -> ConvergenceStatus {
    debug_assert!(slot >= 1 && last_discovery <= slot);
    if slot >= warmup && 2 * (slot - last_discovery) >= slot {
        ConvergenceStatus::Converged
    } else if slot >= cap {
        ConvergenceStatus::Capped
    } else {
        ConvergenceStatus::Running
    }
}

/// First slot `>= from` at which the rule fires given no further discoveries.
pub fn detection_slot_after(last_discovery: u64, from: u64, warmup: u64, cap: u64) -> (u64, ConvergenceStatus) {
    let quiet = (2 * last_discovery).max(warmup).max(from);
    if quiet <= cap {
        (quiet, ConvergenceStatus::Converged)
    } else {
        (cap.max(from), ConvergenceStatus::Capped)
    }
}
