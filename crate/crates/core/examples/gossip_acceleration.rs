//! Convergence time with and without gossip for each prior-based variant.
//!
//! `cargo run --release --example gossip_acceleration`

use isac_nd::harness::{run_experiment, ScenarioConfig};
use isac_nd::policies::AlgorithmId;

fn main() -> isac_nd::Result<()> {
    let cfg = ScenarioConfig { nodes: 30, replications: 40, ..ScenarioConfig::default() };
    let pairs = [
        (AlgorithmId::RnS, AlgorithmId::GRnS),
        (AlgorithmId::NRnS, AlgorithmId::GnRnS),
        (AlgorithmId::RS, AlgorithmId::GRS),
        (AlgorithmId::NRS, AlgorithmId::GnRS),
        (AlgorithmId::CRA, AlgorithmId::GCRA),
    ];
    println!("{:>8} {:>10} {:>8} {:>10} {:>9}", "plain", "slots", "gossip", "slots", "saving");
    for (plain, gossip) in pairs {
        let a = run_experiment(&cfg, plain)?.summary.mean_convergence_slots;
        let b = run_experiment(&cfg, gossip)?.summary.mean_convergence_slots;
        println!("{:>8} {a:>10.1} {:>8} {b:>10.1} {:>8.1}%", plain.as_str(), gossip.as_str(), 100.0 * (1.0 - b / a));
    }
    Ok(())
}
