//! How a shrinking radar range slows GQ-nRnS and hurts the stop mechanism.
//!
//! `cargo run --release --example rc_ratio_surface`

use isac_nd::harness::{sweep, ScenarioConfig, SweepAxis};
use isac_nd::policies::AlgorithmId;

fn main() -> isac_nd::Result<()> {
    let ratios = [0.5, 0.7, 0.9, 1.0];
    for nodes in [10, 30, 50] {
        let cfg = ScenarioConfig { nodes, beamwidth_deg: 36.0, replications: 40, ..ScenarioConfig::default() };
        for alg in [AlgorithmId::GQnRnS, AlgorithmId::GnRS] {
            let row = sweep(&cfg, alg, SweepAxis::RcRatio, &ratios)?;
            let cells: Vec<String> = row
                .iter()
                .map(|r| format!("{:7.1} ({:.2})", r.summary.mean_convergence_slots, r.summary.completeness_rate))
                .collect();
            println!("N={nodes:<3} {alg:8} {}", cells.join("  "));
        }
    }
    println!("columns: rc_ratio {ratios:?}; cells: mean slots (completeness)");
    Ok(())
}
