//! Analytic expected-discovery curves against simulated means for the four
//! gossip algorithms.
//!
//! `cargo run --release --example theory_fit -- 20 10` (nodes, beam count).

use isac_nd::harness::{validate, ScenarioConfig};
use isac_nd::policies::AlgorithmId;

fn main() -> isac_nd::Result<()> {
    let mut args = std::env::args().skip(1);
    let nodes: usize = args.next().map_or(20, |a| a.parse().expect("node count"));
    let beams: usize = args.next().map_or(10, |a| a.parse().expect("beam count"));

    let cfg = ScenarioConfig {
        nodes,
        beamwidth_deg: 360.0 / beams as f64,
        replications: 100,
        horizon: 1500,
        ..ScenarioConfig::default()
    };
    for alg in [AlgorithmId::GnRS, AlgorithmId::GRnS, AlgorithmId::GnRnS, AlgorithmId::GRS] {
        let report = validate(&cfg, alg)?;
        println!(
            "{alg:7} MAD {:.3} over {:4} slots (limit {:.2})",
            report.mean_abs_deviation, report.window_end, report.tolerance
        );
        let step = (report.window_end / 6).max(1);
        for (t, sim, theory) in report.rows().step_by(step).take(7) {
            println!("    t={t:4}  sim {sim:6.2}  theory {theory:6.2}");
        }
    }
    Ok(())
}
