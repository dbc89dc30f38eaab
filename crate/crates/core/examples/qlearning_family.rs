//! Q-learning beam selection with and without gossip and non-reply under an
//! imperfect radar prior.
//!
//! `cargo run --release --example qlearning_family -- 0.5` (rc ratio).

use isac_nd::harness::{compare, ScenarioConfig};
use isac_nd::policies::AlgorithmId;

fn main() -> isac_nd::Result<()> {
    let rc_ratio = std::env::args().nth(1).map_or(0.5, |a| a.parse().expect("rc ratio"));
    let algs = [AlgorithmId::QND, AlgorithmId::QnR, AlgorithmId::GQND, AlgorithmId::GQnRnS];
    for nodes in [25, 50] {
        let cfg =
            ScenarioConfig { nodes, beamwidth_deg: 36.0, rc_ratio, replications: 40, ..ScenarioConfig::default() };
        for r in compare(&cfg, &algs)? {
            let s = &r.summary;
            println!(
                "N={nodes} {:8} {:8.1} slots  completeness {:.2}",
                s.algorithm.as_str(),
                s.mean_convergence_slots,
                s.completeness_rate
            );
        }
    }
    Ok(())
}
