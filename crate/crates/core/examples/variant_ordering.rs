//! Mean convergence time of the four gossip variants as the network grows.
//!
//! `cargo run --release --example variant_ordering`

use isac_nd::harness::{sweep, ScenarioConfig, SweepAxis};
use isac_nd::policies::AlgorithmId;

fn main() -> isac_nd::Result<()> {
    let cfg = ScenarioConfig { replications: 50, ..ScenarioConfig::default() };
    let sizes = [10.0, 20.0, 30.0, 40.0, 50.0];
    let algs = [AlgorithmId::GnRS, AlgorithmId::GRS, AlgorithmId::GnRnS, AlgorithmId::GRnS];

    print!("{:>4}", "N");
    for a in algs {
        print!("{:>10}", a.as_str());
    }
    println!();
    let table: Vec<_> = algs.iter().map(|&a| sweep(&cfg, a, SweepAxis::Nodes, &sizes)).collect::<Result<_, _>>()?;
    for (row, n) in sizes.iter().enumerate() {
        print!("{n:>4}");
        for col in &table {
            print!("{:>10.1}", col[row].summary.mean_convergence_slots);
        }
        println!();
    }
    Ok(())
}
