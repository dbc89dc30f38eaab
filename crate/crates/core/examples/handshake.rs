//! Walks a small network slot by slot and prints who discovered whom.
//!
//! Run with `cargo run --example handshake`.

use isac_nd::engine::{slot_events, Network, RunSettings, Simulation};
use isac_nd::geometry::{place_nodes, BeamSpec};
use isac_nd::policies::{AlgorithmId, PolicyConfig};
use isac_nd::qlearning::LearningParams;
use isac_nd::sensing::{run_sensing_phase, Resolution, SensingConfig};

fn main() -> isac_nd::Result<()> {
    let seed = 7;
    let range = 2.0 * std::f64::consts::SQRT_2;
    let layout = place_nodes(6, 2.0, range, seed)?;
    let spec = BeamSpec::from_beam_count(4);
    let sensing_cfg =
        SensingConfig { comm_range: range, rc_ratio: 1.0, resolution: Resolution::High, sensing_slot_cost: 1 };
    let sensing = run_sensing_phase(&layout, &spec, &sensing_cfg, seed)?;
    for (i, rl) in sensing.lists.iter().enumerate() {
        println!("node {i} radar list {rl:?}");
    }

    let settings = RunSettings {
        algorithm: AlgorithmId::GnRS,
        policy: PolicyConfig::new(0.5, LearningParams::default())?,
        warmup: 8,
        slot_cap: 10_000,
        extreme_point: 1,
    };
    let net = Network::new(layout, spec, range);
    let pairs = net.reachable_pairs();
    let mut sim = Simulation::new(net, sensing, settings, seed)?;

    let mut known = 0;
    while known < pairs {
        let outcome = sim.step()?;
        known += outcome.discovery_count();
        for e in slot_events(&outcome) {
            if matches!(e.kind, "discovery" | "gossip") || e.kind.ends_with("collision") {
                println!("{}", serde_json::to_string(&e).expect("event serializes"));
            }
        }
    }
    println!("all {pairs} ordered pairs known after {} slots", sim.slot());
    Ok(())
}
