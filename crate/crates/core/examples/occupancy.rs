//! Beam occupancy distribution next to an empirical count from random
//! placements.
//!
//! An observer at the centre of the square sees each sector of a 2, 4 or 8
//! beam pattern cover the same area, so the binomial model is exact there.
//! Observers near an edge see many empty beams, and the network-wide
//! histogram drifts away from it.
//!
//! `cargo run --release --example occupancy`

use isac_nd::analytics::occupancy_pmf;
use isac_nd::geometry::{place_nodes, BeamSpec, Point, SectorTable};

fn main() -> isac_nd::Result<()> {
    let (nodes, beams) = (20, 8);
    let model = occupancy_pmf(nodes - 1, beams);
    let spec = BeamSpec::from_beam_count(beams);
    let range = 2.0 * std::f64::consts::SQRT_2;
    let centre = Point::new(1.0, 1.0);

    let mut central = vec![0u64; nodes];
    let mut network = vec![0u64; nodes];
    let trials = 4000;
    for seed in 0..trials {
        let layout = place_nodes(nodes, 2.0, range, seed)?;
        let mut counts = vec![0usize; beams];
        for p in &layout.positions[1..] {
            counts[spec.beam_for_bearing(centre.bearing_to(p), 0.0)] += 1;
        }
        for c in counts {
            central[c] += 1;
        }
        let table = SectorTable::new(&layout, &spec, range);
        for i in 0..nodes {
            for b in 0..beams {
                network[table.members(i, b).len()] += 1;
            }
        }
    }
    let share = |h: &[u64], u: usize| h[u] as f64 / h.iter().sum::<u64>() as f64;
    println!(
        "expected non-empty beams {:.2}, mean non-empty population {:.2}",
        model.effective_beams, model.mean_occupancy
    );
    println!("{:>3} {:>9} {:>9} {:>9}", "u", "binomial", "centre", "network");
    for u in 0..8 {
        println!("{u:>3} {:>9.4} {:>9.4} {:>9.4}", model.pmf[u], share(&central, u), share(&network, u));
    }
    Ok(())
}
