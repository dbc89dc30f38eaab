//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use isac_nd::analytics::occupancy_pmf;
use isac_nd::engine::{Network, RunSettings, Simulation};
use isac_nd::geometry::{covers, place_nodes, BeamSpec, Point};
use isac_nd::policies::{AlgorithmId, PolicyConfig, SlotDecision, Transceiver};
use isac_nd::qlearning::{reward, LearningParams, QTable};
use isac_nd::sensing::{run_sensing_phase, Resolution, SensingConfig};

pub const RANGE: f64 = 2.0 * std::f64::consts::SQRT_2;

pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
}

impl ChiSquare {
    pub fn passes(&self) -> bool {
        self.statistic <= self.critical
    }
}

/// Pearson test of `occupancy_pmf(points, beams)` against the population of
/// one random beam of an observer at the centre of the 2 km square, with
/// `points` uniform placements per sample. Bins with expected count below 5
/// are pooled into the tail.
pub fn occupancy_chi_square(points: usize, beams: usize, samples: usize, seed: u64) -> ChiSquare {
    let model = occupancy_pmf(points, beams);
    let spec = BeamSpec::from_beam_count(beams);
    let centre = Point::new(1.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut observed = vec![0u64; points + 1];
    for _ in 0..samples {
        let target = rng.random_range(0..beams);
        let mut count = 0;
        for _ in 0..points {
            let p = Point::new(rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
            if spec.beam_for_bearing(centre.bearing_to(&p), 0.0) == target {
                count += 1;
            }
        }
        observed[count] += 1;
    }
    let n = samples as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut e_acc, mut o_acc) = (0.0, 0.0);
    for (u, (p, o)) in model.pmf.iter().zip(&observed).enumerate() {
        e_acc += p * n;
        o_acc += *o as f64;
        if e_acc >= 5.0 && (model.pmf[u + 1..].iter().sum::<f64>() * n >= 5.0) {
            bins.push((o_acc, e_acc));
            e_acc = 0.0;
            o_acc = 0.0;
        }
    }
    if e_acc > 0.0 {
        match bins.last_mut() {
            Some(last) if e_acc < 5.0 => {
                last.0 += o_acc;
                last.1 += e_acc;
            }
            _ => bins.push((o_acc, e_acc)),
        }
    }
    let statistic = bins.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len() - 1;
    let critical = ChiSquared::new(dof as f64).expect("positive dof").inverse_cdf(0.99);
    ChiSquare { statistic, dof, critical }
}

/// Probability that the target pair is known after each slot, by explicit
/// enumeration of every outcome of the mean-field chain: in slot `t` the
/// pair handshakes directly with probability `pair[t]`, and each of `relays`
/// relays independently knows the target with the chain's own previous-slot
/// probability and handshakes with the observer with probability `pair[t]`.
pub fn mean_field_enumeration(pair: &[f64], relays: usize) -> Vec<f64> {
    let mut known_prev = 0.0;
    let mut out = Vec::new();
    let mut miss_direct = 1.0;
    let mut miss_indirect = 1.0;
    for (t, &p) in pair.iter().enumerate() {
        // enumerate this slot's 1 + 2·relays binary events
        let events = 1 + 2 * relays;
        let (mut direct_hit, mut indirect_hit) = (0.0, 0.0);
        for mask in 0u32..(1 << events) {
            let bit = |k: usize| mask >> k & 1 == 1;
            let mut prob = if bit(0) { p } else { 1.0 - p };
            let mut relayed = false;
            for r in 0..relays {
                let (knows, meets) = (bit(1 + 2 * r), bit(2 + 2 * r));
                let pk = if t == 0 { 0.0 } else { known_prev };
                prob *= if knows { pk } else { 1.0 - pk };
                prob *= if meets { p } else { 1.0 - p };
                relayed |= knows && meets;
            }
            if bit(0) {
                direct_hit += prob;
            }
            if relayed {
                indirect_hit += prob;
            }
        }
        miss_direct *= 1.0 - direct_hit;
        miss_indirect *= 1.0 - indirect_hit;
        known_prev = 1.0 - miss_direct * miss_indirect;
        out.push(known_prev);
    }
    out
}

fn simulation(alg: AlgorithmId, nodes: usize, beams: usize, seed: u64) -> Simulation {
    let layout = place_nodes(nodes, 2.0, RANGE, seed).unwrap();
    let spec = BeamSpec::from_beam_count(beams);
    let sensing_cfg =
        SensingConfig { comm_range: RANGE, rc_ratio: 1.0, resolution: Resolution::High, sensing_slot_cost: 1 };
    let sensing = run_sensing_phase(&layout, &spec, &sensing_cfg, seed).unwrap();
    let settings = RunSettings {
        algorithm: alg,
        policy: PolicyConfig::new(0.5, LearningParams::default()).unwrap(),
        warmup: 2 * beams as u64,
        slot_cap: 100_000,
        extreme_point: 1,
    };
    Simulation::new(Network::new(layout, spec, RANGE), sensing, settings, seed).unwrap()
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

/// Steps seeded simulations and recomputes every hello and feedback
/// decision from raw geometry, checking the engine's outcome on each slot.
/// Returns the number of slots checked.
pub fn collision_recheck(seeds: std::ops::Range<u64>, slots_per_seed: usize) -> Result<usize, String> {
    let mut checked = 0;
    for seed in seeds {
        let alg = if seed % 2 == 0 { AlgorithmId::GnRnS } else { AlgorithmId::GCRA };
        let mut sim = simulation(alg, 14, 4, seed);
        let non_reply = alg.mechanisms().non_reply;
        for _ in 0..slots_per_seed {
            let decisions = sim.decide().map_err(|e| e.to_string())?;
            let before: Vec<_> = sim.states().to_vec();
            let net = sim.network();
            let (layout, spec) = (net.layout.clone(), net.spec.clone());
            let n = layout.len();
            let out = sim.apply(&decisions).map_err(|e| e.to_string())?;

            let tx_beam = |i: usize| match decisions[i] {
                SlotDecision::Active { state: Transceiver::Transmit, beam } => Some(beam),
                _ => None,
            };
            let rx_beam = |i: usize| match decisions[i] {
                SlotDecision::Active { state: Transceiver::Receive, beam } => Some(beam),
                _ => None,
            };
            let link = |a: usize, ba: usize, b: usize, bb: usize| {
                a != b && covers(a, ba, b, &layout, &spec, RANGE) && covers(b, bb, a, &layout, &spec, RANGE)
            };

            let mut hellos = Vec::new();
            let mut suppressed = Vec::new();
            let mut replying = vec![false; n];
            let mut hello_collisions = 0;
            for rx in 0..n {
                let Some(br) = rx_beam(rx) else { continue };
                let senders: Vec<usize> =
                    (0..n).filter(|&tx| tx_beam(tx).is_some_and(|bt| link(tx, bt, rx, br))).collect();
                match senders.as_slice() {
                    [] => {}
                    [tx] => {
                        hellos.push((rx, *tx));
                        if non_reply && before[rx].confirmed.contains(*tx) {
                            suppressed.push((rx, *tx));
                        } else {
                            replying[rx] = true;
                        }
                    }
                    _ => hello_collisions += 1,
                }
            }
            let mut feedbacks = Vec::new();
            let mut feedback_collisions = 0;
            for tx in 0..n {
                let Some(bt) = tx_beam(tx) else { continue };
                let repliers: Vec<usize> =
                    (0..n).filter(|&k| replying[k] && rx_beam(k).is_some_and(|bk| link(k, bk, tx, bt))).collect();
                match repliers.as_slice() {
                    [] => {}
                    [k] => feedbacks.push((tx, *k)),
                    _ => feedback_collisions += 1,
                }
            }
            let slot = out.slot;
            let engine_hc = out.collisions.iter().filter(|c| c.subslot == isac_nd::engine::SubSlot::Hello).count();
            if sorted(&out.hellos) != sorted(&hellos)
                || sorted(&out.suppressed) != sorted(&suppressed)
                || sorted(&out.feedbacks) != sorted(&feedbacks)
                || engine_hc != hello_collisions
                || out.collisions.len() - engine_hc != feedback_collisions
            {
                return Err(format!("seed {seed} slot {slot}: engine and brute force disagree"));
            }
            for &(observer, discovered) in hellos.iter().chain(&feedbacks) {
                if !sim.states()[observer].nl.contains(discovered) {
                    return Err(format!("seed {seed} slot {slot}: {observer} did not record {discovered}"));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Exhaustive checks of the reward branches, the Q update and the
/// ε-greedy selector on small domains.
pub fn q_branch_enumeration() -> Result<(), String> {
    for ep in 0..6u32 {
        for rl in 0..8u32 {
            for cl in 0..8u32 {
                let branches = [rl > cl, rl <= cl && cl <= ep, rl <= cl && cl > ep];
                if branches.iter().filter(|&&b| b).count() != 1 {
                    return Err(format!("branches overlap at rl={rl} cl={cl} ep={ep}"));
                }
                let expected = [2, 1, -1][branches.iter().position(|&b| b).unwrap()];
                if reward(rl, cl, ep) != expected {
                    return Err(format!("reward({rl},{cl},{ep}) = {} not {expected}", reward(rl, cl, ep)));
                }
            }
        }
    }

    let states = [Transceiver::Transmit, Transceiver::Receive];
    let seedv = [0.25, -1.5, 3.0, 0.0, 2.5, -0.75];
    for (alpha, gamma) in [(0.5, 0.3), (0.0, 0.9), (1.0, 0.0), (0.2, 1.0)] {
        for s in states {
            for s_next in states {
                for a in 0..3 {
                    for r in [2.0, 1.0, -1.0] {
                        let mut q = QTable::new(3, alpha, gamma);
                        for (k, &v) in seedv.iter().enumerate() {
                            q.set(states[k / 3], k % 3, v);
                        }
                        let before = q.clone();
                        q.update(s, a, r, s_next);
                        let max_next = before.row(s_next).iter().copied().fold(f64::NEG_INFINITY, f64::max);
                        let old = before.get(s, a);
                        let want = old + alpha * (r + gamma * max_next - old);
                        for ss in states {
                            for aa in 0..3 {
                                let got = q.get(ss, aa);
                                let exp = if ss == s && aa == a { want } else { before.get(ss, aa) };
                                if got != exp {
                                    return Err(format!("update mismatch at ({ss:?},{aa}): {got} vs {exp}"));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut q = QTable::new(4, 0.5, 0.3);
    q.set(Transceiver::Transmit, 1, 2.0);
    q.set(Transceiver::Transmit, 3, 2.0);
    q.set(Transceiver::Transmit, 0, 1.0);
    let mut greedy = [0u32; 4];
    let mut explore = [0u32; 4];
    let mut fresh = [0u32; 4];
    let zero = QTable::new(4, 0.5, 0.3);
    for _ in 0..4000 {
        greedy[q.select_action(Transceiver::Transmit, 0.0, &mut rng)] += 1;
        explore[q.select_action(Transceiver::Transmit, 1.0, &mut rng)] += 1;
        fresh[zero.select_action(Transceiver::Receive, 0.0, &mut rng)] += 1;
    }
    if greedy[0] != 0 || greedy[2] != 0 || greedy[1] == 0 || greedy[3] == 0 {
        return Err(format!("greedy choice left the argmax set: {greedy:?}"));
    }
    if explore.contains(&0) || fresh.contains(&0) {
        return Err(format!("uniform choice missed a beam: {explore:?} {fresh:?}"));
    }
    Ok(())
}
