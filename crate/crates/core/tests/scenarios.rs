use approx::assert_relative_eq;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use isac_nd::analytics::expected_discovered;
use isac_nd::harness::{
    emit, run_experiment, simulate_once, sweep, theory, validate, ExperimentResult, ScenarioConfig, SweepAxis,
};
use isac_nd::policies::AlgorithmId;

fn small(nodes: usize, beamwidth_deg: f64, replications: usize) -> ScenarioConfig {
    ScenarioConfig { nodes, beamwidth_deg, replications, horizon: 400, ..ScenarioConfig::default() }
}

#[test]
fn two_node_random_access_is_geometric() {
    // A long warm-up keeps the silence rule from ending runs before the first handshake.
    let cfg = ScenarioConfig { warmup: Some(64), ..small(2, 360.0, 4000) };
    let result = run_experiment(&cfg, AlgorithmId::GCRA).unwrap();
    for r in &result.runs {
        assert!(r.complete);
        assert_eq!(r.detection_slot, (2 * r.last_discovery_slot).max(64));
    }
    // Geometric(1/2): mean 2, standard deviation √2.
    let se = (2.0f64 / 4000.0).sqrt();
    assert!((result.summary.mean_last_discovery_slot - 2.0).abs() < 4.0 * se);
}

#[test]
fn two_node_detection_under_default_warmup() {
    // Warm-up 2: silent first two slots stop the run (1/4), a handshake in slot 1
    // is detected at 2 (1/2), one in slot 2 at 4 (1/4).
    let result = run_experiment(&small(2, 360.0, 4000), AlgorithmId::GCRA).unwrap();
    let mut seen = [0usize; 3];
    for r in &result.runs {
        match (r.last_discovery_slot, r.detection_slot, r.complete) {
            (0, 2, false) => seen[0] += 1,
            (1, 2, true) => seen[1] += 1,
            (2, 4, true) => seen[2] += 1,
            other => panic!("unexpected outcome {other:?}"),
        }
    }
    for (count, p) in seen.iter().zip([0.25f64, 0.5, 0.25]) {
        let sd = (4000.0 * p * (1.0 - p)).sqrt();
        assert!((*count as f64 - 4000.0 * p).abs() < 4.0 * sd, "{seen:?}");
    }
    assert!((result.summary.mean_convergence_slots - 2.5).abs() < 0.06);
}

#[test]
fn single_replication_repeats_exactly() {
    let cfg = ScenarioConfig { replications: 1, base_seed: 77, ..small(12, 36.0, 1) };
    for alg in [AlgorithmId::GnRS, AlgorithmId::GQnRnS, AlgorithmId::CRA] {
        assert_eq!(run_experiment(&cfg, alg).unwrap(), run_experiment(&cfg, alg).unwrap());
    }
}

#[test]
fn aggregates_ignore_replication_order() {
    let cfg = small(10, 36.0, 30);
    let result = run_experiment(&cfg, AlgorithmId::GRnS).unwrap();
    let mut runs = result.runs.clone();
    runs.shuffle(&mut ChaCha8Rng::seed_from_u64(3));
    let shuffled = ExperimentResult::from_runs(cfg.clone(), AlgorithmId::GRnS, runs);
    assert_relative_eq!(
        shuffled.summary.mean_convergence_slots,
        result.summary.mean_convergence_slots,
        max_relative = 1e-12
    );
    assert_eq!(shuffled.summary.median_convergence_slots, result.summary.median_convergence_slots);
    assert_eq!(shuffled.summary.completeness_rate, result.summary.completeness_rate);
    for (a, b) in shuffled.nd_ratio.iter().zip(&result.nd_ratio) {
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }
}

#[test]
fn nd_ratio_rises_to_the_completeness_level() {
    let cfg = ScenarioConfig { rc_ratio: 0.5, ..small(12, 36.0, 40) };
    for alg in [AlgorithmId::GnRS, AlgorithmId::GQnRnS] {
        let result = run_experiment(&cfg, alg).unwrap();
        assert!(result.nd_ratio.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        let last = *result.nd_ratio.last().unwrap();
        let full = result.summary.completeness_rate;
        assert!(last >= full - 1e-12 && last <= 1.0 + 1e-12);
        if full == 1.0 {
            assert_relative_eq!(last, 1.0, max_relative = 1e-12);
        }
    }
}

#[test]
fn empty_sweep_is_empty() {
    assert!(sweep(&small(5, 36.0, 2), AlgorithmId::GnRS, SweepAxis::RcRatio, &[]).unwrap().is_empty());
}

#[test]
fn sweep_records_the_axis_value() {
    let results = sweep(&small(5, 36.0, 4), AlgorithmId::GnRS, SweepAxis::Nodes, &[3.0, 7.0]).unwrap();
    assert_eq!(results.iter().map(|r| r.summary.nodes).collect::<Vec<_>>(), vec![3, 7]);
}

#[test]
fn larger_networks_take_longer() {
    let cfg = small(5, 36.0, 60);
    for alg in [AlgorithmId::GnRS, AlgorithmId::GRnS, AlgorithmId::GnRnS, AlgorithmId::GRS, AlgorithmId::GQnRnS] {
        let r = sweep(&cfg, alg, SweepAxis::Nodes, &[5.0, 50.0]).unwrap();
        assert!(
            r[0].summary.mean_convergence_slots < r[1].summary.mean_convergence_slots,
            "{alg}: {} vs {}",
            r[0].summary.mean_convergence_slots,
            r[1].summary.mean_convergence_slots
        );
    }
}

#[test]
fn two_node_theory_has_closed_form() {
    let cfg = ScenarioConfig { horizon: 12, ..small(2, 360.0, 1) };
    let series = theory(&cfg, AlgorithmId::GRnS).unwrap();
    for (t, p) in series.combined.iter().enumerate() {
        assert_relative_eq!(*p, 1.0 - 0.5f64.powi(t as i32 + 1), epsilon = 1e-12);
    }
}

#[test]
fn wider_beam_sets_converge_slower_in_theory() {
    let at = |deg: f64| {
        let cfg = ScenarioConfig { nodes: 20, beamwidth_deg: deg, horizon: 400, ..ScenarioConfig::default() };
        theory(&cfg, AlgorithmId::GnRS).unwrap().expected
    };
    let (b10, b25) = (at(36.0), at(14.4));
    assert!(b10.iter().zip(&b25).all(|(a, b)| a >= b));
    assert!(b10[100] > b25[100]);
}

#[test]
fn non_reply_model_tracks_a_small_network() {
    let cfg =
        ScenarioConfig { nodes: 6, beamwidth_deg: 90.0, replications: 500, horizon: 400, ..ScenarioConfig::default() };
    let report = validate(&cfg, AlgorithmId::GnRnS).unwrap();
    assert!(report.passes(), "deviation {} > {}", report.mean_abs_deviation, report.tolerance);
}

#[test]
fn expected_count_matches_bernoulli_average() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let probs = [0.0, 0.1, 0.37, 0.8, 1.0];
    let n = 9;
    let expected = expected_discovered(&probs, n);
    for (p, e) in probs.iter().zip(&expected) {
        let draws = 40_000;
        let hits: usize = (0..draws).map(|_| (0..n - 1).filter(|_| rng.random_bool(*p)).count()).sum();
        let mean = hits as f64 / draws as f64;
        assert!((mean - e).abs() < 0.03, "p={p}: {mean} vs {e}");
    }
}

#[test]
fn json_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("result.json");
    let result = run_experiment(&small(9, 45.0, 7), AlgorithmId::GQnRnS).unwrap();
    emit::write_json(&result, &path).unwrap();
    let back: ExperimentResult = emit::read_json(&path).unwrap();
    assert_eq!(back, result);
    assert_eq!(back.summary.mean_convergence_slots.to_bits(), result.summary.mean_convergence_slots.to_bits());
    assert!(back.nd_ratio_ci.iter().zip(&result.nd_ratio_ci).all(|(a, b)| a.to_bits() == b.to_bits()));
}

#[test]
fn empty_experiment_writes_header_only() {
    let cfg = small(4, 90.0, 1);
    let empty = ExperimentResult::from_runs(cfg, AlgorithmId::GnRS, Vec::new());
    let mut buf = Vec::new();
    emit::write_simulation_csv(&empty, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "slot,mean_nd_ratio,ci_halfwidth\n");
}

#[test]
fn seeds_select_distinct_layouts() {
    let cfg = small(10, 36.0, 1);
    let a = simulate_once(&cfg, AlgorithmId::GnRS, 1).unwrap();
    let b = simulate_once(&cfg, AlgorithmId::GnRS, 2).unwrap();
    assert_ne!(a.discoveries_per_slot, b.discoveries_per_slot);
}
