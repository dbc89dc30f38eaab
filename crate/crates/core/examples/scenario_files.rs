//! Loads a TOML scenario, applies overrides and writes every CSV flavour
//! plus a JSON dump to a temporary directory.
//!
//! `cargo run --example scenario_files`

use std::fs::File;

use isac_nd::harness::{compare, emit, run_experiment, theory, ScenarioConfig};

const SCENARIO: &str = r#"
nodes = 12
beamwidth_deg = 45.0
replications = 20
algorithms = ["G-nRS", "G-RnS"]
horizon = 300
"#;

fn main() -> isac_nd::Result<()> {
    let mut cfg = ScenarioConfig::from_toml_str(SCENARIO)?;
    cfg.set("base_seed", "42")?;
    let dir = std::env::temp_dir().join("isacnd-scenario");
    std::fs::create_dir_all(&dir)?;

    let first = cfg.algorithms[0];
    let result = run_experiment(&cfg, first)?;
    emit::write_simulation_csv(&result, File::create(dir.join("simulation.csv"))?)?;
    emit::write_json(&result, dir.join("result.json"))?;
    let back: isac_nd::harness::ExperimentResult = emit::read_json(dir.join("result.json"))?;
    assert_eq!(back.summary, result.summary);

    let all = compare(&cfg, &cfg.algorithms)?;
    emit::write_compare_csv(&all, File::create(dir.join("compare.csv"))?)?;
    emit::write_summary_csv(all.iter().map(|r| &r.summary), File::create(dir.join("summary.csv"))?)?;
    emit::write_theory_csv(&theory(&cfg, first)?, File::create(dir.join("theory.csv"))?)?;

    println!("{}", cfg.to_toml_string());
    println!("wrote CSV and JSON files to {}", dir.display());
    Ok(())
}
