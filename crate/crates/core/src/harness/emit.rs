//! CSV and JSON writers for results.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::analytics::AnalyticSeries;
use crate::error::Result;

use super::experiment::{ExperimentResult, Summary};
use super::validation::ValidationReport;

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(out)
}

/// `slot, mean_nd_ratio, ci_halfwidth`
pub fn write_simulation_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["slot", "mean_nd_ratio", "ci_halfwidth"])?;
    for (t, (m, ci)) in result.nd_ratio.iter().zip(&result.nd_ratio_ci).enumerate() {
        w.write_record([(t + 1).to_string(), m.to_string(), ci.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `algorithm, N, rc_ratio, mean_convergence_slots, completeness_rate`
pub fn write_summary_csv<'a, W: Write>(summaries: impl IntoIterator<Item = &'a Summary>, out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["algorithm", "N", "rc_ratio", "mean_convergence_slots", "completeness_rate"])?;
    for s in summaries {
        w.write_record([
            s.algorithm.to_string(),
            s.nodes.to_string(),
            s.rc_ratio.to_string(),
            s.mean_convergence_slots.to_string(),
            s.completeness_rate.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `t, D, I, P, N_expected`
pub fn write_theory_csv<W: Write>(series: &AnalyticSeries, out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["t", "D", "I", "P", "N_expected"])?;
    for t in 0..series.len() {
        w.write_record([
            (t + 1).to_string(),
            series.direct[t].to_string(),
            series.indirect[t].to_string(),
            series.combined[t].to_string(),
            series.expected[t].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `slot` then one mean ND ratio column per algorithm. Shorter curves hold
/// their final value.
pub fn write_compare_csv<W: Write>(results: &[ExperimentResult], out: W) -> Result<()> {
    let mut w = writer(out);
    let mut header = vec!["slot".to_string()];
    header.extend(results.iter().map(|r| r.algorithm.to_string()));
    w.write_record(&header)?;
    let len = results.iter().map(|r| r.nd_ratio.len()).max().unwrap_or(0);
    for t in 0..len {
        let mut row = vec![(t + 1).to_string()];
        for r in results {
            let v = r.nd_ratio.get(t).or(r.nd_ratio.last()).copied().unwrap_or(0.0);
            row.push(v.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `slot, simulated, analytic, abs_deviation`
pub fn write_validation_csv<W: Write>(report: &ValidationReport, out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["slot", "simulated", "analytic", "abs_deviation"])?;
    for (t, s, a) in report.rows() {
        w.write_record([t.to_string(), s.to_string(), a.to_string(), (s - a).abs().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}
