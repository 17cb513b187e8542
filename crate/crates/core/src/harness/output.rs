use std::fs;
use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use super::config::ExperimentConfig;
use super::experiment::{ExperimentResult, RunRecord, Summary};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 19] = [
    "run_id",
    "k",
    "M",
    "alpha0",
    "eta",
    "t",
    "r",
    "v",
    "tau",
    "b",
    "scorer",
    "success",
    "trials_tested",
    "copies_consumed",
    "symbols_consumed",
    "wall_ms",
    "bob_ber",
    "ci_low",
    "ci_high",
];

pub const AGGREGATE_ID: &str = "aggregate";

fn config_fields(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    Ok(vec![
        cfg.k.to_string(),
        cfg.m.to_string(),
        cfg.alpha0.to_string(),
        cfg.transmission()?.to_string(),
        cfg.copies()?.to_string(),
        cfg.windows().to_string(),
        cfg.v.to_string(),
        cfg.tau.to_string(),
        cfg.b.to_string(),
        cfg.scorer.to_string(),
    ])
}

fn run_row(cfg: &ExperimentConfig, r: &RunRecord) -> Result<Vec<String>> {
    let mut row = vec![r.run_id.to_string()];
    row.extend(config_fields(cfg)?);
    row.extend([
        (r.success as u8).to_string(),
        r.trials_tested.to_string(),
        r.copies_consumed.to_string(),
        r.symbols_consumed.to_string(),
        r.wall_ms.to_string(),
        r.bob_ber.to_string(),
        String::new(),
        String::new(),
    ]);
    Ok(row)
}

/// The aggregate row: success rate, mean resources and the Wilson interval.
fn aggregate_row(cfg: &ExperimentConfig, s: &Summary) -> Result<Vec<String>> {
    let mut row = vec![AGGREGATE_ID.to_string()];
    row.extend(config_fields(cfg)?);
    row.extend([
        s.success_rate.to_string(),
        s.mean_trials.to_string(),
        s.mean_copies.to_string(),
        s.mean_symbols.to_string(),
        s.wall_ms.to_string(),
        s.mean_bob_ber.to_string(),
        s.ci_low.to_string(),
        s.ci_high.to_string(),
    ]);
    Ok(row)
}

/// Which rows of each experiment go into the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rows {
    /// Every run followed by the aggregate.
    All,
    AggregateOnly,
}

/// Renders a complete CSV table, header included.
pub fn render_csv(results: &[ExperimentResult], rows: Rows) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for result in results {
        if rows == Rows::All {
            for r in &result.records {
                w.write_record(run_row(&result.config, r)?)?;
            }
        }
        w.write_record(aggregate_row(&result.config, &result.summary)?)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Writes `table` to `path` through a temporary file in the same directory,
/// so readers never see a partial row. With `append`, rows of an existing
/// file with the same header are kept and the new rows follow them.
pub fn write_csv_atomic(path: &Path, table: &[u8], append: bool) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut content = Vec::new();
    let mut body = table;
    if append && path.exists() {
        content = fs::read(path)?;
        let header_len = table
            .iter()
            .position(|&c| c == b'\n')
            .map_or(table.len(), |i| i + 1);
        let (header, rest) = table.split_at(header_len);
        if !content.is_empty() {
            if !content.starts_with(header) {
                return Err(Error::Config(format!(
                    "{} has a different header; refusing to append",
                    path.display()
                )));
            }
            body = rest;
            if !content.ends_with(b"\n") {
                content.push(b'\n');
            }
        }
    }
    content.extend_from_slice(body);
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(&content)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
