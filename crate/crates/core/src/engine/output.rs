//! Output files of a run or a sweep.
//!
//! A run directory holds `kpi_report.json`, `kpi_report.csv`, `events.jsonl`
//! and, when requested, `trace_motion.csv`, `trace_links.csv` and
//! `trace_meas.csv`. A sweep directory holds `kpi_report.json` and
//! `kpi_report.csv` with one row per grid point.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::kpi::write_event_log;

use super::sim::{
    RunOutput, TraceOptions, Traces, LINK_TRACE_HEADER, MEAS_TRACE_HEADER, MOTION_TRACE_HEADER,
};
use super::sweep::SweepResult;

pub const REPORT_JSON: &str = "kpi_report.json";
pub const REPORT_CSV: &str = "kpi_report.csv";
pub const EVENT_LOG: &str = "events.jsonl";

fn write_text(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body)?;
    Ok(())
}

fn write_trace(dir: &Path, name: &str, header: &str, body: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    write_text(&path, &format!("{header}\n{body}"))?;
    Ok(path)
}

/// Write the report, the event log and the requested traces of one run.
/// Returns the paths written, in a fixed order.
pub fn write_run(
    dir: &Path,
    run: &RunOutput,
    traces: &Traces,
    enabled: TraceOptions,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let json = dir.join(REPORT_JSON);
    write_text(&json, &(run.report.to_json() + "\n"))?;
    written.push(json);

    let csv = dir.join(REPORT_CSV);
    write_text(&csv, &run.report.to_csv())?;
    written.push(csv);

    let log = dir.join(EVENT_LOG);
    let mut w = BufWriter::new(File::create(&log)?);
    write_event_log(&mut w, &run.header, &run.events, &run.report.ue_outage_ms)?;
    w.flush()?;
    written.push(log);

    if enabled.motion {
        written.push(write_trace(
            dir,
            "trace_motion.csv",
            MOTION_TRACE_HEADER,
            &traces.motion,
        )?);
    }
    if enabled.links {
        written.push(write_trace(
            dir,
            "trace_links.csv",
            LINK_TRACE_HEADER,
            &traces.links,
        )?);
    }
    if enabled.meas {
        written.push(write_trace(
            dir,
            "trace_meas.csv",
            MEAS_TRACE_HEADER,
            &traces.meas,
        )?);
    }
    Ok(written)
}

/// Write the seed-averaged sweep table and the per-seed reports.
pub fn write_sweep(dir: &Path, result: &SweepResult) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let json = dir.join(REPORT_JSON);
    write_text(&json, &(result.to_json() + "\n"))?;
    let csv = dir.join(REPORT_CSV);
    write_text(&csv, &result.to_csv())?;
    Ok(vec![json, csv])
}
