//! Online KPI accumulation and the final report.

use serde::{Deserialize, Serialize};

use crate::scenario::{ScenarioConfig, UeModel};

use super::classify::{fast_ho_label, FastHo, HoHistoryEntry};
use super::events::{Event, EventKind};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KpiCounts {
    pub n_success: u64,
    pub n_hof: u64,
    pub n_rlf_timer: u64,
    pub n_rlf_bfr: u64,
    pub n_pingpong: u64,
    pub n_shortstay: u64,
    pub n_reestablished: u64,
}

impl KpiCounts {
    pub fn add(&mut self, o: &KpiCounts) {
        self.n_success += o.n_success;
        self.n_hof += o.n_hof;
        self.n_rlf_timer += o.n_rlf_timer;
        self.n_rlf_bfr += o.n_rlf_bfr;
        self.n_pingpong += o.n_pingpong;
        self.n_shortstay += o.n_shortstay;
        self.n_reestablished += o.n_reestablished;
    }
}

/// KPI state of one UE, fed event by event and step by step.
#[derive(Debug, Clone, PartialEq)]
pub struct UeKpi {
    t_fh_ms: f64,
    pub counts: KpiCounts,
    pub outage_steps: u64,
    last_ho: Option<HoHistoryEntry>,
}

impl UeKpi {
    pub fn new(t_fh_ms: f64) -> Self {
        UeKpi {
            t_fh_ms,
            counts: KpiCounts::default(),
            outage_steps: 0,
            last_ho: None,
        }
    }

    pub fn on_event(&mut self, e: &Event) {
        match e.event {
            EventKind::HoSuccess => {
                let h = HoHistoryEntry {
                    time_ms: e.time_ms,
                    from_cell: e.from_cell.unwrap_or(usize::MAX),
                    to_cell: e.cell,
                };
                self.counts.n_success += 1;
                match fast_ho_label(self.last_ho.as_ref(), &h, self.t_fh_ms) {
                    FastHo::PingPong => self.counts.n_pingpong += 1,
                    FastHo::ShortStay => self.counts.n_shortstay += 1,
                    FastHo::None => {}
                }
                self.last_ho = Some(h);
            }
            EventKind::Hof => self.counts.n_hof += 1,
            EventKind::RlfTimer => self.counts.n_rlf_timer += 1,
            EventKind::RlfBfr => self.counts.n_rlf_bfr += 1,
            EventKind::Reestablished => {
                self.counts.n_reestablished += 1;
                self.last_ho = None;
            }
            _ => {}
        }
    }

    /// Account one step; a step in outage adds one time step exactly once.
    pub fn on_step(&mut self, outage: bool) {
        if outage {
            self.outage_steps += 1;
        }
    }
}

fn pct(n: u64, d: u64) -> Option<f64> {
    (d > 0).then(|| 100.0 * n as f64 / d as f64)
}

/// KPIs of one run. Percentages are `None` when there were no attempts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiReport {
    pub scheme: UeModel,
    pub k_b: usize,
    pub o_a3_db: f64,
    pub t_ttt_ms: f64,
    pub seed: u64,
    pub config_hash: String,
    pub n_ues: usize,
    pub sim_duration_s: f64,
    pub attempts: u64,
    pub n_success: u64,
    pub n_failure: u64,
    pub n_hof: u64,
    pub n_rlf: u64,
    pub n_rlf_timer: u64,
    pub n_rlf_bfr: u64,
    pub n_fast_ho: u64,
    pub n_pingpong: u64,
    pub n_shortstay: u64,
    pub n_reestablished: u64,
    pub pct_success: Option<f64>,
    pub pct_fast_ho: Option<f64>,
    pub pct_failure: Option<f64>,
    pub outage_pct: f64,
    pub ue_outage_ms: Vec<f64>,
}

/// Identification of a run, written at the head of its event log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    pub scheme: UeModel,
    pub k_b: usize,
    pub o_a3_db: f64,
    pub t_ttt_ms: f64,
    pub t_fh_ms: f64,
    pub seed: u64,
    pub config_hash: String,
    pub n_ues: usize,
    pub sim_duration_s: f64,
    pub time_step_ms: f64,
}

impl RunHeader {
    pub fn new(cfg: &ScenarioConfig, seed: u64) -> Self {
        RunHeader {
            scheme: cfg.ue_model,
            k_b: cfg.k_b,
            o_a3_db: cfg.o_a3_db,
            t_ttt_ms: cfg.t_ttt_ms,
            t_fh_ms: cfg.t_fh_ms,
            seed,
            config_hash: cfg.hash(),
            n_ues: cfg.n_ues,
            sim_duration_s: cfg.sim_duration_s,
            time_step_ms: cfg.time_step_ms,
        }
    }
}

/// Compute the report from merged counters and per-UE outage durations.
pub fn finalize(header: &RunHeader, counts: &KpiCounts, ue_outage_ms: Vec<f64>) -> KpiReport {
    let n_rlf = counts.n_rlf_timer + counts.n_rlf_bfr;
    let n_failure = counts.n_hof + n_rlf;
    let attempts = counts.n_success + n_failure;
    let n_fast = counts.n_pingpong + counts.n_shortstay;
    let total_ms = header.n_ues as f64 * header.sim_duration_s * 1000.0;
    let outage_sum: f64 = ue_outage_ms.iter().sum();
    let outage_pct = if total_ms > 0.0 {
        (100.0 * outage_sum / total_ms).clamp(0.0, 100.0)
    } else {
        0.0
    };
    KpiReport {
        scheme: header.scheme,
        k_b: header.k_b,
        o_a3_db: header.o_a3_db,
        t_ttt_ms: header.t_ttt_ms,
        seed: header.seed,
        config_hash: header.config_hash.clone(),
        n_ues: header.n_ues,
        sim_duration_s: header.sim_duration_s,
        attempts,
        n_success: counts.n_success,
        n_failure,
        n_hof: counts.n_hof,
        n_rlf,
        n_rlf_timer: counts.n_rlf_timer,
        n_rlf_bfr: counts.n_rlf_bfr,
        n_fast_ho: n_fast,
        n_pingpong: counts.n_pingpong,
        n_shortstay: counts.n_shortstay,
        n_reestablished: counts.n_reestablished,
        pct_success: pct(counts.n_success, attempts),
        pct_fast_ho: pct(n_fast, attempts),
        pct_failure: pct(n_failure, attempts),
        outage_pct,
        ue_outage_ms,
    }
}

impl KpiReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub const CSV_HEADER: &str = "scheme,k_b,o_a3,t_ttt,pct_success,pct_fast_ho,pct_failure,outage_pct";

/// Format a percentage for CSV output; missing values print as `NA`.
pub fn fmt_pct(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.6}"),
        None => "NA".to_string(),
    }
}

/// One row of the KPI table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiRow {
    pub scheme: UeModel,
    pub k_b: usize,
    pub o_a3_db: f64,
    pub t_ttt_ms: f64,
    pub pct_success: Option<f64>,
    pub pct_fast_ho: Option<f64>,
    pub pct_failure: Option<f64>,
    pub outage_pct: Option<f64>,
}

impl KpiRow {
    /// CSV line in the column order of [`CSV_HEADER`].
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.scheme,
            self.k_b,
            self.o_a3_db,
            self.t_ttt_ms,
            fmt_pct(self.pct_success),
            fmt_pct(self.pct_fast_ho),
            fmt_pct(self.pct_failure),
            fmt_pct(self.outage_pct)
        )
    }
}

impl KpiReport {
    pub fn row(&self) -> KpiRow {
        KpiRow {
            scheme: self.scheme,
            k_b: self.k_b,
            o_a3_db: self.o_a3_db,
            t_ttt_ms: self.t_ttt_ms,
            pct_success: self.pct_success,
            pct_fast_ho: self.pct_fast_ho,
            pct_failure: self.pct_failure,
            outage_pct: Some(self.outage_pct),
        }
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}\n", self.row().to_csv())
    }
}
