//! Event log I/O and KPI recomputation from a log.
//!
//! A log is JSON lines: one `run_header` line, the events in time order, then
//! one `ue_outage` line per UE.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

use super::classify::{classify_fast_ho, FastHo, HistoryItem, HoHistoryEntry};
use super::events::{Event, EventKind};
use super::report::{finalize, KpiCounts, KpiReport, RunHeader};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UeOutage {
    pub ue: u64,
    pub outage_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LogLine {
    Header { run_header: RunHeader },
    Outage { ue_outage: UeOutage },
    Event(Event),
}

pub fn write_event_log<W: Write>(
    out: &mut W,
    header: &RunHeader,
    events: &[Event],
    ue_outage_ms: &[f64],
) -> Result<()> {
    serde_json::to_writer(
        &mut *out,
        &LogLine::Header {
            run_header: header.clone(),
        },
    )?;
    out.write_all(b"\n")?;
    for e in events {
        serde_json::to_writer(&mut *out, e)?;
        out.write_all(b"\n")?;
    }
    for (ue, &ms) in ue_outage_ms.iter().enumerate() {
        let line = LogLine::Outage {
            ue_outage: UeOutage {
                ue: ue as u64,
                outage_ms: ms,
            },
        };
        serde_json::to_writer(&mut *out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// A parsed event log.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLog {
    pub header: RunHeader,
    pub events: Vec<Event>,
    pub ue_outage_ms: Vec<f64>,
}

pub fn read_event_log<R: BufRead>(input: R) -> Result<EventLog> {
    let mut header = None;
    let mut events = Vec::new();
    let mut outage: BTreeMap<u64, f64> = BTreeMap::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: LogLine = serde_json::from_str(&line).map_err(|e| SimError::EventLog {
            line: i + 1,
            reason: e.to_string(),
        })?;
        match parsed {
            LogLine::Header { run_header } => header = Some(run_header),
            LogLine::Outage { ue_outage } => {
                outage.insert(ue_outage.ue, ue_outage.outage_ms);
            }
            LogLine::Event(e) => events.push(e),
        }
    }
    let header = header.ok_or(SimError::EventLog {
        line: 0,
        reason: "missing run_header line".into(),
    })?;
    let mut ue_outage_ms = vec![0.0; header.n_ues];
    for (ue, ms) in outage {
        match ue_outage_ms.get_mut(ue as usize) {
            Some(slot) => *slot = ms,
            None => {
                return Err(SimError::EventLog {
                    line: 0,
                    reason: format!("outage for unknown UE {ue}"),
                })
            }
        }
    }
    Ok(EventLog {
        header,
        events,
        ue_outage_ms,
    })
}

/// Recompute the KPI report from a log in a single pass over per-UE
/// histories, without the simulator's online accumulator.
pub fn replay_events(log: &EventLog) -> KpiReport {
    let mut counts = KpiCounts::default();
    let mut histories: BTreeMap<u64, Vec<HistoryItem>> = BTreeMap::new();
    for e in &log.events {
        match e.event {
            EventKind::HoSuccess => {
                counts.n_success += 1;
                histories
                    .entry(e.ue)
                    .or_default()
                    .push(HistoryItem::Handover(HoHistoryEntry {
                        time_ms: e.time_ms,
                        from_cell: e.from_cell.unwrap_or(usize::MAX),
                        to_cell: e.cell,
                    }));
            }
            EventKind::Reestablished => {
                counts.n_reestablished += 1;
                histories
                    .entry(e.ue)
                    .or_default()
                    .push(HistoryItem::Reestablished);
            }
            EventKind::Hof => counts.n_hof += 1,
            EventKind::RlfTimer => counts.n_rlf_timer += 1,
            EventKind::RlfBfr => counts.n_rlf_bfr += 1,
            _ => {}
        }
    }
    for h in histories.values() {
        for label in classify_fast_ho(h, log.header.t_fh_ms) {
            match label {
                FastHo::PingPong => counts.n_pingpong += 1,
                FastHo::ShortStay => counts.n_shortstay += 1,
                FastHo::None => {}
            }
        }
    }
    finalize(&log.header, &counts, log.ue_outage_ms.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ScenarioConfig;

    #[test]
    fn log_round_trip() {
        let cfg = ScenarioConfig {
            n_ues: 2,
            ..Default::default()
        };
        let header = RunHeader::new(&cfg, 4);
        let events = vec![
            Event::new(100.0, 0, EventKind::HoSuccess, 3)
                .beam(2)
                .panel(1)
                .from_cell(0),
            Event::new(150.0, 1, EventKind::RlfTimer, 5),
            Event::new(350.0, 1, EventKind::Reestablished, 4)
                .beam(0)
                .panel(0),
            Event::new(400.0, 0, EventKind::HoSuccess, 0)
                .beam(2)
                .panel(1)
                .from_cell(3),
        ];
        let mut buf = Vec::new();
        write_event_log(&mut buf, &header, &events, &[10.0, 220.0]).unwrap();
        let log = read_event_log(buf.as_slice()).unwrap();
        assert_eq!(log.header, header);
        assert_eq!(log.events, events);
        assert_eq!(log.ue_outage_ms, vec![10.0, 220.0]);
        let r = replay_events(&log);
        assert_eq!(r.n_success, 2);
        assert_eq!(r.n_pingpong, 1);
        assert_eq!(r.n_rlf_timer, 1);
        assert_eq!(r.attempts, 3);
    }

    #[test]
    fn malformed_line_reports_position() {
        let err = read_event_log("{\"nope\": 1}\n".as_bytes()).unwrap_err();
        assert!(matches!(err, SimError::EventLog { line: 1, .. }));
    }
}
