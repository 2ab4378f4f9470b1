//! Mobility KPIs: event records, fast handover classification, outage and
//! the final report, plus an independent replay from the event log.

pub mod classify;
pub mod events;
pub mod replay;
pub mod report;

pub use classify::{classify_fast_ho, fast_ho_label, FastHo, HistoryItem, HoHistoryEntry};
pub use events::{Event, EventKind};
pub use replay::{read_event_log, replay_events, write_event_log, EventLog, LogLine, UeOutage};
pub use report::{finalize, fmt_pct, KpiCounts, KpiReport, KpiRow, RunHeader, UeKpi, CSV_HEADER};
