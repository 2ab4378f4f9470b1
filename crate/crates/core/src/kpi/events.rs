//! Mobility event records and the JSON-lines event log.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// A3 measurement report sent for `cell`.
    Report,
    /// Handover command towards `cell`, beam and panel chosen for access.
    HoCmd,
    /// Access to `cell` completed; `from_cell` is the source.
    HoSuccess,
    /// Handover failure towards `cell`.
    Hof,
    /// Radio link failure on `cell` after the monitoring timer expired.
    RlfTimer,
    /// Radio link failure on `cell` after beam failure recovery gave up.
    RlfBfr,
    /// Beam failure detected on the serving beam.
    Bfd,
    /// Beam failure recovery succeeded on `beam`.
    BfrOk,
    /// Connection re-established on `cell`.
    Reestablished,
    BeamSwitch,
    PanelSwitch,
}

impl EventKind {
    pub fn is_failure(self) -> bool {
        matches!(
            self,
            EventKind::Hof | EventKind::RlfTimer | EventKind::RlfBfr
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time_ms: f64,
    pub ue: u64,
    pub event: EventKind,
    pub cell: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beam: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panel: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from_cell: Option<usize>,
}

impl Event {
    pub fn new(time_ms: f64, ue: u64, event: EventKind, cell: usize) -> Self {
        Event {
            time_ms,
            ue,
            event,
            cell,
            beam: None,
            panel: None,
            from_cell: None,
        }
    }

    pub fn beam(mut self, beam: usize) -> Self {
        self.beam = Some(beam);
        self
    }

    pub fn panel(mut self, panel: usize) -> Self {
        self.panel = Some(panel);
        self
    }

    pub fn from_cell(mut self, cell: usize) -> Self {
        self.from_cell = Some(cell);
        self
    }
}
