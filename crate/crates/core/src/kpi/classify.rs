//! Fast handover classification.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoHistoryEntry {
    pub time_ms: f64,
    pub from_cell: usize,
    pub to_cell: usize,
}

/// One UE's successful handovers, with re-establishments breaking the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HistoryItem {
    Handover(HoHistoryEntry),
    Reestablished,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FastHo {
    None,
    PingPong,
    ShortStay,
}

/// Label of a handover given the previous handover of the same chain.
/// The label belongs to the second handover of a fast pair.
#[inline]
pub fn fast_ho_label(prev: Option<&HoHistoryEntry>, cur: &HoHistoryEntry, t_fh_ms: f64) -> FastHo {
    match prev {
        Some(p) if p.to_cell == cur.from_cell && cur.time_ms - p.time_ms < t_fh_ms => {
            if cur.to_cell == p.from_cell {
                FastHo::PingPong
            } else {
                FastHo::ShortStay
            }
        }
        _ => FastHo::None,
    }
}

/// Label every handover of one UE's history, in order.
pub fn classify_fast_ho(history: &[HistoryItem], t_fh_ms: f64) -> Vec<FastHo> {
    let mut labels = Vec::new();
    let mut prev: Option<HoHistoryEntry> = None;
    for item in history {
        match item {
            HistoryItem::Reestablished => prev = None,
            HistoryItem::Handover(h) => {
                labels.push(fast_ho_label(prev.as_ref(), h, t_fh_ms));
                prev = Some(*h);
            }
        }
    }
    labels
}
