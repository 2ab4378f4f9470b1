//! Scalar filter and selection rules shared by the measurement lattice.

use crate::error::{Result, SimError};
use crate::scenario::Panel;

/// IIR forgetting factor `(1/2)^(k/4)`.
pub fn forgetting_factor(k: f64) -> f64 {
    0.5f64.powf(k / 4.0)
}

/// Moving average of a window of dBm values, summed in the given order.
pub fn l1_filter(window: &[f64]) -> Result<f64> {
    if window.is_empty() {
        return Err(SimError::EmptyWindow);
    }
    let mut sum = 0.0;
    for &v in window {
        sum += v;
    }
    Ok(sum / window.len() as f64)
}

/// One IIR step. `prev = None` bootstraps to the current input.
///
/// Written as `prev + alpha * (current - prev)` so that a constant input is
/// reproduced exactly.
#[inline]
pub fn l3_iir(prev: Option<f64>, current: f64, alpha: f64) -> f64 {
    match prev {
        None => current,
        Some(_) if alpha >= 1.0 => current,
        Some(p) => p + alpha * (current - p),
    }
}

/// Cell quality from one cell's per-beam L1 values: the mean of the `n_str`
/// strongest beams above `p_thr_dbm`, or the strongest beam if none is above.
pub fn derive_cell_quality(l1_beams: &[f64], p_thr_dbm: f64, n_str: usize) -> f64 {
    let mut above = [(0.0f64, 0usize); 64];
    let mut scratch = Vec::new();
    let buf: &mut [(f64, usize)] = if l1_beams.len() <= above.len() {
        &mut above[..]
    } else {
        scratch.resize(l1_beams.len(), (0.0, 0));
        &mut scratch[..]
    };
    let mut n = 0;
    let mut max = f64::NEG_INFINITY;
    for (b, &v) in l1_beams.iter().enumerate() {
        if v > max {
            max = v;
        }
        if v > p_thr_dbm {
            buf[n] = (v, b);
            n += 1;
        }
    }
    if n == 0 {
        return max;
    }
    let set = &mut buf[..n];
    set.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let take = n_str.min(n);
    let mut sum = 0.0;
    for &(v, _) in &set[..take] {
        sum += v;
    }
    sum / take as f64
}

/// Serving panel after an L1 update: move to another panel only if it beats
/// the incumbent by more than `o_p_db`. Among challengers the strongest wins,
/// ties to the lower index.
pub fn select_serving_panel(l1_per_panel: &[f64], current: usize, o_p_db: f64) -> usize {
    let mut best = current;
    let mut best_v = l1_per_panel[current];
    for (p, &v) in l1_per_panel.iter().enumerate() {
        if p != current && v > l1_per_panel[current] + o_p_db && (best == current || v > best_v) {
            best = p;
            best_v = v;
        }
    }
    best
}

/// Panel holding the strongest L1 entry of a cell. `l1` is indexed
/// `[beam * n_panels + panel]`. Ties go to the lowest panel index.
pub fn select_best_panel(l1: &[f64], n_panels: usize) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for p in 0..n_panels {
        for v in l1.iter().skip(p).step_by(n_panels) {
            if *v > best_v {
                best_v = *v;
                best = p;
            }
        }
    }
    best
}

/// Panel scanned at SSB instant `ssb_index` under round-robin measurement.
pub fn a1_scan_panel(ssb_index: u64, order: &[Panel]) -> Panel {
    order[(ssb_index % order.len() as u64) as usize]
}
