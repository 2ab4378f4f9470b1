//! Handover triggering, preparation and beam reporting rules.

use crate::measurement::l3_iir;

use super::timers::TttTimer;

/// Indices of `values` sorted by value descending, ties to the lower index,
/// truncated to `n`.
pub fn strongest(values: &[f64], n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(n);
    idx
}

/// Evaluate the A3 entering condition `l3[serving] + o_a3 < l3[c]` for every
/// neighbour, advancing its time-to-trigger timer. Returns the neighbour to
/// report: among those whose timer has expired, the one with the highest
/// L3 cell quality (ties to the lower index).
pub fn evaluate_a3(
    l3_cells: &[f64],
    serving: usize,
    o_a3_db: f64,
    t_ttt_ms: f64,
    timers: &mut [TttTimer],
    now_ms: f64,
) -> Option<usize> {
    let threshold = l3_cells[serving] + o_a3_db;
    let mut target: Option<usize> = None;
    for (c, &q) in l3_cells.iter().enumerate() {
        if c == serving {
            timers[c].reset();
            continue;
        }
        if timers[c].update(now_ms, threshold < q, t_ttt_ms)
            && target.is_none_or(|t| q > l3_cells[t])
        {
            target = Some(c);
        }
    }
    target
}

/// Beams of the target cell reserved for contention-free access: the
/// `n_prep` strongest by reported L3 beam RSRP.
pub fn prepare_handover(l3_beams: &[f64], n_prep: usize) -> Vec<usize> {
    strongest(l3_beams, n_prep)
}

/// Access beam among the prepared ones: strongest by current L1 beam RSRP,
/// ties to the lower beam index.
pub fn access_beam(prepared: &[usize], l1_beams: &[f64]) -> usize {
    let mut best = prepared[0];
    for &b in &prepared[1..] {
        if l1_beams[b] > l1_beams[best] || (l1_beams[b] == l1_beams[best] && b < best) {
            best = b;
        }
    }
    best
}

/// Network-side L2 filtering of reported beams and the beam switch rule.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamManager {
    alpha: f64,
    l2: Vec<Option<f64>>,
}

impl BeamManager {
    pub fn new(n_beams: usize, alpha: f64) -> Self {
        BeamManager {
            alpha,
            l2: vec![None; n_beams],
        }
    }

    pub fn l2(&self, beam: usize) -> Option<f64> {
        self.l2[beam]
    }

    pub fn reset(&mut self) {
        self.l2.iter_mut().for_each(|v| *v = None);
    }

    /// Filter one report of `(beam, L1 RSRP)` pairs and decide on a switch.
    /// A reported beam replaces the serving one if its L2 value exceeds the
    /// serving beam's by more than `o_b_db`. A serving beam that has never
    /// been reported loses to any reported beam.
    pub fn report(
        &mut self,
        reports: &[(usize, f64)],
        serving: usize,
        o_b_db: f64,
    ) -> Option<usize> {
        for &(b, v) in reports {
            self.l2[b] = Some(l3_iir(self.l2[b], v, self.alpha));
        }
        let mut best: Option<(usize, f64)> = None;
        for &(b, _) in reports {
            if b == serving {
                continue;
            }
            let v = self.l2[b].expect("reported beam has an L2 value");
            if best.is_none_or(|(bb, bv)| v > bv || (v == bv && b < bb)) {
                best = Some((b, v));
            }
        }
        let (cand, v) = best?;
        match self.l2[serving] {
            Some(s) if v <= s + o_b_db => None,
            _ => Some(cand),
        }
    }
}
