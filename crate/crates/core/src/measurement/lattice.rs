//! Per-UE measurement state: raw, L1 and L3 RSRP over (cell, beam, panel).

use crate::radio::{LinkSnapshot, RxArray};
use crate::scenario::{Panel, ScenarioConfig, UeModel};

use super::filters::{a1_scan_panel, derive_cell_quality, l3_iir, select_best_panel};

/// Filter parameters of the L1/L3 pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig {
    pub n_l1: usize,
    pub p_thr_dbm: f64,
    pub n_str: usize,
    pub alpha_cell: f64,
    pub alpha_beam: f64,
}

impl FilterConfig {
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        FilterConfig {
            n_l1: cfg.n_l1,
            p_thr_dbm: cfg.p_thr_dbm,
            n_str: cfg.n_str,
            alpha_cell: cfg.alpha_cell(),
            alpha_beam: cfg.alpha_beam(),
        }
    }
}

/// Measurement state of one UE.
///
/// Raw values are held between refreshes. Under round-robin scanning a panel
/// keeps its last scanned values until its next turn, and the stale values
/// enter the L1 window like fresh ones. No L1 or L3 output exists until every
/// panel has been scanned once.
#[derive(Debug, Clone)]
pub struct MeasurementLattice {
    model: UeModel,
    scan_order: Vec<Panel>,
    filter: FilterConfig,
    n_cells: usize,
    n_beams: usize,
    n_panels: usize,
    raw: Vec<f64>,
    /// SSB index of the last refresh, per panel.
    refreshed: Vec<Option<u64>>,
    /// L1 windows, `[slot][cell, beam, panel]`, slot 0 oldest.
    window: Vec<f64>,
    l1: Vec<f64>,
    best_panel: Vec<usize>,
    l1_beam: Vec<f64>,
    l3_beam: Vec<f64>,
    l3_cell: Vec<f64>,
    cq_l1: Vec<f64>,
    ready: bool,
    last_ssb: Option<u64>,
}

impl MeasurementLattice {
    pub fn new(
        model: UeModel,
        scan_order: &[Panel],
        filter: FilterConfig,
        n_cells: usize,
        n_beams: usize,
    ) -> Self {
        let n_panels = model.n_panels();
        let n = n_cells * n_beams * n_panels;
        MeasurementLattice {
            model,
            scan_order: scan_order.to_vec(),
            n_cells,
            n_beams,
            n_panels,
            raw: vec![f64::NAN; n],
            refreshed: vec![None; n_panels],
            window: vec![f64::NAN; n * filter.n_l1],
            l1: vec![f64::NAN; n],
            best_panel: vec![0; n_cells],
            l1_beam: vec![f64::NAN; n_cells * n_beams],
            l3_beam: vec![f64::NAN; n_cells * n_beams],
            l3_cell: vec![f64::NAN; n_cells],
            cq_l1: vec![f64::NAN; n_cells],
            ready: false,
            last_ssb: None,
            filter,
        }
    }

    pub fn for_config(cfg: &ScenarioConfig, n_cells: usize, n_beams: usize) -> Self {
        Self::new(
            cfg.ue_model,
            &cfg.a1_scan_order,
            FilterConfig::from_config(cfg),
            n_cells,
            n_beams,
        )
    }

    pub fn model(&self) -> UeModel {
        self.model
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_beams(&self) -> usize {
        self.n_beams
    }

    pub fn n_panels(&self) -> usize {
        self.n_panels
    }

    /// True once L1 and L3 outputs exist.
    pub fn is_ready(&self) -> bool {
        self.ready
    }

    /// Panels whose raw values refresh at SSB instant `ssb_index`.
    pub fn scanned_panels(&self, ssb_index: u64) -> std::ops::Range<usize> {
        match self.model {
            UeModel::MpueA1 => {
                let p = a1_scan_panel(ssb_index, &self.scan_order).index();
                p..p + 1
            }
            _ => 0..self.n_panels,
        }
    }

    #[inline]
    fn idx(&self, cell: usize, beam: usize, panel: usize) -> usize {
        (cell * self.n_beams + beam) * self.n_panels + panel
    }

    /// Process one SSB instant from a link snapshot.
    pub fn update_from_snapshot(&mut self, ssb_index: u64, snapshot: &LinkSnapshot) -> bool {
        let rx = RxArray::for_model(self.model);
        self.update(ssb_index, |c, b, p| snapshot.rsrp_dbm(rx, c, b, p))
    }

    /// Process one SSB instant. `raw(cell, beam, panel)` gives the current
    /// raw RSRP and is only called for the panels scanned at this instant.
    /// Returns true if L1/L3 outputs were (re)computed.
    pub fn update<F: FnMut(usize, usize, usize) -> f64>(
        &mut self,
        ssb_index: u64,
        mut raw: F,
    ) -> bool {
        self.last_ssb = Some(ssb_index);
        for p in self.scanned_panels(ssb_index) {
            for c in 0..self.n_cells {
                for b in 0..self.n_beams {
                    let i = self.idx(c, b, p);
                    self.raw[i] = raw(c, b, p);
                }
            }
            self.refreshed[p] = Some(ssb_index);
        }
        if self.refreshed.iter().any(Option::is_none) {
            return false;
        }

        let n = self.raw.len();
        let n_l1 = self.filter.n_l1;
        if !self.ready {
            for slot in 0..n_l1 {
                self.window[slot * n..(slot + 1) * n].copy_from_slice(&self.raw);
            }
        } else {
            self.window.copy_within(n.., 0);
            self.window[(n_l1 - 1) * n..].copy_from_slice(&self.raw);
        }
        let inv = n_l1 as f64;
        for i in 0..n {
            let mut sum = 0.0;
            for slot in 0..n_l1 {
                sum += self.window[slot * n + i];
            }
            self.l1[i] = sum / inv;
        }

        let per_cell = self.n_beams * self.n_panels;
        for c in 0..self.n_cells {
            let row = &self.l1[c * per_cell..(c + 1) * per_cell];
            let bp = select_best_panel(row, self.n_panels);
            self.best_panel[c] = bp;
            for b in 0..self.n_beams {
                self.l1_beam[c * self.n_beams + b] = row[b * self.n_panels + bp];
            }
            let beams = &self.l1_beam[c * self.n_beams..(c + 1) * self.n_beams];
            let q = derive_cell_quality(beams, self.filter.p_thr_dbm, self.filter.n_str);
            self.cq_l1[c] = q;
            let prev = if self.ready {
                Some(self.l3_cell[c])
            } else {
                None
            };
            self.l3_cell[c] = l3_iir(prev, q, self.filter.alpha_cell);
            for b in 0..self.n_beams {
                let i = c * self.n_beams + b;
                let prev = if self.ready {
                    Some(self.l3_beam[i])
                } else {
                    None
                };
                self.l3_beam[i] = l3_iir(prev, self.l1_beam[i], self.filter.alpha_beam);
            }
        }
        self.ready = true;
        true
    }

    pub fn raw(&self, cell: usize, beam: usize, panel: usize) -> f64 {
        self.raw[self.idx(cell, beam, panel)]
    }

    /// SSB index at which `panel` was last scanned.
    pub fn last_refresh(&self, panel: usize) -> Option<u64> {
        self.refreshed[panel]
    }

    pub fn l1(&self, cell: usize, beam: usize, panel: usize) -> f64 {
        self.l1[self.idx(cell, beam, panel)]
    }

    /// L1 of `(cell, beam)` on every panel.
    pub fn l1_panels(&self, cell: usize, beam: usize) -> &[f64] {
        let i = self.idx(cell, beam, 0);
        &self.l1[i..i + self.n_panels]
    }

    pub fn best_panel(&self, cell: usize) -> usize {
        self.best_panel[cell]
    }

    /// L1 beam RSRP of `(cell, beam)` on the cell's best panel.
    pub fn l1_beam(&self, cell: usize, beam: usize) -> f64 {
        self.l1_beam[cell * self.n_beams + beam]
    }

    pub fn l1_beams(&self, cell: usize) -> &[f64] {
        &self.l1_beam[cell * self.n_beams..(cell + 1) * self.n_beams]
    }

    /// Cell quality before L3 filtering.
    pub fn cell_quality_l1(&self, cell: usize) -> f64 {
        self.cq_l1[cell]
    }

    pub fn l3_beam(&self, cell: usize, beam: usize) -> f64 {
        self.l3_beam[cell * self.n_beams + beam]
    }

    pub fn l3_beams(&self, cell: usize) -> &[f64] {
        &self.l3_beam[cell * self.n_beams..(cell + 1) * self.n_beams]
    }

    pub fn l3_cell(&self, cell: usize) -> f64 {
        self.l3_cell[cell]
    }

    pub fn l3_cells(&self) -> &[f64] {
        &self.l3_cell
    }
}
