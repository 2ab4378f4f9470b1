//! Per-UE mobility state machine.
//!
//! One call to [`UeState::step`] advances a UE by one time step, after the
//! channel snapshot and the measurement lattice have been updated. Within the
//! step the order is: serving panel selection, beam management and handover
//! triggering (SSB instants only), handover execution or re-establishment,
//! then beam failure detection and radio link monitoring.

use crate::kpi::{Event, EventKind};
use crate::measurement::{select_serving_panel, MeasurementLattice};
use crate::radio::{db_to_lin, LinkSnapshot, RxArray};
use crate::scenario::{Attachment, ScenarioConfig};

use super::handover::{access_beam, evaluate_a3, prepare_handover, strongest, BeamManager};
use super::timers::{
    AccessOutcome, BfdCounter, BfdOutcome, BfrAttempts, HoAccess, RlfTimer, SinrFilter, TttTimer,
};

/// Parameters of the mobility procedures.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcedureConfig {
    pub rx: RxArray,
    pub k_b: usize,
    pub noise_mw: f64,
    pub o_a3_db: f64,
    pub t_ttt_ms: f64,
    pub o_p_db: f64,
    pub n_prep: usize,
    pub ho_interruption_ms: f64,
    pub t_hof_ms: f64,
    pub n_rep: usize,
    pub o_b_db: f64,
    pub l2_alpha: f64,
    pub rlq_alpha: f64,
    pub rlm_alpha: f64,
    pub c_bfi_max: u32,
    pub t_bfd_ms: f64,
    pub n_rach: u32,
    pub t_rach_ms: f64,
    pub gamma_out_db: f64,
    pub gamma_in_db: f64,
    pub t_rlf_ms: f64,
    pub reestablish_delay_ms: f64,
}

impl ProcedureConfig {
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        ProcedureConfig {
            rx: RxArray::for_model(cfg.ue_model),
            k_b: cfg.k_b,
            noise_mw: db_to_lin(cfg.noise_dbm()),
            o_a3_db: cfg.o_a3_db,
            t_ttt_ms: cfg.t_ttt_ms,
            o_p_db: cfg.o_p_db,
            n_prep: cfg.n_prep,
            ho_interruption_ms: cfg.ho_interruption_ms,
            t_hof_ms: cfg.t_hof_ms,
            n_rep: cfg.n_rep,
            o_b_db: cfg.o_b_db,
            l2_alpha: cfg.l2_alpha,
            rlq_alpha: cfg.rlq_alpha,
            rlm_alpha: cfg.rlm_alpha,
            c_bfi_max: cfg.c_bfi_max,
            t_bfd_ms: cfg.t_bfd_ms,
            n_rach: cfg.n_rach,
            t_rach_ms: cfg.t_rach_ms,
            gamma_out_db: cfg.gamma_out_db,
            gamma_in_db: cfg.gamma_in_db,
            t_rlf_ms: cfg.t_rlf_ms,
            reestablish_delay_ms: cfg.reestablish_delay_ms,
        }
    }
}

/// A (cell, beam, panel) link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Link {
    pub cell: usize,
    pub beam: usize,
    pub panel: usize,
}

impl From<Attachment> for Link {
    fn from(a: Attachment) -> Self {
        Link {
            cell: a.cell,
            beam: a.beam,
            panel: a.panel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Execution {
    pub source_cell: usize,
    pub target: Link,
    pub access: HoAccess,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recovery {
    pub target: Link,
    pub attempts: BfrAttempts,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    Connected,
    Executing(Execution),
    Reestablishing { until_ms: f64 },
}

/// What a step produced besides events.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    /// The UE could not receive data during this step.
    pub outage: bool,
    /// SINR of the serving link at the end of the step, if connected.
    pub serving_sinr_db: Option<f64>,
}

/// Mobility state of one UE under one procedure configuration.
#[derive(Debug, Clone)]
pub struct UeState {
    pub ue: u64,
    cfg: ProcedureConfig,
    serving: Link,
    phase: Phase,
    ttt: Vec<TttTimer>,
    beams: BeamManager,
    rlq: SinrFilter,
    rlm: SinrFilter,
    bfd: BfdCounter,
    rlf: RlfTimer,
    bfr: Option<Recovery>,
}

impl UeState {
    pub fn new(
        ue: u64,
        cfg: ProcedureConfig,
        serving: Link,
        n_cells: usize,
        n_beams: usize,
    ) -> Self {
        UeState {
            ue,
            serving,
            phase: Phase::Connected,
            ttt: vec![TttTimer::default(); n_cells],
            beams: BeamManager::new(n_beams, cfg.l2_alpha),
            rlq: SinrFilter::new(cfg.rlq_alpha),
            rlm: SinrFilter::new(cfg.rlm_alpha),
            bfd: BfdCounter::default(),
            rlf: RlfTimer::default(),
            bfr: None,
            cfg,
        }
    }

    pub fn serving(&self) -> Link {
        self.serving
    }

    pub fn phase(&self) -> &Phase {
        &self.phase
    }

    pub fn in_recovery(&self) -> bool {
        self.bfr.is_some()
    }

    pub fn bfi_count(&self) -> u32 {
        self.bfd.count()
    }

    fn sinr(&self, snap: &LinkSnapshot, link: Link) -> f64 {
        snap.sinr_db(
            self.cfg.rx,
            link.cell,
            link.beam,
            link.panel,
            self.cfg.k_b,
            self.cfg.noise_mw,
        )
    }

    /// Panel for `(cell, beam)`: the strongest L1 panel, ties to the lowest.
    fn best_panel_for(lat: &MeasurementLattice, cell: usize, beam: usize) -> usize {
        let l1 = lat.l1_panels(cell, beam);
        let mut best = 0;
        for (p, &v) in l1.iter().enumerate() {
            if v > l1[best] {
                best = p;
            }
        }
        best
    }

    /// Clear every per-link state machine after a change of serving cell.
    fn reset_link_state(&mut self) {
        self.ttt.iter_mut().for_each(TttTimer::reset);
        self.beams.reset();
        self.rlq.reset();
        self.rlm.reset();
        self.bfd.reset();
        self.rlf.reset();
        self.bfr = None;
    }

    fn declare_failure(
        &mut self,
        now_ms: f64,
        kind: EventKind,
        cell: usize,
        events: &mut Vec<Event>,
    ) {
        events.push(Event::new(now_ms, self.ue, kind, cell));
        self.reset_link_state();
        self.phase = Phase::Reestablishing {
            until_ms: now_ms + self.cfg.reestablish_delay_ms,
        };
    }

    /// Advance one step. `ssb` marks an SSB instant at which `lat` has just
    /// been updated.
    pub fn step(
        &mut self,
        now_ms: f64,
        ssb: bool,
        lat: &MeasurementLattice,
        snap: &LinkSnapshot,
        events: &mut Vec<Event>,
    ) -> StepOutcome {
        if let Phase::Reestablishing { until_ms } = self.phase {
            if now_ms >= until_ms {
                self.reestablish(now_ms, lat, snap, events);
            }
        }

        if self.phase == Phase::Connected && ssb && lat.is_ready() {
            self.ssb_procedures(now_ms, lat, events);
        }

        if let Phase::Executing(mut exec) = self.phase {
            let g = self.sinr(snap, exec.target);
            let c = &self.cfg;
            match exec
                .access
                .update(now_ms, g, c.gamma_out_db, c.ho_interruption_ms, c.t_hof_ms)
            {
                AccessOutcome::Pending => self.phase = Phase::Executing(exec),
                AccessOutcome::Success => {
                    let t = exec.target;
                    events.push(
                        Event::new(now_ms, self.ue, EventKind::HoSuccess, t.cell)
                            .beam(t.beam)
                            .panel(t.panel)
                            .from_cell(exec.source_cell),
                    );
                    self.serving = t;
                    self.reset_link_state();
                    self.phase = Phase::Connected;
                }
                AccessOutcome::Failure => {
                    let cell = exec.target.cell;
                    self.declare_failure(now_ms, EventKind::Hof, cell, events);
                    if let Some(e) = events.last_mut() {
                        e.from_cell = Some(exec.source_cell);
                    }
                }
            }
        } else if self.phase == Phase::Connected {
            self.link_monitoring(now_ms, lat, snap, events);
        }

        match self.phase {
            Phase::Connected => {
                let g = self.sinr(snap, self.serving);
                StepOutcome {
                    outage: !(g >= self.cfg.gamma_out_db),
                    serving_sinr_db: Some(g),
                }
            }
            _ => StepOutcome {
                outage: true,
                serving_sinr_db: None,
            },
        }
    }

    fn ssb_procedures(&mut self, now_ms: f64, lat: &MeasurementLattice, events: &mut Vec<Event>) {
        let s = self.serving;

        // Serving panel.
        let p = select_serving_panel(lat.l1_panels(s.cell, s.beam), s.panel, self.cfg.o_p_db);
        if p != s.panel {
            self.serving.panel = p;
            events.push(
                Event::new(now_ms, self.ue, EventKind::PanelSwitch, s.cell)
                    .beam(s.beam)
                    .panel(p),
            );
        }
        if self.bfr.is_some() {
            return;
        }

        // Beam reporting and switching. Each beam is reported with its
        // strongest panel.
        let per_beam: Vec<f64> = (0..lat.n_beams())
            .map(|b| {
                lat.l1_panels(s.cell, b)
                    .iter()
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        let reports: Vec<(usize, f64)> = strongest(&per_beam, self.cfg.n_rep)
            .into_iter()
            .map(|b| (b, per_beam[b]))
            .collect();
        if let Some(b) = self
            .beams
            .report(&reports, self.serving.beam, self.cfg.o_b_db)
        {
            let panel = select_serving_panel(
                lat.l1_panels(s.cell, b),
                self.serving.panel,
                self.cfg.o_p_db,
            );
            self.serving.beam = b;
            self.serving.panel = panel;
            self.rlq.reset();
            self.bfd.reset();
            events.push(
                Event::new(now_ms, self.ue, EventKind::BeamSwitch, s.cell)
                    .beam(b)
                    .panel(panel),
            );
        }

        // A3 triggering, preparation and the handover command.
        let target = evaluate_a3(
            lat.l3_cells(),
            s.cell,
            self.cfg.o_a3_db,
            self.cfg.t_ttt_ms,
            &mut self.ttt,
            now_ms,
        );
        if let Some(tc) = target {
            events.push(Event::new(now_ms, self.ue, EventKind::Report, tc).from_cell(s.cell));
            let prepared = prepare_handover(lat.l3_beams(tc), self.cfg.n_prep);
            let tb = access_beam(&prepared, lat.l1_beams(tc));
            let tp = Self::best_panel_for(lat, tc, tb);
            let t = Link {
                cell: tc,
                beam: tb,
                panel: tp,
            };
            events.push(
                Event::new(now_ms, self.ue, EventKind::HoCmd, tc)
                    .beam(tb)
                    .panel(tp)
                    .from_cell(s.cell),
            );
            self.reset_link_state();
            self.phase = Phase::Executing(Execution {
                source_cell: s.cell,
                target: t,
                access: HoAccess::new(now_ms),
            });
        }
    }

    fn link_monitoring(
        &mut self,
        now_ms: f64,
        lat: &MeasurementLattice,
        snap: &LinkSnapshot,
        events: &mut Vec<Event>,
    ) {
        let g = self.sinr(snap, self.serving);
        let rlq = self.rlq.update(g);
        let rlm = self.rlm.update(g);
        let c = self.cfg.clone();
        let cell = self.serving.cell;

        if let Some(mut rec) = self.bfr {
            let gt = self.sinr(snap, rec.target);
            match rec
                .attempts
                .update(now_ms, gt, c.gamma_out_db, c.n_rach, c.t_rach_ms)
            {
                AccessOutcome::Pending => self.bfr = Some(rec),
                AccessOutcome::Success => {
                    self.bfr = None;
                    self.serving = rec.target;
                    self.rlq.reset();
                    self.bfd.reset();
                    events.push(
                        Event::new(now_ms, self.ue, EventKind::BfrOk, cell)
                            .beam(rec.target.beam)
                            .panel(rec.target.panel),
                    );
                }
                AccessOutcome::Failure => {
                    self.declare_failure(now_ms, EventKind::RlfBfr, cell, events);
                    return;
                }
            }
        } else {
            let out = rlq < c.gamma_out_db;
            if self.bfd.update(now_ms, out, c.c_bfi_max, c.t_bfd_ms) == BfdOutcome::BeamFailure {
                events.push(
                    Event::new(now_ms, self.ue, EventKind::Bfd, cell).beam(self.serving.beam),
                );
                self.ttt.iter_mut().for_each(TttTimer::reset);
                let target = recovery_target(lat, snap, c.rx, cell);
                let mut rec = Recovery {
                    target,
                    attempts: BfrAttempts::new(now_ms),
                };
                let gt = self.sinr(snap, target);
                match rec
                    .attempts
                    .update(now_ms, gt, c.gamma_out_db, c.n_rach, c.t_rach_ms)
                {
                    AccessOutcome::Success => {
                        self.serving = target;
                        self.rlq.reset();
                        self.bfd.reset();
                        events.push(
                            Event::new(now_ms, self.ue, EventKind::BfrOk, cell)
                                .beam(target.beam)
                                .panel(target.panel),
                        );
                    }
                    AccessOutcome::Failure => {
                        self.declare_failure(now_ms, EventKind::RlfBfr, cell, events);
                        return;
                    }
                    AccessOutcome::Pending => self.bfr = Some(rec),
                }
            }
        }

        if self
            .rlf
            .update(now_ms, rlm, c.gamma_out_db, c.gamma_in_db, c.t_rlf_ms)
        {
            self.declare_failure(now_ms, EventKind::RlfTimer, cell, events);
        }
    }

    fn reestablish(
        &mut self,
        now_ms: f64,
        lat: &MeasurementLattice,
        snap: &LinkSnapshot,
        events: &mut Vec<Event>,
    ) {
        let link = if lat.is_ready() {
            let mut best = (0, 0);
            for c in 0..lat.n_cells() {
                for b in 0..lat.n_beams() {
                    if lat.l1_beam(c, b) > lat.l1_beam(best.0, best.1) {
                        best = (c, b);
                    }
                }
            }
            Link {
                cell: best.0,
                beam: best.1,
                panel: Self::best_panel_for(lat, best.0, best.1),
            }
        } else {
            crate::scenario::initial_attachment(snap, self.cfg.rx).into()
        };
        self.serving = link;
        self.reset_link_state();
        self.phase = Phase::Connected;
        events.push(
            Event::new(now_ms, self.ue, EventKind::Reestablished, link.cell)
                .beam(link.beam)
                .panel(link.panel),
        );
    }
}

/// Recovery beam: strongest L1 beam of the serving cell over all panels.
fn recovery_target(
    lat: &MeasurementLattice,
    snap: &LinkSnapshot,
    rx: RxArray,
    cell: usize,
) -> Link {
    let mut best = Link {
        cell,
        beam: 0,
        panel: 0,
    };
    let mut best_v = f64::NEG_INFINITY;
    for b in 0..snap.n_beams {
        for p in 0..rx.n_panels() {
            let v = if lat.is_ready() {
                lat.l1(cell, b, p)
            } else {
                snap.rsrp_dbm(rx, cell, b, p)
            };
            if v > best_v {
                best_v = v;
                best = Link {
                    cell,
                    beam: b,
                    panel: p,
                };
            }
        }
    }
    best
}
