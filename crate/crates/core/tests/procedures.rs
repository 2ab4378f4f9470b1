//! UE state machine on synthetic channels.
//!
//! Two cells on two sites with four beams each. The measurement lattice and
//! the link snapshot are driven separately so that what the UE measures and
//! what its links actually deliver can disagree on purpose.

use mpue_sim::kpi::{Event, EventKind};
use mpue_sim::measurement::{FilterConfig, MeasurementLattice};
use mpue_sim::procedures::{Link, Phase, ProcedureConfig, UeState};
use mpue_sim::radio::LinkSnapshot;
use mpue_sim::scenario::{Panel, ScenarioConfig, UeModel};
use proptest::prelude::*;

const N_CELLS: usize = 2;
const N_BEAMS: usize = 4;

fn config(model: UeModel) -> ScenarioConfig {
    ScenarioConfig {
        ue_model: model,
        k_b: 1,
        ..Default::default()
    }
}

struct Rig {
    ue: UeState,
    lat: MeasurementLattice,
    events: Vec<Event>,
    outages: Vec<(f64, bool, Option<f64>)>,
}

impl Rig {
    fn new(cfg: &ScenarioConfig, serving: Link) -> Self {
        let pc = ProcedureConfig::from_config(cfg);
        let filter = FilterConfig {
            n_l1: 1,
            p_thr_dbm: -200.0,
            n_str: 1,
            alpha_cell: 1.0,
            alpha_beam: 1.0,
        };
        Rig {
            ue: UeState::new(0, pc, serving, N_CELLS, N_BEAMS),
            lat: MeasurementLattice::new(
                cfg.ue_model,
                &[Panel::P2, Panel::P1, Panel::P3],
                filter,
                N_CELLS,
                N_BEAMS,
            ),
            events: Vec::new(),
            outages: Vec::new(),
        }
    }

    /// Run `steps` steps of 10 ms. `meas(c, b, p)` feeds the lattice and
    /// `links` gives the isotropic powers behind the SINR.
    fn run(&mut self, steps: u64, meas: impl Fn(usize, usize, usize) -> f64, links: &[Vec<f64>]) {
        let snap = LinkSnapshot::from_powers(links, &[0, 1], &[[0.0; 3], [0.0; 3]]);
        let start = self.outages.len() as u64;
        for k in start..start + steps {
            let now = 10.0 * k as f64;
            let ssb = k % 2 == 0;
            if ssb {
                self.lat.update(k / 2, &meas);
            }
            let out = self.ue.step(now, ssb, &self.lat, &snap, &mut self.events);
            self.outages.push((now, out.outage, out.serving_sinr_db));
        }
    }

    fn kinds(&self) -> Vec<(f64, EventKind)> {
        self.events
            .iter()
            .filter(|e| !matches!(e.event, EventKind::BeamSwitch | EventKind::PanelSwitch))
            .map(|e| (e.time_ms, e.event))
            .collect()
    }
}

fn flat(c0: f64, c1: f64) -> Vec<Vec<f64>> {
    vec![vec![c0; N_BEAMS], vec![c1; N_BEAMS]]
}

const SERVE_0: Link = Link {
    cell: 0,
    beam: 0,
    panel: 0,
};

#[test]
fn handover_fires_after_ttt_and_completes_after_interruption() {
    let cfg = config(UeModel::Isotropic);
    let mut rig = Rig::new(&cfg, SERVE_0);
    // Measured: the neighbour is 10 dB stronger. Delivered: both links at
    // 0 dB SINR, so neither link monitoring nor access interferes.
    let meas = flat(-70.0, -60.0);
    rig.run(30, |c, b, _| meas[c][b], &flat(-65.0, -65.0));
    assert_eq!(
        rig.kinds(),
        vec![
            (80.0, EventKind::Report),
            (80.0, EventKind::HoCmd),
            (130.0, EventKind::HoSuccess)
        ]
    );
    let ok = rig
        .events
        .iter()
        .find(|e| e.event == EventKind::HoSuccess)
        .unwrap();
    assert_eq!((ok.cell, ok.from_cell), (1, Some(0)));
    assert_eq!(rig.ue.serving().cell, 1);
    // Interrupted from the command up to and including the success step.
    for &(t, outage, _) in &rig.outages {
        if (80.0..130.0).contains(&t) {
            assert!(outage, "no outage at {t}");
        }
    }
}

#[test]
fn handover_failure_when_target_link_is_weak() {
    let cfg = config(UeModel::Isotropic);
    let mut rig = Rig::new(&cfg, SERVE_0);
    let meas = flat(-70.0, -60.0);
    rig.run(60, |c, b, _| meas[c][b], &flat(-60.0, -80.0));
    let k = rig.kinds();
    assert_eq!(
        k[..3],
        [
            (80.0, EventKind::Report),
            (80.0, EventKind::HoCmd),
            (280.0, EventKind::Hof)
        ]
    );
    // Re-establishment after the delay, to the strongest measured cell.
    assert_eq!(k[3], (480.0, EventKind::Reestablished));
    assert_eq!(
        rig.events
            .iter()
            .find(|e| e.event == EventKind::Reestablished)
            .unwrap()
            .cell,
        1
    );
    let hof = rig
        .events
        .iter()
        .find(|e| e.event == EventKind::Hof)
        .unwrap();
    assert_eq!((hof.cell, hof.from_cell), (1, Some(0)));
}

#[test]
fn beam_failure_then_exhausted_recovery() {
    let cfg = config(UeModel::Isotropic);
    let mut rig = Rig::new(&cfg, SERVE_0);
    let meas = flat(-60.0, -80.0);
    // SINR of the serving link is -20 dB throughout.
    rig.run(29, |c, b, _| meas[c][b], &flat(-80.0, -60.0));
    let k = rig.kinds();
    assert_eq!(k[0], (20.0, EventKind::Bfd));
    assert_eq!(k[1], (80.0, EventKind::RlfBfr));
    assert_eq!(k[2], (280.0, EventKind::Reestablished));
    assert!(matches!(rig.ue.phase(), Phase::Connected));
}

#[test]
fn rlf_timer_without_beam_failure() {
    let cfg = ScenarioConfig {
        c_bfi_max: 10_000,
        t_rlf_ms: 300.0,
        ..config(UeModel::Isotropic)
    };
    let mut rig = Rig::new(&cfg, SERVE_0);
    let meas = flat(-60.0, -80.0);
    rig.run(40, |c, b, _| meas[c][b], &flat(-80.0, -60.0));
    assert_eq!(rig.kinds()[0], (300.0, EventKind::RlfTimer));
    assert!(rig.outages.iter().all(|o| o.1));
}

#[test]
fn recovery_picks_strongest_measured_beam_of_serving_cell() {
    let cfg = config(UeModel::Isotropic);
    let mut rig = Rig::new(&cfg, SERVE_0);
    // Beam 3 is measured 0.5 dB above the serving beam: inside the beam
    // switching offset, so no switch, but it is the recovery target.
    let meas = [vec![-70.0, -75.0, -75.0, -69.5], vec![-90.0; N_BEAMS]];
    let links = vec![vec![-80.0, -80.0, -80.0, -60.0], vec![-60.0; N_BEAMS]];
    rig.run(10, |c, b, _| meas[c][b], &links);
    let k = rig.kinds();
    assert_eq!(k, vec![(20.0, EventKind::Bfd), (20.0, EventKind::BfrOk)]);
    let ok = rig
        .events
        .iter()
        .find(|e| e.event == EventKind::BfrOk)
        .unwrap();
    assert_eq!((ok.cell, ok.beam), (0, Some(3)));
    assert_eq!(
        rig.ue.serving(),
        Link {
            cell: 0,
            beam: 3,
            panel: 0
        }
    );
}

#[test]
fn recovery_target_searches_panels_too() {
    let cfg = config(UeModel::MpueA3);
    let mut rig = Rig::new(&cfg, SERVE_0);
    let meas = |c: usize, b: usize, p: usize| match (c, b, p) {
        (0, 0, 0) => -70.0,
        (0, 0, _) => -73.0,
        (0, 2, 1) => -69.6,
        (0, _, _) => -95.0,
        _ => -100.0,
    };
    let links = vec![vec![-80.0, -80.0, -60.0, -80.0], vec![-60.0; N_BEAMS]];
    rig.run(10, meas, &links);
    let ok = rig
        .events
        .iter()
        .find(|e| e.event == EventKind::BfrOk)
        .unwrap();
    assert_eq!((ok.beam, ok.panel), (Some(2), Some(1)));
}

#[test]
fn outage_tracks_serving_sinr_when_connected() {
    let cfg = config(UeModel::Isotropic);
    let mut rig = Rig::new(&cfg, SERVE_0);
    let meas = flat(-60.0, -80.0);
    rig.run(20, |c, b, _| meas[c][b], &flat(-60.0, -65.0));
    for &(_, outage, g) in &rig.outages {
        let g = g.expect("connected");
        assert_eq!(outage, g < cfg.gamma_out_db);
    }
}

fn power_grid() -> impl Strategy<Value = Vec<Vec<Vec<f64>>>> {
    // 30 SSB periods of per-(cell, beam) powers.
    prop::collection::vec(
        prop::collection::vec(prop::collection::vec(-110.0..-50.0f64, N_BEAMS), N_CELLS),
        30,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// With thresholds pushed to minus infinity no link can fail.
    #[test]
    fn no_failures_with_unreachable_thresholds(grid in power_grid(), mpue in any::<bool>()) {
        let model = if mpue { UeModel::MpueA1 } else { UeModel::Isotropic };
        let cfg = ScenarioConfig {
            gamma_out_db: -1e9,
            gamma_in_db: -1e9 + 1.0,
            ..config(model)
        };
        let mut rig = Rig::new(&cfg, SERVE_0);
        for powers in &grid {
            rig.run(2, |c, b, p| powers[c][b] - p as f64, powers);
        }
        for e in &rig.events {
            prop_assert!(!e.event.is_failure(), "{:?}", e);
            prop_assert!(e.event != EventKind::Bfd);
        }
        prop_assert!(rig.outages.iter().filter(|o| o.2.is_some()).all(|o| !o.1));
    }

    /// Every failure is followed by exactly one re-establishment after the
    /// configured delay, and nothing else happens in between.
    #[test]
    fn failures_lead_to_reestablishment(grid in power_grid()) {
        let cfg = config(UeModel::Isotropic);
        let mut rig = Rig::new(&cfg, SERVE_0);
        for powers in &grid {
            let links: Vec<Vec<f64>> = powers.iter().map(|r| r.iter().map(|v| v - 15.0).collect()).collect();
            rig.run(2, |c, b, _| powers[c][b], &links);
        }
        let end = 10.0 * (rig.outages.len() - 1) as f64;
        for (i, e) in rig.events.iter().enumerate() {
            if !e.event.is_failure() {
                continue;
            }
            let due = e.time_ms + cfg.reestablish_delay_ms;
            match rig.events.get(i + 1) {
                Some(next) => {
                    prop_assert_eq!(next.event, EventKind::Reestablished);
                    prop_assert_eq!(next.time_ms, due);
                }
                None => prop_assert!(due > end),
            }
        }
    }
}
