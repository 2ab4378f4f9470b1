//! The time-stepped simulation loop.
//!
//! UEs do not interact: interference is evaluated from the mean co-scheduling
//! load, so every UE is simulated for the whole run on its own and the
//! results are merged in UE order. Several configurations that share the
//! same physics can be run as a batch over one channel realisation, each with
//! its own procedures and KPIs; configurations that also share measurement
//! settings share one measurement lattice.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Result, SimError};
use crate::geometry::step_position;
use crate::kpi::{finalize, Event, KpiCounts, KpiReport, RunHeader, UeKpi};
use crate::measurement::MeasurementLattice;
use crate::procedures::{ProcedureConfig, UeState};
use crate::radio::{LinkSnapshot, RxArray};
use crate::scenario::{build_deployment, initial_attachment, spawn_ue, Deployment, ScenarioConfig};

use super::rng::{substream, Stream};

/// Optional per-step traces of the first configuration of a batch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TraceOptions {
    pub motion: bool,
    pub links: bool,
    pub meas: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Worker threads; 1 runs on the calling thread.
    pub parallelism: usize,
    /// Keep the event log of every configuration.
    pub keep_events: bool,
    pub traces: TraceOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            parallelism: 1,
            keep_events: false,
            traces: TraceOptions::default(),
        }
    }
}

pub const MOTION_TRACE_HEADER: &str = "time_ms,ue,x,y,heading";
pub const LINK_TRACE_HEADER: &str = "time_ms,ue,cell,beam,panel,rsrp_dbm,sinr_db";
pub const MEAS_TRACE_HEADER: &str = "time_ms,ue,cell,l3_cell_quality";

/// Trace CSV bodies, one line per record, UE-major.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Traces {
    pub motion: String,
    pub links: String,
    pub meas: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub header: RunHeader,
    pub report: KpiReport,
    /// Events ordered by time, then UE. Empty unless requested.
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOutput {
    pub runs: Vec<RunOutput>,
    pub traces: Traces,
}

struct UeResult {
    kpis: Vec<UeKpi>,
    events: Vec<Vec<Event>>,
    traces: Traces,
}

struct Plan<'a> {
    configs: &'a [ScenarioConfig],
    deployment: Deployment,
    /// Lattice group of each configuration.
    group_of: Vec<usize>,
    /// A representative configuration of each lattice group.
    groups: Vec<usize>,
    seed: u64,
    keep_events: bool,
    traces: TraceOptions,
}

fn plan<'a>(configs: &'a [ScenarioConfig], seed: u64, opts: &RunOptions) -> Result<Plan<'a>> {
    let first = configs
        .first()
        .ok_or_else(|| SimError::invalid("configs", "batch is empty"))?;
    for c in configs {
        c.validate()?;
        if !first.same_physics(c) {
            return Err(SimError::invalid(
                "configs",
                "batched configurations must share deployment, channel and timing",
            ));
        }
    }
    let mut groups: Vec<usize> = Vec::new();
    let mut group_of = Vec::with_capacity(configs.len());
    for (i, c) in configs.iter().enumerate() {
        match groups.iter().position(|&g| configs[g].same_measurement(c)) {
            Some(g) => group_of.push(g),
            None => {
                groups.push(i);
                group_of.push(groups.len() - 1);
            }
        }
    }
    Ok(Plan {
        configs,
        deployment: build_deployment(first),
        group_of,
        groups,
        seed,
        keep_events: opts.keep_events,
        traces: opts.traces,
    })
}

fn simulate_ue(plan: &Plan<'_>, ue: u64) -> UeResult {
    let base = &plan.configs[0];
    let dep = &plan.deployment;
    let n_cells = dep.n_cells();
    let n_beams = dep.cells[0].beams.len();
    let dt_ms = base.time_step_ms;
    let dt_s = dt_ms / 1000.0;
    let omega = base.omega as u64;

    let spawned = spawn_ue(base, dep, plan.seed, ue);
    let mut motion = spawned.motion;
    let mut channel = spawned.channel;
    let mut wp_rng = substream(plan.seed, Stream::Waypoint, ue, 0);
    let mut snap = LinkSnapshot::new(dep);
    channel.snapshot(dep, &motion, &mut snap);

    let mut lattices: Vec<MeasurementLattice> = plan
        .groups
        .iter()
        .map(|&g| MeasurementLattice::for_config(&plan.configs[g], n_cells, n_beams))
        .collect();
    let mut states: Vec<UeState> = plan
        .configs
        .iter()
        .map(|c| {
            let pc = ProcedureConfig::from_config(c);
            let att = initial_attachment(&snap, pc.rx);
            UeState::new(ue, pc, att.into(), n_cells, n_beams)
        })
        .collect();
    let mut kpis: Vec<UeKpi> = plan.configs.iter().map(|c| UeKpi::new(c.t_fh_ms)).collect();
    let mut events: Vec<Vec<Event>> = vec![Vec::new(); plan.configs.len()];
    let mut traces = Traces::default();
    let mut scratch: Vec<Event> = Vec::new();
    let trace_rx = RxArray::for_model(base.ue_model);

    for step in 0..base.n_steps() {
        let now = step as f64 * dt_ms;
        if step > 0 {
            let before = motion.odometer_m;
            motion = step_position(&motion, dt_s, &dep.region, &mut wp_rng);
            channel.advance(motion.odometer_m - before);
            channel.snapshot(dep, &motion, &mut snap);
        }
        let ssb = step % omega == 0;
        if ssb {
            for lat in lattices.iter_mut() {
                lat.update_from_snapshot(step / omega, &snap);
            }
        }
        for (i, state) in states.iter_mut().enumerate() {
            scratch.clear();
            let out = state.step(now, ssb, &lattices[plan.group_of[i]], &snap, &mut scratch);
            for e in &scratch {
                kpis[i].on_event(e);
            }
            kpis[i].on_step(out.outage);
            if plan.keep_events {
                events[i].extend_from_slice(&scratch);
            }
            if i == 0 && plan.traces.links {
                if let Some(g) = out.serving_sinr_db {
                    let s = state.serving();
                    let rsrp = snap.rsrp_dbm(trace_rx, s.cell, s.beam, s.panel);
                    let _ = writeln!(
                        traces.links,
                        "{now},{ue},{},{},{},{rsrp:.4},{g:.4}",
                        s.cell, s.beam, s.panel
                    );
                }
            }
        }
        if plan.traces.motion {
            let p = motion.position;
            let _ = writeln!(
                traces.motion,
                "{now},{ue},{:.4},{:.4},{:.4}",
                p.x, p.y, motion.heading_deg
            );
        }
        if plan.traces.meas && ssb {
            let lat = &lattices[plan.group_of[0]];
            if lat.is_ready() {
                for (c, q) in lat.l3_cells().iter().enumerate() {
                    let _ = writeln!(traces.meas, "{now},{ue},{c},{q:.4}");
                }
            }
        }
    }
    UeResult {
        kpis,
        events,
        traces,
    }
}

/// Run a batch of configurations over one channel realisation.
pub fn run_batch(configs: &[ScenarioConfig], seed: u64, opts: &RunOptions) -> Result<BatchOutput> {
    let plan = plan(configs, seed, opts)?;
    let n_ues = configs[0].n_ues as u64;
    let results: Vec<UeResult> = if opts.parallelism <= 1 {
        (0..n_ues).map(|ue| simulate_ue(&plan, ue)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.parallelism)
            .build()
            .map_err(|e| SimError::invalid("parallelism", e.to_string()))?;
        pool.install(|| {
            (0..n_ues)
                .into_par_iter()
                .map(|ue| simulate_ue(&plan, ue))
                .collect()
        })
    };

    let mut traces = Traces::default();
    for r in &results {
        traces.motion.push_str(&r.traces.motion);
        traces.links.push_str(&r.traces.links);
        traces.meas.push_str(&r.traces.meas);
    }

    let runs = configs
        .iter()
        .enumerate()
        .map(|(i, cfg)| {
            let header = RunHeader::new(cfg, seed);
            let mut counts = KpiCounts::default();
            let mut outage = Vec::with_capacity(results.len());
            let mut events = Vec::new();
            for r in &results {
                counts.add(&r.kpis[i].counts);
                outage.push(r.kpis[i].outage_steps as f64 * cfg.time_step_ms);
                events.extend_from_slice(&r.events[i]);
            }
            events.sort_by(|a, b| a.time_ms.total_cmp(&b.time_ms).then(a.ue.cmp(&b.ue)));
            let report = finalize(&header, &counts, outage);
            RunOutput {
                header,
                report,
                events,
            }
        })
        .collect();
    Ok(BatchOutput { runs, traces })
}

/// Run one configuration and return its KPI report.
pub fn run_simulation(config: &ScenarioConfig, seed: u64) -> Result<KpiReport> {
    let out = run_batch(std::slice::from_ref(config), seed, &RunOptions::default())?;
    Ok(out
        .runs
        .into_iter()
        .next()
        .expect("one run per config")
        .report)
}
