//! Initial UE population.

use rand::Rng;

use crate::engine::rng::{substream, Stream};
use crate::geometry::MotionState;
use crate::radio::{LinkSnapshot, RxArray, UeChannel};
use crate::scenario::{Deployment, ScenarioConfig};

/// Serving link chosen at attachment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attachment {
    pub cell: usize,
    pub beam: usize,
    pub panel: usize,
}

/// A freshly dropped UE with its channel state at t = 0.
#[derive(Debug, Clone)]
pub struct SpawnedUe {
    pub id: u64,
    pub motion: MotionState,
    pub channel: UeChannel,
    pub attachment: Attachment,
}

/// Strongest (cell, beam, panel) by raw RSRP. Ties keep the lowest index.
pub fn initial_attachment(snapshot: &LinkSnapshot, rx: RxArray) -> Attachment {
    let mut best = Attachment {
        cell: 0,
        beam: 0,
        panel: 0,
    };
    let mut best_p = f64::NEG_INFINITY;
    for cell in 0..snapshot.n_cells {
        for beam in 0..snapshot.n_beams {
            for panel in 0..rx.n_panels() {
                let p = snapshot.rsrp_dbm(rx, cell, beam, panel);
                if p > best_p {
                    best_p = p;
                    best = Attachment { cell, beam, panel };
                }
            }
        }
    }
    best
}

/// Drop one UE uniformly in the region with a uniform heading.
pub fn spawn_ue(config: &ScenarioConfig, deployment: &Deployment, seed: u64, id: u64) -> SpawnedUe {
    let mut rng = substream(seed, Stream::Spawn, id, 0);
    let position = deployment.region.sample_uniform(&mut rng);
    let heading = rng.random::<f64>() * 360.0;
    let motion = MotionState::new(position, heading, config.speed_mps());
    let channel = UeChannel::new(config, deployment, seed, id);
    let mut snap = LinkSnapshot::new(deployment);
    channel.snapshot(deployment, &motion, &mut snap);
    let attachment = initial_attachment(&snap, RxArray::for_model(config.ue_model));
    SpawnedUe {
        id,
        motion,
        channel,
        attachment,
    }
}

/// Drop `config.n_ues` UEs. UE `i` depends only on `(seed, i)`.
pub fn spawn_ues(config: &ScenarioConfig, deployment: &Deployment, seed: u64) -> Vec<SpawnedUe> {
    (0..config.n_ues as u64)
        .map(|id| spawn_ue(config, deployment, seed, id))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{build_deployment, UeModel};

    #[test]
    fn population_size_and_speed() {
        let cfg = ScenarioConfig::default();
        let dep = build_deployment(&cfg);
        let ues = spawn_ues(&cfg, &dep, 3);
        assert_eq!(ues.len(), 420);
        for u in &ues {
            assert_eq!(u.motion.speed_mps, 30.0 / 3.6);
            assert!(dep.region.contains(u.motion.position));
        }
    }

    #[test]
    fn same_seed_same_drop() {
        let cfg = ScenarioConfig {
            n_ues: 20,
            ..Default::default()
        };
        let dep = build_deployment(&cfg);
        let a = spawn_ues(&cfg, &dep, 9);
        let b = spawn_ues(&cfg, &dep, 9);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.motion, y.motion);
            assert_eq!(x.attachment, y.attachment);
        }
        let c = spawn_ues(&cfg, &dep, 10);
        assert_ne!(a[0].motion.position, c[0].motion.position);
    }

    #[test]
    fn attachment_matches_exhaustive_scan() {
        for model in UeModel::ALL {
            for seed in 0..5 {
                let cfg = ScenarioConfig {
                    n_ues: 1,
                    ue_model: model,
                    ..Default::default()
                };
                let dep = build_deployment(&cfg);
                let ue = &spawn_ues(&cfg, &dep, seed)[0];
                let mut snap = LinkSnapshot::new(&dep);
                ue.channel.snapshot(&dep, &ue.motion, &mut snap);
                let rx = RxArray::for_model(model);
                let mut all = Vec::new();
                for c in 0..21 {
                    for b in 0..12 {
                        for p in 0..rx.n_panels() {
                            all.push((snap.rsrp_dbm(rx, c, b, p), c, b, p));
                        }
                    }
                }
                assert_eq!(all.len(), 252 * rx.n_panels());
                let max = all.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
                let a = ue.attachment;
                assert_eq!(snap.rsrp_dbm(rx, a.cell, a.beam, a.panel), max);
            }
        }
    }
}
