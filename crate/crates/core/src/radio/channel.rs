//! Per-UE channel state and the per-step link snapshot.

use crate::engine::rng::{substream, Stream};
use crate::geometry::{
    direction_to, panel_boresight, wrap_deg, MotionState, PanelOrientation, Point3,
};
use crate::scenario::{Deployment, LosMode, Panel, ScenarioConfig, UeModel};

use super::antenna::RxPanelPattern;
use super::fading::{FastFading, ShadowFading};
use super::pathloss::path_loss_db;
use super::{db_to_lin, SPEED_OF_LIGHT};

/// Receive antenna arrangement. Both MPUE measurement schemes share the
/// three-panel array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RxArray {
    Isotropic,
    Mpue,
}

impl RxArray {
    pub fn for_model(model: UeModel) -> RxArray {
        if model.is_multi_panel() {
            RxArray::Mpue
        } else {
            RxArray::Isotropic
        }
    }

    pub fn n_panels(self) -> usize {
        match self {
            RxArray::Isotropic => 1,
            RxArray::Mpue => 3,
        }
    }
}

#[derive(Debug, Clone)]
struct ChannelParams {
    f_ghz: f64,
    los_mode: LosMode,
    tx_power_dbm: f64,
    penetration_loss_db: f64,
    ue_height_m: f64,
    panels: [PanelOrientation; 3],
}

/// Shadowing and fading state of one UE towards every site and beam.
#[derive(Debug, Clone)]
pub struct UeChannel {
    shadow: ShadowFading,
    fading: FastFading,
    params: ChannelParams,
}

impl UeChannel {
    pub fn new(config: &ScenarioConfig, deployment: &Deployment, seed: u64, ue: u64) -> Self {
        let n_links = deployment.n_beams_total();
        let doppler_hz = config.speed_mps() * config.carrier_frequency_ghz * 1e9 / SPEED_OF_LIGHT;
        let shadow = ShadowFading::new(
            deployment.sites.len(),
            config.shadow_sigma_db,
            config.shadow_decorrelation_m,
            config.shadow_fading,
            substream(seed, Stream::Shadow, ue, 0),
        );
        let fading = FastFading::new(
            n_links,
            config.n_sinusoids,
            config.rician_k_db,
            doppler_hz,
            config.time_step_ms / 1000.0,
            config.fast_fading,
            substream(seed, Stream::FastFading, ue, 0),
        );
        UeChannel {
            shadow,
            fading,
            params: ChannelParams {
                f_ghz: config.carrier_frequency_ghz,
                los_mode: config.los_mode,
                tx_power_dbm: config.tx_power_dbm,
                penetration_loss_db: config.penetration_loss_db,
                ue_height_m: config.ue_height_m,
                panels: Panel::ALL.map(|p| PanelOrientation::new(p, config.panel_elevation_deg)),
            },
        }
    }

    /// Advance all random processes by one time step over `distance_m`.
    pub fn advance(&mut self, distance_m: f64) {
        self.shadow.advance(distance_m);
        self.fading.advance();
    }

    pub fn shadow_db(&self, site: usize) -> f64 {
        self.shadow.value_db(site)
    }

    /// Evaluate every link for the current UE position and heading.
    pub fn snapshot(&self, deployment: &Deployment, motion: &MotionState, out: &mut LinkSnapshot) {
        out.reset(deployment);
        let p = &self.params;
        let ue = Point3::new(motion.position.x, motion.position.y, p.ue_height_m);
        let n_beams = out.n_beams;

        for (site, _) in deployment.sites.iter().enumerate() {
            let bs = deployment.site_position(site);
            let d2 = (ue.x - bs.x).hypot(ue.y - bs.y);
            let d3 = d2.hypot(ue.z - bs.z);
            // UE and BS are never co-located: the BS stands above the UE.
            let pl = path_loss_db(d3.max(1e-3), d2, p.f_ghz, p.los_mode).unwrap_or(f64::INFINITY);
            let towards_ue = direction_to(bs, ue).unwrap_or(crate::geometry::Direction {
                azimuth_deg: 0.0,
                elevation_deg: 180.0,
            });
            let common = p.tx_power_dbm - pl - self.shadow.value_db(site) - p.penetration_loss_db;

            // Receive side: direction from the UE back to the BS.
            let towards_bs_az = towards_ue.azimuth_deg + 180.0;
            let towards_bs_el = 180.0 - towards_ue.elevation_deg;
            for (pi, orient) in p.panels.iter().enumerate() {
                let bore = panel_boresight(motion.heading_deg, orient);
                let g = RxPanelPattern::MPUE.gain_dbi(
                    towards_bs_el - bore.elevation_deg,
                    wrap_deg(towards_bs_az - bore.azimuth_deg),
                );
                out.mpue_gain_db[site * 3 + pi] = g;
                out.mpue_gain_lin[site * 3 + pi] = db_to_lin(g);
            }

            for cell in deployment.cells.iter().filter(|c| c.site == site) {
                let rel_az = wrap_deg(towards_ue.azimuth_deg - cell.boresight_deg);
                let mut sum = 0.0;
                for (bi, beam) in cell.beams.iter().enumerate() {
                    let link = cell.id * n_beams + bi;
                    let pat = &beam.pattern;
                    let g = pat.gain_db(
                        towards_ue.elevation_deg - pat.elevation_deg,
                        wrap_deg(rel_az - pat.azimuth_deg),
                    );
                    let ff = self.fading.power(link);
                    let lin = db_to_lin(common + g) * ff;
                    out.base_lin[link] = lin;
                    out.base_db[link] = 10.0 * lin.log10();
                    sum += lin;
                }
                out.cell_sum_lin[cell.id] = sum;
            }
        }

        let mut iso = 0.0;
        let mut mp = [0.0; 3];
        for (c, &sum) in out.cell_sum_lin.iter().enumerate() {
            iso += sum;
            let s = out.site_of_cell[c];
            for (pi, acc) in mp.iter_mut().enumerate() {
                *acc += sum * out.mpue_gain_lin[s * 3 + pi];
            }
        }
        out.total_iso_lin = iso;
        out.total_mpue_lin = mp;
    }
}

/// Received powers of every (cell, beam) link at one instant, before the
/// receive antenna, plus the receive gains of each panel towards each site.
#[derive(Debug, Clone, Default)]
pub struct LinkSnapshot {
    pub n_cells: usize,
    pub n_beams: usize,
    pub site_of_cell: Vec<usize>,
    base_db: Vec<f64>,
    base_lin: Vec<f64>,
    cell_sum_lin: Vec<f64>,
    mpue_gain_db: Vec<f64>,
    mpue_gain_lin: Vec<f64>,
    total_iso_lin: f64,
    total_mpue_lin: [f64; 3],
}

impl LinkSnapshot {
    pub fn new(deployment: &Deployment) -> Self {
        let mut s = LinkSnapshot::default();
        s.reset(deployment);
        s
    }

    fn reset(&mut self, deployment: &Deployment) {
        let n_cells = deployment.n_cells();
        let n_beams = deployment.cells.first().map_or(0, |c| c.beams.len());
        if self.n_cells != n_cells || self.n_beams != n_beams || self.site_of_cell.is_empty() {
            self.n_cells = n_cells;
            self.n_beams = n_beams;
            self.site_of_cell = deployment.cells.iter().map(|c| c.site).collect();
            self.base_db = vec![0.0; n_cells * n_beams];
            self.base_lin = vec![0.0; n_cells * n_beams];
            self.cell_sum_lin = vec![0.0; n_cells];
            self.mpue_gain_db = vec![0.0; deployment.sites.len() * 3];
            self.mpue_gain_lin = vec![0.0; deployment.sites.len() * 3];
        }
    }

    /// Build a snapshot directly from received powers (dBm, isotropic
    /// receiver) and per-site panel gains. Used by tests and tooling.
    pub fn from_powers(
        powers_dbm: &[Vec<f64>],
        site_of_cell: &[usize],
        mpue_gain_db: &[[f64; 3]],
    ) -> Self {
        let n_cells = powers_dbm.len();
        let n_beams = powers_dbm.first().map_or(0, Vec::len);
        let mut s = LinkSnapshot {
            n_cells,
            n_beams,
            site_of_cell: site_of_cell.to_vec(),
            base_db: powers_dbm.iter().flatten().copied().collect(),
            ..Default::default()
        };
        s.base_lin = s.base_db.iter().map(|&d| db_to_lin(d)).collect();
        s.cell_sum_lin = (0..n_cells)
            .map(|c| s.base_lin[c * n_beams..(c + 1) * n_beams].iter().sum())
            .collect();
        s.mpue_gain_db = mpue_gain_db.iter().flatten().copied().collect();
        s.mpue_gain_lin = s.mpue_gain_db.iter().map(|&d| db_to_lin(d)).collect();
        s.total_iso_lin = s.cell_sum_lin.iter().sum();
        for (c, &sum) in s.cell_sum_lin.iter().enumerate() {
            let site = s.site_of_cell[c];
            for p in 0..3 {
                s.total_mpue_lin[p] += sum * s.mpue_gain_lin[site * 3 + p];
            }
        }
        s
    }

    #[inline]
    fn link(&self, cell: usize, beam: usize) -> usize {
        cell * self.n_beams + beam
    }

    #[inline]
    pub fn rx_gain_db(&self, rx: RxArray, cell: usize, panel: usize) -> f64 {
        match rx {
            RxArray::Isotropic => 0.0,
            RxArray::Mpue => self.mpue_gain_db[self.site_of_cell[cell] * 3 + panel],
        }
    }

    #[inline]
    fn rx_gain_lin(&self, rx: RxArray, cell: usize, panel: usize) -> f64 {
        match rx {
            RxArray::Isotropic => 1.0,
            RxArray::Mpue => self.mpue_gain_lin[self.site_of_cell[cell] * 3 + panel],
        }
    }

    /// Raw RSRP in dBm of `(cell, beam)` on `panel`.
    #[inline]
    pub fn rsrp_dbm(&self, rx: RxArray, cell: usize, beam: usize, panel: usize) -> f64 {
        self.base_db[self.link(cell, beam)] + self.rx_gain_db(rx, cell, panel)
    }

    /// Received power in mW of `(cell, beam)` on `panel`.
    #[inline]
    pub fn rx_power_mw(&self, rx: RxArray, cell: usize, beam: usize, panel: usize) -> f64 {
        self.base_lin[self.link(cell, beam)] * self.rx_gain_lin(rx, cell, panel)
    }

    /// Downlink SINR in dB of `(cell, beam)` received on `panel`, with the
    /// expected interference of `k_b` uniformly co-scheduled beams per cell.
    pub fn sinr_db(
        &self,
        rx: RxArray,
        cell: usize,
        beam: usize,
        panel: usize,
        k_b: usize,
        noise_mw: f64,
    ) -> f64 {
        let g = self.rx_gain_lin(rx, cell, panel);
        let own = self.base_lin[self.link(cell, beam)];
        let cell_total = self.cell_sum_lin[cell];
        let all_cells = match rx {
            RxArray::Isotropic => self.total_iso_lin,
            RxArray::Mpue => self.total_mpue_lin[panel],
        };
        let nb = self.n_beams as f64;
        let k = k_b as f64;
        let intra = if self.n_beams > 1 {
            (k - 1.0) / (nb - 1.0) * (cell_total - own).max(0.0) * g
        } else {
            0.0
        };
        let inter = k / nb * (all_cells - cell_total * g).max(0.0);
        10.0 * (own * g / (intra + inter + noise_mw)).log10()
    }

    /// Received powers in mW of every beam of every cell on `panel`.
    pub fn rx_matrix_mw(&self, rx: RxArray, panel: usize) -> Vec<Vec<f64>> {
        (0..self.n_cells)
            .map(|c| {
                (0..self.n_beams)
                    .map(|b| self.rx_power_mw(rx, c, b, panel))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use crate::radio::pathloss::umi_los_db;
    use crate::scenario::build_deployment;

    fn quiet_config() -> ScenarioConfig {
        ScenarioConfig {
            shadow_fading: false,
            fast_fading: false,
            los_mode: LosMode::Los,
            ..Default::default()
        }
    }

    #[test]
    fn boresight_link_budget() {
        // UE at BS height 100 m down the boresight of cell 0 (azimuth 0) and
        // between beams 4 and 5: use a beam pointed exactly at it instead.
        let mut cfg = quiet_config();
        cfg.ue_height_m = cfg.bs_height_m;
        cfg.n_sites = 1;
        let dep = build_deployment(&cfg);
        let ch = UeChannel::new(&cfg, &dep, 1, 0);
        // Beam 1 points at -52.5 deg relative to boresight 0.
        let a = (-52.5f64).to_radians();
        let m = MotionState::new(Point2::new(100.0 * a.cos(), 100.0 * a.sin()), 0.0, 0.0);
        let mut snap = LinkSnapshot::new(&dep);
        ch.snapshot(&dep, &m, &mut snap);
        let expected = 40.0 + (10.0 * 128f64.log10() + 8.0) - umi_los_db(100.0, 28.0);
        let got = snap.rsrp_dbm(RxArray::Isotropic, 0, 0, 0);
        assert!((got - expected).abs() < 1e-9, "{got} vs {expected}");
        assert!((got - (-34.27)).abs() < 0.01);
    }

    #[test]
    fn panel_facing_vs_away_is_25_db() {
        let mut cfg = quiet_config();
        cfg.ue_height_m = cfg.bs_height_m;
        cfg.n_sites = 1;
        let dep = build_deployment(&cfg);
        let ch = UeChannel::new(&cfg, &dep, 1, 0);
        let mut snap = LinkSnapshot::new(&dep);
        // UE at (80, 0). Heading 180 points P2 at the BS; heading 0 points it away.
        let facing = MotionState::new(Point2::new(80.0, 0.0), 180.0, 0.0);
        ch.snapshot(&dep, &facing, &mut snap);
        let toward = snap.rsrp_dbm(RxArray::Mpue, 0, 3, Panel::P2.index());
        let away_state = MotionState::new(Point2::new(80.0, 0.0), 0.0, 0.0);
        ch.snapshot(&dep, &away_state, &mut snap);
        let away = snap.rsrp_dbm(RxArray::Mpue, 0, 3, Panel::P2.index());
        assert!((toward - away - 25.0).abs() < 1e-9, "{}", toward - away);
    }

    #[test]
    fn deterministic_for_same_seed() {
        let cfg = ScenarioConfig::default();
        let dep = build_deployment(&cfg);
        let m = MotionState::new(Point2::new(37.0, -12.0), 75.0, cfg.speed_mps());
        let mut a = UeChannel::new(&cfg, &dep, 11, 3);
        let mut b = UeChannel::new(&cfg, &dep, 11, 3);
        let (mut sa, mut sb) = (LinkSnapshot::new(&dep), LinkSnapshot::new(&dep));
        for _ in 0..5 {
            a.advance(0.08);
            b.advance(0.08);
        }
        a.snapshot(&dep, &m, &mut sa);
        b.snapshot(&dep, &m, &mut sb);
        for c in 0..21 {
            for beam in 0..12 {
                for p in 0..3 {
                    assert_eq!(
                        sa.rsrp_dbm(RxArray::Mpue, c, beam, p).to_bits(),
                        sb.rsrp_dbm(RxArray::Mpue, c, beam, p).to_bits()
                    );
                }
            }
        }
    }

    #[test]
    fn without_fading_rsrp_depends_only_on_geometry() {
        let cfg = quiet_config();
        let dep = build_deployment(&cfg);
        let m = MotionState::new(Point2::new(-40.0, 90.0), 200.0, cfg.speed_mps());
        let a = UeChannel::new(&cfg, &dep, 1, 0);
        let mut b = UeChannel::new(&cfg, &dep, 99, 7);
        b.advance(3.0);
        let (mut sa, mut sb) = (LinkSnapshot::new(&dep), LinkSnapshot::new(&dep));
        a.snapshot(&dep, &m, &mut sa);
        b.snapshot(&dep, &m, &mut sb);
        for c in 0..21 {
            assert_eq!(
                sa.rsrp_dbm(RxArray::Mpue, c, 5, 1),
                sb.rsrp_dbm(RxArray::Mpue, c, 5, 1)
            );
        }
    }
}
