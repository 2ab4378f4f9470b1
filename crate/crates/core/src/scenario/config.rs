//! Scenario configuration.
//!
//! The on-disk format is a flat TOML table. Every key is optional; omitted keys
//! take the defaults below. Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, SimError};

/// Receiver antenna model and measurement scheme of the UE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UeModel {
    /// Single isotropic element, 0 dBi.
    Isotropic,
    /// Three edge panels, all measured at every SSB.
    MpueA3,
    /// Three edge panels, one panel measured per SSB in round-robin order.
    MpueA1,
}

impl UeModel {
    pub const ALL: [UeModel; 3] = [UeModel::Isotropic, UeModel::MpueA3, UeModel::MpueA1];

    pub fn n_panels(self) -> usize {
        match self {
            UeModel::Isotropic => 1,
            UeModel::MpueA3 | UeModel::MpueA1 => 3,
        }
    }

    pub fn is_multi_panel(self) -> bool {
        self != UeModel::Isotropic
    }

    pub fn as_str(self) -> &'static str {
        match self {
            UeModel::Isotropic => "isotropic",
            UeModel::MpueA3 => "mpue_a3",
            UeModel::MpueA1 => "mpue_a1",
        }
    }
}

impl std::fmt::Display for UeModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for UeModel {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "isotropic" | "reference" => Ok(UeModel::Isotropic),
            "mpue_a3" => Ok(UeModel::MpueA3),
            "mpue_a1" => Ok(UeModel::MpueA1),
            other => Err(SimError::invalid(
                "ue_model",
                format!("unknown model `{other}` (expected isotropic, mpue_a3 or mpue_a1)"),
            )),
        }
    }
}

/// How line-of-sight and non-line-of-sight path loss are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LosMode {
    /// LOS-probability weighted blend in the linear power domain.
    Soft,
    Los,
    Nlos,
}

/// UE edge panel. P2 faces the direction of motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Panel {
    P1,
    P2,
    P3,
}

impl Panel {
    pub const ALL: [Panel; 3] = [Panel::P1, Panel::P2, Panel::P3];

    pub fn index(self) -> usize {
        match self {
            Panel::P1 => 0,
            Panel::P2 => 1,
            Panel::P3 => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Panel> {
        Panel::ALL.get(i).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    // deployment and link budget
    pub carrier_frequency_ghz: f64,
    pub bandwidth_mhz: f64,
    pub n_sites: usize,
    pub inter_site_distance_m: f64,
    pub tx_power_dbm: f64,
    pub bs_height_m: f64,
    pub ue_height_m: f64,
    pub element_gain_dbi: f64,
    pub sidelobe_floor_db: f64,
    pub penetration_loss_db: f64,
    pub noise_figure_db: f64,
    pub thermal_noise_dbm_hz: f64,

    // UE population
    pub n_ues: usize,
    pub ue_speed_kmh: f64,
    pub ue_model: UeModel,
    pub panel_elevation_deg: f64,
    pub a1_scan_order: Vec<Panel>,

    // timing and measurement
    pub time_step_ms: f64,
    pub ssb_period_ms: f64,
    pub omega: u32,
    pub n_l1: usize,
    pub p_thr_dbm: f64,
    pub n_str: usize,
    pub k_cell: f64,
    pub k_beam: f64,

    // interference
    pub k_b: usize,

    // handover
    pub o_a3_db: f64,
    pub t_ttt_ms: f64,
    pub o_p_db: f64,
    pub n_prep: usize,
    pub ho_interruption_ms: f64,
    pub t_hof_ms: f64,

    // beam management and failure
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

    // KPI
    pub t_fh_ms: f64,

    // channel
    pub los_mode: LosMode,
    pub shadow_fading: bool,
    pub shadow_sigma_db: f64,
    pub shadow_decorrelation_m: f64,
    pub fast_fading: bool,
    pub rician_k_db: f64,
    pub n_sinusoids: usize,

    // run
    pub rng_seed: u64,
    pub sim_duration_s: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            carrier_frequency_ghz: 28.0,
            bandwidth_mhz: 100.0,
            n_sites: 7,
            inter_site_distance_m: 200.0,
            tx_power_dbm: 40.0,
            bs_height_m: 10.0,
            ue_height_m: 1.5,
            element_gain_dbi: 8.0,
            sidelobe_floor_db: 30.0,
            penetration_loss_db: 0.0,
            noise_figure_db: 9.0,
            thermal_noise_dbm_hz: -174.0,

            n_ues: 420,
            ue_speed_kmh: 30.0,
            ue_model: UeModel::Isotropic,
            panel_elevation_deg: 90.0,
            a1_scan_order: vec![Panel::P2, Panel::P1, Panel::P3],

            time_step_ms: 10.0,
            ssb_period_ms: 20.0,
            omega: 2,
            n_l1: 2,
            p_thr_dbm: -100.0,
            n_str: 1,
            k_cell: 4.0,
            k_beam: 4.0,

            k_b: 4,

            o_a3_db: 2.0,
            t_ttt_ms: 80.0,
            o_p_db: 0.0,
            n_prep: 4,
            ho_interruption_ms: 50.0,
            t_hof_ms: 200.0,

            n_rep: 4,
            o_b_db: 1.0,
            l2_alpha: 0.5,
            rlq_alpha: 0.1,
            rlm_alpha: 0.1,
            c_bfi_max: 3,
            t_bfd_ms: 60.0,
            n_rach: 4,
            t_rach_ms: 20.0,
            gamma_out_db: -8.0,
            gamma_in_db: -6.0,
            t_rlf_ms: 1000.0,
            reestablish_delay_ms: 200.0,

            t_fh_ms: 1000.0,

            los_mode: LosMode::Soft,
            shadow_fading: true,
            shadow_sigma_db: 4.0,
            shadow_decorrelation_m: 13.0,
            fast_fading: true,
            rician_k_db: 10.0,
            n_sinusoids: 8,

            rng_seed: 1,
            sim_duration_s: 60.0,
        }
    }
}

/// Parse a flat TOML document into a validated config.
pub fn load_config(source: &str) -> Result<ScenarioConfig> {
    let table: toml::Table = toml::from_str(source).map_err(|e| SimError::Parse(e.to_string()))?;
    config_from_table(table)
}

/// Apply `key=value` overrides on top of a document and validate the result.
pub fn load_config_with_overrides(source: &str, overrides: &[String]) -> Result<ScenarioConfig> {
    let mut table: toml::Table =
        toml::from_str(source).map_err(|e| SimError::Parse(e.to_string()))?;
    for ov in overrides {
        let (key, value) = parse_override(ov)?;
        table.insert(key, value);
    }
    config_from_table(table)
}

fn parse_override(raw: &str) -> Result<(String, toml::Value)> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| SimError::Parse(format!("override `{raw}` is not of the form key=value")))?;
    let key = key.trim().to_string();
    let value = value.trim();
    // Bare words (e.g. `ue_model=mpue_a1`) are taken as strings.
    let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    Ok((key, parsed))
}

fn known_keys() -> Vec<String> {
    match toml::Value::try_from(ScenarioConfig::default()) {
        Ok(toml::Value::Table(t)) => t.keys().cloned().collect(),
        _ => Vec::new(),
    }
}

fn config_from_table(table: toml::Table) -> Result<ScenarioConfig> {
    let known = known_keys();
    if let Some(unknown) = table.keys().find(|k| !known.iter().any(|kk| kk == *k)) {
        return Err(SimError::UnknownKey(unknown.clone()));
    }
    let cfg: ScenarioConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| SimError::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

impl ScenarioConfig {
    /// The reduced preset: 100 UEs for 30 s.
    pub fn desk_scale(mut self) -> Self {
        self.n_ues = 100;
        self.sim_duration_s = 30.0;
        self
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    /// SHA-256 over the canonical TOML rendering.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn validate(&self) -> Result<()> {
        let positive: [(&'static str, f64); 17] = [
            ("carrier_frequency_ghz", self.carrier_frequency_ghz),
            ("bandwidth_mhz", self.bandwidth_mhz),
            ("inter_site_distance_m", self.inter_site_distance_m),
            ("bs_height_m", self.bs_height_m),
            ("ue_height_m", self.ue_height_m),
            ("ue_speed_kmh", self.ue_speed_kmh),
            ("time_step_ms", self.time_step_ms),
            ("ssb_period_ms", self.ssb_period_ms),
            ("t_ttt_ms", self.t_ttt_ms),
            ("t_hof_ms", self.t_hof_ms),
            ("t_rlf_ms", self.t_rlf_ms),
            ("t_fh_ms", self.t_fh_ms),
            ("t_bfd_ms", self.t_bfd_ms),
            ("t_rach_ms", self.t_rach_ms),
            ("reestablish_delay_ms", self.reestablish_delay_ms),
            ("ho_interruption_ms", self.ho_interruption_ms),
            ("sim_duration_s", self.sim_duration_s),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(SimError::invalid(field, format!("must be > 0, got {v}")));
            }
        }
        if self.n_sites != 1 && self.n_sites != 7 {
            return Err(SimError::invalid(
                "n_sites",
                "only 1 or 7 sites are supported",
            ));
        }
        if self.n_ues == 0 {
            return Err(SimError::invalid("n_ues", "must be at least 1"));
        }
        if self.omega == 0 {
            return Err(SimError::invalid("omega", "must be at least 1"));
        }
        let expected = self.omega as f64 * self.time_step_ms;
        if (self.ssb_period_ms - expected).abs() > 1e-9 {
            return Err(SimError::invalid(
                "ssb_period_ms",
                format!(
                    "must equal omega x time_step_ms = {expected} ms, got {}",
                    self.ssb_period_ms
                ),
            ));
        }
        if self.n_l1 == 0 {
            return Err(SimError::invalid("n_l1", "must be at least 1"));
        }
        if self.n_str == 0 {
            return Err(SimError::invalid("n_str", "must be at least 1"));
        }
        if !(1..=12).contains(&self.k_b) {
            return Err(SimError::invalid(
                "k_b",
                format!("must be in 1..=12, got {}", self.k_b),
            ));
        }
        if !(1..=12).contains(&self.n_rep) {
            return Err(SimError::invalid("n_rep", "must be in 1..=12"));
        }
        if !(1..=12).contains(&self.n_prep) {
            return Err(SimError::invalid("n_prep", "must be in 1..=12"));
        }
        if self.gamma_in_db <= self.gamma_out_db {
            return Err(SimError::invalid(
                "gamma_in_db",
                format!(
                    "must exceed gamma_out_db ({}), got {}",
                    self.gamma_out_db, self.gamma_in_db
                ),
            ));
        }
        if !(self.k_cell >= 0.0 && self.k_cell.is_finite()) {
            return Err(SimError::invalid("k_cell", "must be >= 0"));
        }
        if !(self.k_beam >= 0.0 && self.k_beam.is_finite()) {
            return Err(SimError::invalid("k_beam", "must be >= 0"));
        }
        for (field, a) in [
            ("l2_alpha", self.l2_alpha),
            ("rlq_alpha", self.rlq_alpha),
            ("rlm_alpha", self.rlm_alpha),
        ] {
            if !(a > 0.0 && a <= 1.0) {
                return Err(SimError::invalid(field, "must be in (0, 1]"));
            }
        }
        if self.c_bfi_max == 0 {
            return Err(SimError::invalid("c_bfi_max", "must be at least 1"));
        }
        if self.n_rach == 0 {
            return Err(SimError::invalid("n_rach", "must be at least 1"));
        }
        if self.o_p_db < 0.0 {
            return Err(SimError::invalid("o_p_db", "must be >= 0"));
        }
        if self.o_b_db < 0.0 {
            return Err(SimError::invalid("o_b_db", "must be >= 0"));
        }
        if self.shadow_sigma_db < 0.0 {
            return Err(SimError::invalid("shadow_sigma_db", "must be >= 0"));
        }
        if self.shadow_decorrelation_m <= 0.0 {
            return Err(SimError::invalid("shadow_decorrelation_m", "must be > 0"));
        }
        if self.n_sinusoids == 0 {
            return Err(SimError::invalid("n_sinusoids", "must be at least 1"));
        }
        let mut order = self.a1_scan_order.clone();
        order.sort();
        if order != Panel::ALL {
            return Err(SimError::invalid(
                "a1_scan_order",
                "must be a permutation of P1, P2, P3",
            ));
        }
        Ok(())
    }

    pub fn speed_mps(&self) -> f64 {
        self.ue_speed_kmh / 3.6
    }

    pub fn wavelength_m(&self) -> f64 {
        crate::radio::SPEED_OF_LIGHT / (self.carrier_frequency_ghz * 1e9)
    }

    pub fn n_steps(&self) -> u64 {
        (self.sim_duration_s * 1000.0 / self.time_step_ms).round() as u64
    }

    pub fn alpha_cell(&self) -> f64 {
        crate::measurement::forgetting_factor(self.k_cell)
    }

    pub fn alpha_beam(&self) -> f64 {
        crate::measurement::forgetting_factor(self.k_beam)
    }

    /// Thermal noise over the system bandwidth at the UE, dBm.
    pub fn noise_dbm(&self) -> f64 {
        self.thermal_noise_dbm_hz + 10.0 * (self.bandwidth_mhz * 1e6).log10() + self.noise_figure_db
    }

    /// True if two configs produce the same physical channel for the same seed,
    /// so that they may share channel evaluation in a batch.
    pub fn same_physics(&self, other: &ScenarioConfig) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        for c in [&mut a, &mut b] {
            c.ue_model = UeModel::Isotropic;
            c.k_b = 1;
            c.o_a3_db = 0.0;
            c.t_ttt_ms = 1.0;
            c.o_p_db = 0.0;
            c.n_prep = 1;
            c.ho_interruption_ms = 1.0;
            c.t_hof_ms = 1.0;
            c.n_rep = 1;
            c.o_b_db = 0.0;
            c.l2_alpha = 1.0;
            c.rlq_alpha = 1.0;
            c.rlm_alpha = 1.0;
            c.c_bfi_max = 1;
            c.t_bfd_ms = 1.0;
            c.n_rach = 1;
            c.t_rach_ms = 1.0;
            c.gamma_out_db = 0.0;
            c.gamma_in_db = 1.0;
            c.t_rlf_ms = 1.0;
            c.reestablish_delay_ms = 1.0;
            c.t_fh_ms = 1.0;
            c.rng_seed = 0;
        }
        a == b
    }

    /// True if two configs share the measurement pipeline (same scheme and
    /// filter settings) on top of the same physics.
    pub fn same_measurement(&self, other: &ScenarioConfig) -> bool {
        self.same_physics(other)
            && self.ue_model == other.ue_model
            && self.n_l1 == other.n_l1
            && self.p_thr_dbm == other.p_thr_dbm
            && self.n_str == other.n_str
            && self.k_cell == other.k_cell
            && self.k_beam == other.k_beam
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = load_config("").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.ue_model, UeModel::Isotropic);
        assert_eq!(cfg.o_a3_db, 2.0);
        assert_eq!(cfg.t_ttt_ms, 80.0);
        assert_eq!(cfg.carrier_frequency_ghz, 28.0);
        assert_eq!(cfg.n_ues, 420);
        assert_eq!(cfg.gamma_out_db, -8.0);
        assert_eq!(cfg.gamma_in_db, -6.0);
        assert_eq!(cfg.t_hof_ms, 200.0);
        assert_eq!(cfg.t_rlf_ms, 1000.0);
        assert_eq!(cfg.omega, 2);
        assert_eq!(cfg.n_l1, 2);
    }

    #[test]
    fn k_b_three_accepted() {
        let cfg = load_config("k_b = 3").unwrap();
        assert_eq!(cfg.k_b, 3);
    }

    #[test]
    fn k_b_out_of_range_rejected() {
        for doc in ["k_b = 0", "k_b = 13"] {
            match load_config(doc) {
                Err(SimError::Validation { field, .. }) => assert_eq!(field, "k_b"),
                other => panic!("expected k_b validation error, got {other:?}"),
            }
        }
    }

    #[test]
    fn gamma_in_below_gamma_out_rejected() {
        match load_config("gamma_in_db = -9.0\ngamma_out_db = -8.0") {
            Err(SimError::Validation { field, .. }) => assert_eq!(field, "gamma_in_db"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(matches!(load_config("foo = 1"), Err(SimError::UnknownKey(k)) if k == "foo"));
    }

    #[test]
    fn malformed_document_is_parse_error() {
        assert!(matches!(load_config("k_b = = 3"), Err(SimError::Parse(_))));
        assert!(matches!(
            load_config("k_b = \"four\""),
            Err(SimError::Parse(_))
        ));
    }

    #[test]
    fn ssb_period_must_match_omega() {
        match load_config("ssb_period_ms = 30.0") {
            Err(SimError::Validation { field, .. }) => assert_eq!(field, "ssb_period_ms"),
            other => panic!("{other:?}"),
        }
        let cfg = load_config("omega = 3\nssb_period_ms = 30.0").unwrap();
        assert_eq!(cfg.omega, 3);
    }

    #[test]
    fn nonpositive_duration_rejected() {
        assert!(matches!(
            load_config("t_hof_ms = 0.0"),
            Err(SimError::Validation {
                field: "t_hof_ms",
                ..
            })
        ));
    }

    #[test]
    fn overrides_apply_bare_words_and_numbers() {
        let cfg = load_config_with_overrides(
            "k_b = 1",
            &[
                "ue_model=mpue_a1".into(),
                "k_b=2".into(),
                "o_a3_db = 3.5".into(),
            ],
        )
        .unwrap();
        assert_eq!(cfg.ue_model, UeModel::MpueA1);
        assert_eq!(cfg.k_b, 2);
        assert_eq!(cfg.o_a3_db, 3.5);
    }

    #[test]
    fn toml_round_trip_and_hash_stable() {
        let cfg = ScenarioConfig {
            ue_model: UeModel::MpueA3,
            k_b: 2,
            ..Default::default()
        };
        let back = load_config(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
        assert_ne!(cfg.hash(), ScenarioConfig::default().hash());
    }

    #[test]
    fn noise_floor() {
        let cfg = ScenarioConfig::default();
        // -174 + 80 + 9
        assert!((cfg.noise_dbm() - (-85.0)).abs() < 1e-9);
    }

    #[test]
    fn physics_sharing() {
        let a = ScenarioConfig::default();
        let b = ScenarioConfig {
            ue_model: UeModel::MpueA1,
            k_b: 1,
            o_a3_db: 5.0,
            ..Default::default()
        };
        assert!(a.same_physics(&b));
        assert!(!a.same_measurement(&b));
        let c = ScenarioConfig {
            shadow_sigma_db: 6.0,
            ..Default::default()
        };
        assert!(!a.same_physics(&c));
    }
}
