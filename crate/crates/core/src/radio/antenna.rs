//! Transmit beam and receive panel radiation patterns.
//!
//! Both use the parabolic main-lobe form `G_max - min(12 (dphi/phi_3dB)^2 +
//! 12 (dtheta/theta_3dB)^2, A_floor)`, so the gain is down 3 dB at half the
//! half-power beamwidth in either plane.

/// Horizontal and vertical element spacing of the BS panel, in wavelengths.
pub const TX_H_SPACING: f64 = 0.5;
pub const TX_V_SPACING: f64 = 0.7;

/// Half-power beamwidth of a uniform linear array with `n` elements at
/// spacing `d` wavelengths (about 102 deg / n at half-wavelength spacing).
pub fn array_hpbw_deg(n: usize, spacing_wl: f64) -> f64 {
    51.0 / (n as f64 * spacing_wl)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TxBeamPattern {
    pub elevation_deg: f64,
    /// Relative to the sector boresight.
    pub azimuth_deg: f64,
    pub rows: usize,
    pub cols: usize,
    pub peak_gain_db: f64,
    pub hpbw_az_deg: f64,
    pub hpbw_el_deg: f64,
    pub floor_db: f64,
}

impl TxBeamPattern {
    pub fn new(
        elevation_deg: f64,
        azimuth_deg: f64,
        rows: usize,
        cols: usize,
        element_gain_dbi: f64,
        floor_db: f64,
    ) -> Self {
        TxBeamPattern {
            elevation_deg,
            azimuth_deg,
            rows,
            cols,
            peak_gain_db: 10.0 * ((rows * cols) as f64).log10() + element_gain_dbi,
            hpbw_az_deg: array_hpbw_deg(cols, TX_H_SPACING),
            hpbw_el_deg: array_hpbw_deg(rows, TX_V_SPACING),
            floor_db,
        }
    }

    /// Gain in dB for an offset from the beam centre.
    #[inline]
    pub fn gain_db(&self, delta_elevation_deg: f64, delta_azimuth_deg: f64) -> f64 {
        let a = delta_azimuth_deg / self.hpbw_az_deg;
        let e = delta_elevation_deg / self.hpbw_el_deg;
        self.peak_gain_db - (12.0 * a * a + 12.0 * e * e).min(self.floor_db)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RxPanelPattern {
    Isotropic,
    Directional {
        peak_gain_dbi: f64,
        hpbw_deg: f64,
        backward_attenuation_db: f64,
    },
}

impl RxPanelPattern {
    /// Edge-panel element: 5 dBi peak, 90 deg HPBW, 25 dB backward attenuation.
    pub const MPUE: RxPanelPattern = RxPanelPattern::Directional {
        peak_gain_dbi: 5.0,
        hpbw_deg: 90.0,
        backward_attenuation_db: 25.0,
    };

    #[inline]
    pub fn gain_dbi(&self, delta_elevation_deg: f64, delta_azimuth_deg: f64) -> f64 {
        match *self {
            RxPanelPattern::Isotropic => 0.0,
            RxPanelPattern::Directional {
                peak_gain_dbi,
                hpbw_deg,
                backward_attenuation_db,
            } => {
                let a = delta_azimuth_deg / hpbw_deg;
                let e = delta_elevation_deg / hpbw_deg;
                peak_gain_dbi - (12.0 * a * a + 12.0 * e * e).min(backward_attenuation_db)
            }
        }
    }
}

pub fn tx_beam_gain(beam: &TxBeamPattern, delta_elevation_deg: f64, delta_azimuth_deg: f64) -> f64 {
    beam.gain_db(delta_elevation_deg, delta_azimuth_deg)
}

pub fn rx_panel_gain(
    pattern: &RxPanelPattern,
    delta_elevation_deg: f64,
    delta_azimuth_deg: f64,
) -> f64 {
    pattern.gain_dbi(delta_elevation_deg, delta_azimuth_deg)
}
