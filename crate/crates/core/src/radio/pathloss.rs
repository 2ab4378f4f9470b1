//! Urban-micro street-canyon path loss with a soft LOS blend.

use crate::error::{Result, SimError};
use crate::scenario::LosMode;

use super::{db_to_lin, lin_to_db};

pub fn umi_los_db(d3d_m: f64, f_ghz: f64) -> f64 {
    32.4 + 21.0 * d3d_m.log10() + 20.0 * f_ghz.log10()
}

/// NLOS loss, never below the LOS loss at the same distance.
pub fn umi_nlos_db(d3d_m: f64, f_ghz: f64) -> f64 {
    let nlos = 35.3 * d3d_m.log10() + 22.4 + 21.3 * f_ghz.log10();
    nlos.max(umi_los_db(d3d_m, f_ghz))
}

/// Probability of line of sight over ground distance `d2d_m`.
pub fn umi_los_probability(d2d_m: f64) -> f64 {
    if d2d_m <= 18.0 {
        1.0
    } else {
        18.0 / d2d_m + (-d2d_m / 36.0).exp() * (1.0 - 18.0 / d2d_m)
    }
}

/// Path loss in dB.
///
/// In soft mode the LOS and NLOS channel gains are averaged with the LOS
/// probability as weight, in the linear power domain.
pub fn path_loss_db(d3d_m: f64, d2d_m: f64, f_ghz: f64, mode: LosMode) -> Result<f64> {
    if !(d3d_m > 0.0) {
        return Err(SimError::Geometry(format!("nonpositive distance {d3d_m}")));
    }
    Ok(match mode {
        LosMode::Los => umi_los_db(d3d_m, f_ghz),
        LosMode::Nlos => umi_nlos_db(d3d_m, f_ghz),
        LosMode::Soft => {
            let p = umi_los_probability(d2d_m);
            let g = p * db_to_lin(-umi_los_db(d3d_m, f_ghz))
                + (1.0 - p) * db_to_lin(-umi_nlos_db(d3d_m, f_ghz));
            -lin_to_db(g)
        }
    })
}
