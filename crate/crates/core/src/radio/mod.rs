//! Link-level radio model: antenna patterns, path loss, shadow and fast
//! fading, per-link received power and downlink SINR.

pub mod antenna;
pub mod channel;
pub mod fading;
pub mod pathloss;
pub mod sinr;

pub use antenna::{RxPanelPattern, TxBeamPattern};
pub use channel::{LinkSnapshot, RxArray, UeChannel};
pub use pathloss::path_loss_db;
pub use sinr::{sinr_db, sinr_sampled_db};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[inline]
pub fn db_to_lin(db: f64) -> f64 {
    (db * (std::f64::consts::LN_10 / 10.0)).exp()
}

#[inline]
pub fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}
