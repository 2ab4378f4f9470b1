//! System-level simulator of handover and beam management for multi-panel
//! and isotropic UEs in a multi-beam mmWave cellular network.

pub mod cli;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod kpi;
pub mod measurement;
pub mod procedures;
pub mod radio;
pub mod scenario;

pub use error::{Result, SimError};
