//! Configuration, deployment geometry and the initial UE population.

pub mod config;
pub mod deployment;
pub mod spawn;

pub use config::{
    load_config, load_config_with_overrides, LosMode, Panel, ScenarioConfig, UeModel,
};
pub use deployment::{
    build_deployment, Beam, BeamTier, Cell, Deployment, BEAMS_PER_CELL, CELLS_PER_SITE,
};
pub use spawn::{initial_attachment, spawn_ue, spawn_ues, Attachment, SpawnedUe};
