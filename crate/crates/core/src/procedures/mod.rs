//! Handover, beam management and failure state machines.

pub mod handover;
pub mod timers;
pub mod ue;

pub use handover::{access_beam, evaluate_a3, prepare_handover, strongest, BeamManager};
pub use timers::{
    AccessOutcome, BfdCounter, BfdOutcome, BfrAttempts, HoAccess, RlfTimer, SinrFilter, TttTimer,
};
pub use ue::{Execution, Link, Phase, ProcedureConfig, Recovery, StepOutcome, UeState};
