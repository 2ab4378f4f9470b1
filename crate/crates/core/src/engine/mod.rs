//! Simulation driver: the time-stepped loop, sweeps and output files.

pub mod output;
pub mod rng;
pub mod sim;
pub mod sweep;

pub use sim::{
    run_batch, run_simulation, BatchOutput, RunOptions, RunOutput, TraceOptions, Traces,
};
pub use sweep::{run_sweep, SweepPoint, SweepResult, SweepRow, SweepSpec};
