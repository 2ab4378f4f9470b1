//! L1/L3 measurement filtering, cell-quality derivation and panel selection.

pub mod filters;
pub mod lattice;

pub use filters::{
    a1_scan_panel, derive_cell_quality, forgetting_factor, l1_filter, l3_iir, select_best_panel,
    select_serving_panel,
};
pub use lattice::{FilterConfig, MeasurementLattice};
