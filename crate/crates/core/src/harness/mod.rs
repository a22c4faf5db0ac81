//! Grid runner: pairs every arm with a matched C0 baseline on identical
//! data, aggregates paired deltas and writes tables and figures.

mod aggregate;
mod config;
mod grid;
mod report;
mod run;
pub mod svg;

pub use aggregate::{
    aggregate, aggregate_boundary, Aggregate, BaselineRow, BoundaryRow, ReportRow,
};
pub use config::{BoundaryConfig, GridConfig, HarnessConfig};
pub use grid::{Arm, ArmId, CellKey, Grid};
pub use report::{
    emit_report, read_results, read_run_info, render_markdown, write_baseline_csv, write_boundary,
    write_figures, write_results, write_run_info, write_summary_csv, write_timings, RunInfo,
    BASELINE_CSV, BOUNDARY_CSV, FIGURE_METRICS, RESULTS_FILE, RUN_INFO_FILE, SUMMARY_CSV,
    SUMMARY_MD, TIMINGS_FILE,
};
pub use run::{quiet, BoundaryRecord, Experiment, GridOutcome, RunRecord};
