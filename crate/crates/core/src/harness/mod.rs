//! Experiment drivers: witness search for seminorm constants, coefficient and
//! scale sweeps, the random inequality suite, minor-arc decay tables and the
//! interpolation consistency check.

pub mod bootstrap;
pub mod config;
pub mod estimate;
pub mod minor_arc;
pub mod suite;
pub mod sweep;

pub use bootstrap::{bootstrap_interpolation_check, bootstrap_sides, BootstrapConfig, BootstrapReport, BootstrapRow};
pub use config::{ExperimentConfig, ProbeSet, SearchBudget};
pub use estimate::{
    estimate_constant, probe_functions, recompute_ratio, stretch_witness, ConstantEstimate, RatioEvaluator, Termination,
};
pub use minor_arc::{minor_arc_decay, minor_arc_samples, MinorArcOptions, MinorArcRow, MinorArcTable};
pub use suite::{seminorm_inequality_suite, CheckOutcome, SuiteReport};
pub use sweep::{config_for_n, stabilization_report, uniformity_sweep, StabilizationRow, StabilizationTable, SweepRow, SweepTable};
