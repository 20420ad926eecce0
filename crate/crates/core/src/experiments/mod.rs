//! Monte Carlo harness: OSPA sweeps, η′ statistics and the overload demo,
//! plus CSV/gnuplot output.

pub mod config;
pub mod eta_stats;
pub mod output;
pub mod overload;
pub mod sweep;

pub use config::{Algorithm, ExperimentConfig, FailPolicy, GeometrySpec, ModelSpec, SceneSpec, SweepAxis, PAPER_DOAS_PI};
pub use eta_stats::{run_eta_statistics, EtaCell, EtaStatistics, Histogram};
pub use overload::{matched_within, run_overload_demo, OverloadResult};
pub use sweep::{estimate, run_sweep, SeriesResult, SweepResult};
