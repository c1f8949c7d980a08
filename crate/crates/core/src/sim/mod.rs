//! Monte Carlo study of the standardized AH under Weibull event times.

mod quadrature;
mod run;
mod scenario;
mod weibull;

pub use quadrature::integrate;
pub use run::{
    generate_trial, replicate_rng, run_simulation, split_cells, weibull_truth, DualityCheck,
    FailureSummary, Metric, MetricSummary, RiskSetSummary, SimResult, TauSummary, Truth,
    MAX_FAILURE_RATE,
};
pub use scenario::{Censoring, DesignPattern, SimScenario};
pub use weibull::{WeibullParams, RMST_TOL};
