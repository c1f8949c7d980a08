//! Dataset ingestion, analysis configuration, the `analyze` workflow and
//! report rendering.

mod analyze;
mod config;
mod dataset;
mod report;

pub use analyze::{analyze, AnalysisReport, MethodReport, StratumReport, SCHEMA_VERSION};
pub use config::{parse_methods, AnalysisConfig, OutputFormat, WeightChoice};
pub use dataset::{parse_dataset, Dataset};
pub use report::{
    fmt3, fmt_p, render_analysis_json, render_analysis_table, render_simulation_json,
    render_simulation_table,
};
