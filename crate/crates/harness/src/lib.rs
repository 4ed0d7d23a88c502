//! Flight-trajectory experiments: config parsing, strategy sweeps and result
//! files for the `uavdm` command-line tool.

pub mod config;
pub mod experiment;
pub mod output;

pub use config::{
    parse_config, parse_config_str, ConfigError, ExperimentConfig, OutputFormat, Strategy,
};
pub use experiment::{
    dbm_to_mw, evaluate_link, run_experiment, run_experiment_parallel, ExperimentResults,
    HarnessError, PointOutcome, ResultRecord, Summary,
};
pub use output::{
    parse_csv, parse_json, render, summary_table, to_csv_string, to_json_string, write_results,
};
