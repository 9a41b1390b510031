//! Command-line front end: run configuration, CSV ingestion and emission,
//! SVG scatter output, and the named experiments behind the `hdlss` binary.

pub mod config;
pub mod csv;
pub mod experiments;
pub mod svg;

pub use config::RunConfig;
pub use csv::{ingest_csv, Orientation};
pub use experiments::{
    run_check_conditions, run_cluster, run_experiment, run_simulate, ExperimentName,
};
