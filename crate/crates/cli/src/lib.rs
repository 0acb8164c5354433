//! Library surface of the `distsim` command-line driver: configuration
//! resolution, report rendering and stage orchestration. The binary in
//! `main.rs` is a thin argument-parsing layer over [`pipeline::execute`].

pub mod config;
pub mod pipeline;
pub mod report;

pub use config::{parse_grid, PipelineConfig, Source};
pub use pipeline::{execute, Run, Stage, StageError, CONFIG_EXIT_CODE};
