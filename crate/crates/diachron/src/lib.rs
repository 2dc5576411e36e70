//! File formats, configuration, charts and the command-line driver around
//! `diachron-core`.
//!
//! A run goes through four stages that communicate only through files in the
//! output directory: [`commands::preprocess`] writes the vocabulary and stem
//! streams, [`commands::fit`] the topic model and its top-word table,
//! [`commands::analyze`] the prevalence, frequency and significance tables,
//! and [`commands::report`] the SVG charts and a summary document.

pub mod artifacts;
pub mod chart;
pub mod commands;
pub mod config;
pub mod corpus_io;
pub mod error;
pub mod lists;
pub mod tables;

pub use config::{Overrides, RunConfig};
pub use error::{Error, Result};
