//! File, dataset and command-line layer around [`mdlp_core`].
//!
//! * [`ingest`] discovers and labels dataset images and decodes them into channel grids.
//! * [`index`] reads and writes the binary feature index.
//! * [`pipeline`] runs extraction, querying and evaluation over whole databases in parallel.
//! * [`corpus`] generates the procedural texture corpus used for desk-scale benchmarks.
//! * [`report`] renders evaluation and query results.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod index;
pub mod ingest;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
pub use index::{load_index, save_index, FeatureIndex, IndexHeader};
pub use ingest::{ingest_directory, DatasetManifest, LabelRule};
