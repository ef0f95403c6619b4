//! File formats, SVG rendering and the `scimap` command line on top of
//! `scimap-core`.

pub mod cli;
pub mod corpus_file;
pub mod csv_io;
pub mod error;
pub mod pajek;
pub mod render;

pub use error::{Error, Result};
