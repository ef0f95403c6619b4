//! Numerical core for building science maps from document corpora.
//!
//! The crate is `no_std` and only needs an allocator. It covers the whole
//! analysis chain short of file handling:
//!
//! * [`corpus`]: normalized document records and the variable universe
//!   (words, authors, cited references) with document-frequency filtering.
//! * [`matrix`]: document × variable occurrence matrices and the symmetric
//!   co-occurrence, cosine, Pearson and Euclidean matrices derived from them.
//! * [`graph`]: weighted undirected graphs obtained by thresholding.
//! * [`layout`]: Kruskal and Kamada-Kawai stress, stress majorization and
//!   graph geodesics.
//! * [`dynamic`]: joint layout of time-sliced networks with a displacement
//!   penalty between consecutive frames, plus frame interpolation.
//! * [`stats`]: degree and betweenness centrality, Louvain communities,
//!   modularity and principal-component factor loadings.
//! * [`info`]: Shannon entropy and three-way mutual information.
//!
//! File formats, rendering and the command line live in the `scimap` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod dynamic;
pub mod error;
pub mod graph;
pub mod info;
pub mod layout;
pub mod linalg;
pub mod matrix;
pub mod stats;

pub use error::{Error, Result};
