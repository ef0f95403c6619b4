//! Node and community statistics for sizing, coloring and interpreting maps.

mod centrality;
mod community;
mod factor;

pub use centrality::{betweenness_centrality, degree_centrality};
pub use community::{louvain_communities, modularity_q, Partition};
pub use factor::{dominant_factors, eigenvector_centrality, factor_model, factor_neutral_nodes, FactorModel};
