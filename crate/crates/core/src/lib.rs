//! Topological descriptors of graphs built from scalar node embeddings.
//!
//! A scalar encoder (random-walk skip-gram or a deterministic baseline)
//! assigns each vertex a value; the lower-star filtration of that function
//! gives a 0-dimensional persistence diagram, which serves as a graph-level
//! descriptor or, restricted to a k-hop ego network, a node-level one.
//! Diagrams are compared with the q-Wasserstein distance and can be
//! vectorized as Betti curves, landscapes or persistence images.

pub mod encoders;
pub mod error;
pub mod filtration;
pub mod graph;
pub mod metrics;
pub mod persistence;
pub mod pipeline;
pub mod util;
pub mod vectorize;

pub use encoders::{degree_encoder, Encoder, ScalarField, WalkConfig};
pub use error::{Error, Result};
pub use filtration::{lower_star, LowerStarFiltration, Simplex};
pub use graph::{load_edge_list, load_graph, load_off_mesh, MeshSpec, WeightedGraph};
pub use metrics::{assignment_solve, bottleneck, distance_matrix, wasserstein, DistanceMatrix};
pub use persistence::{brute_force_zero_persistence, zero_persistence, FinitizePolicy, PersistenceDiagram};
pub use pipeline::{
    graph_descriptor, mds_project, node_descriptor, run_experiment, stability_experiment, DescriptorConfig,
    ExperimentSpec, StabilityStats,
};
