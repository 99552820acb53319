//! Classical and quantum PageRank on directed networks.
//!
//! The classical ranking is the stationary vector of the Google matrix. The
//! quantum ranking is the time-averaged position distribution of a Szegedy
//! walk built on the same matrix. Generators, parsers and a handful of
//! ranking analyses complete the toolkit.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod classical;
pub mod error;
pub mod export;
pub mod graph;
pub mod quantum;
pub mod rank;

pub use classical::{
    classical_pagerank, classical_pagerank_with, google_matrix, hyperlink_matrix, patch_dangling,
    power_method, second_eigenvalue_modulus, ColumnOperator, Convergence, GoogleMatrix,
    HyperlinkMatrix, PowerConfig, PowerIteration, StochasticMatrix, DEFAULT_ALPHA,
};
pub use error::{Error, Result};
pub use graph::{
    benchmark_graph, generate_binary_tree, generate_hierarchical, generate_scale_free,
    generate_scale_free_with, parse_edge_list, parse_pajek, AttachmentMix, Benchmark,
    DirectedGraph, ReducedGraph, RootOrientation,
};
pub use quantum::{
    build_dynamical_subspace, quantum_pagerank, quantum_series, DynamicalSubspace, QuantumBackend,
    QuantumRankSeries, SzegedyOperator, WalkState, DEFAULT_STEPS,
};
pub use rank::RankVector;
