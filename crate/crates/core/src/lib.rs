//! Eigenspace projection invariants and the color refinement algorithms built on them.
//!
//! The crate is organised bottom-up: [`graph`] holds the graph type and its structural
//! oracles, [`spectral`] and [`exact`] compute projection tokens, [`distances`] the seven
//! graph distances, [`refinement`] the joint color refinement engine, and [`furer`] /
//! [`highorder`] the graph constructions used to probe the hierarchy. [`harness`] wires
//! everything into scans, verification suites and counterexample hunts.

pub mod biconnect;
pub mod distances;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod furer;
pub mod graph;
pub mod graph6;
pub mod harness;
pub mod highorder;
pub mod iso;
pub mod refinement;
pub mod spectral;

pub use biconnect::{biconnectivity_report, BiconnectivityReport};
pub use distances::{DistValue, DistanceKind, DistanceMatrix};
pub use enumerate::{enumerate_graphs, random_connected_graph, random_graph};
pub use error::{Error, Result};
pub use exact::{exact_pair_token, ExactPairToken};
pub use furer::{furer, twist, FurerGraph};
pub use graph::{atomic_type, build_matrix, disjoint_union, AtomicType, Graph, MatrixKind, SymmetricMatrix};
pub use graph6::{parse_graph6, read_corpus, write_graph6};
pub use highorder::{token_graph, TokenGraph};
pub use iso::is_isomorphic;
pub use refinement::{
    compare_partitions, distinguishes, stable_coloring, AlgorithmSpec, ComparisonReport, Relation,
    Run, Signature,
};
pub use spectral::{
    decompose, pair_token, spectrum_token, validate_decomposition, PairToken, Precision,
    SpectralDecomposition, SpectrumToken,
};

/// Crate version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
