//! Shared fixtures for the criterion benches.

use eigenwl::enumerate::{connected_corpus, random_connected_corpus};
use eigenwl::Graph;

/// All connected graphs with 2..=max_n vertices.
pub fn exhaustive(max_n: usize) -> Vec<Graph> {
    connected_corpus(2, max_n).expect("small n")
}

/// Fixed-seed random connected graphs, as used by the distance suites.
pub fn random(count: usize, max_n: usize) -> Vec<Graph> {
    random_connected_corpus(count, max_n, 1)
}
