//! Scan, verify and hunt commands shared by the CLI and the acceptance suite.

mod config;
mod hunt;
mod scan;
mod verify;

pub use config::{RunConfig, ENV_PREFIX};
pub use hunt::{cmd_hunt, merge_records};
pub use scan::{cmd_scan, AlgorithmBuckets, HierarchyReport, CSV_HEADER};
pub use verify::{
    check_biconnectivity, check_distance_bound, check_distance_cross_forms, check_exact_agreement, check_hierarchy,
    check_isomorphism_invariance, check_pair_ordering, check_pswl_pair_tokens, check_spectral_residuals, cmd_verify,
    hierarchy_directions, Direction, PropertyResult, VerifyReport, DISTANCE_GROUP_TOL,
};

/// Known hard pairs (C6 vs 2C3 and Fürer witnesses) used as the default pair corpus.
pub const REGRESSION_CORPUS: &str = include_str!("../../data/regression.txt");

pub const HIERARCHY_REPORT_SCHEMA: &str = include_str!("../../schema/hierarchy_report.schema.json");
pub const VERIFY_REPORT_SCHEMA: &str = include_str!("../../schema/verify_report.schema.json");
