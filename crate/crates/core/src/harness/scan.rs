use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::refinement::{compare_runs, stable_coloring_with, ComparisonReport, Run};
use crate::spectral::Precision;

#[derive(Clone, Debug, Serialize)]
pub struct AlgorithmBuckets {
    pub spec: String,
    pub classes: usize,
    pub rounds: usize,
    /// Graph indices with equal signatures, ordered by first member.
    pub buckets: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyReport {
    pub version: String,
    pub config_hash: String,
    pub precision: Precision,
    pub graphs: usize,
    pub algorithms: Vec<AlgorithmBuckets>,
    /// One cell per unordered algorithm pair (a before b in the list).
    pub relations: Vec<ComparisonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<Vec<(String, u128)>>,
}

pub const CSV_HEADER: &str = "spec_a,spec_b,relation,classes_a,classes_b,violations_a_to_b,violations_b_to_a,witness";

impl HierarchyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Relation matrix as CSV; `witness` is the first pair `i:j` separating the two specs.
    pub fn to_csv(&self) -> String {
        let mut s = format!("{CSV_HEADER}\n");
        for r in &self.relations {
            let w = r
                .witnesses_a_to_b
                .first()
                .or(r.witnesses_b_to_a.first())
                .map(|(i, j)| format!("{i}:{j}"))
                .unwrap_or_default();
            s.push_str(&format!(
                "{},{},{:?},{},{},{},{},{}\n",
                csv_field(&r.spec_a),
                csv_field(&r.spec_b),
                r.relation,
                r.classes_a,
                r.classes_b,
                r.violations_a_to_b,
                r.violations_b_to_a,
                w
            ));
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s.to_string()
    }
}

/// One joint run per algorithm (in parallel), then every pairwise comparison.
pub fn cmd_scan(cfg: &RunConfig, corpus: &[Graph]) -> Result<HierarchyReport> {
    if cfg.algs.is_empty() {
        return Err(Error::usage("scan needs at least one algorithm"));
    }
    let prec = cfg.precision()?;
    let runs: Vec<(Run, u128)> = cfg.install(|| {
        cfg.algs
            .par_iter()
            .map(|spec| {
                let t = Instant::now();
                let run = stable_coloring_with(spec, corpus, &prec)?;
                Ok((run, t.elapsed().as_millis()))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let algorithms = runs
        .iter()
        .map(|(r, _)| AlgorithmBuckets {
            spec: r.spec().to_string(),
            classes: r.buckets().len(),
            rounds: r.rounds(),
            buckets: r.buckets(),
        })
        .collect();
    let mut relations = Vec::new();
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            relations.push(compare_runs(&runs[i].0, &runs[j].0)?);
        }
    }
    Ok(HierarchyReport {
        version: crate::VERSION.to_string(),
        config_hash: cfg.hash(),
        precision: prec,
        graphs: corpus.len(),
        algorithms,
        relations,
        timing_ms: cfg.timing.then(|| runs.iter().map(|(r, t)| (r.spec().to_string(), *t)).collect()),
    })
}
