use std::collections::HashSet;

use super::config::RunConfig;
use crate::error::{Error, Result};
use crate::furer::{search_counterexamples, SearchOptions, SearchResult};
use crate::graph6::{read_pair_corpus, write_graph6, write_pair_corpus, PairRecord};

/// Appends `new` to `old`, skipping pairs already present (by graph6 text).
pub fn merge_records(old: Vec<PairRecord>, new: Vec<PairRecord>) -> Vec<PairRecord> {
    let key = |r: &PairRecord| (write_graph6(&r.a), write_graph6(&r.b));
    let mut seen: HashSet<_> = old.iter().map(key).collect();
    let mut out = old;
    for r in new {
        if seen.insert(key(&r)) {
            out.push(r);
        }
    }
    out
}

/// Searches for pairs separating the two configured algorithms; witnesses are merged
/// into `cfg.output` when set, so a rerun leaves the file unchanged.
pub fn cmd_hunt(cfg: &RunConfig) -> Result<SearchResult> {
    let [a, b] = cfg.algs.as_slice() else {
        return Err(Error::usage(format!("hunt needs exactly two algorithms, got {}", cfg.algs.len())));
    };
    let opts = SearchOptions { max_base_n: cfg.max_base_n, budget: cfg.budget, seed: cfg.seed, ..Default::default() };
    let result = cfg.install(|| search_counterexamples(a, b, &opts))??;
    if let Some(path) = &cfg.output {
        let old = match std::fs::read_to_string(path) {
            Ok(text) => read_pair_corpus(&text)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(e.into()),
        };
        std::fs::write(path, write_pair_corpus(&merge_records(old, result.records()?)))?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refinement::AlgorithmSpec;

    #[test]
    fn rerun_is_idempotent() {
        let dir = std::env::temp_dir().join(format!("eigenwl-hunt-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let out = dir.join("w.txt");
        let _ = std::fs::remove_file(&out);
        let cfg = RunConfig {
            algs: vec![AlgorithmSpec::Wl1, AlgorithmSpec::Fwl2],
            budget: 3,
            max_base_n: 4,
            output: Some(out.clone()),
            ..Default::default()
        };
        let r = cmd_hunt(&cfg).unwrap();
        assert!(!r.witnesses.is_empty());
        let first = std::fs::read_to_string(&out).unwrap();
        cmd_hunt(&cfg).unwrap();
        assert_eq!(first, std::fs::read_to_string(&out).unwrap());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn needs_two_algorithms() {
        let cfg = RunConfig { algs: vec![AlgorithmSpec::Wl1], ..Default::default() };
        assert!(matches!(cmd_hunt(&cfg), Err(Error::Usage(_))));
    }
}
