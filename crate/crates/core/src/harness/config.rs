use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::enumerate::connected_corpus;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::read_corpus;
use crate::refinement::AlgorithmSpec;
use crate::spectral::Precision;

pub const ENV_PREFIX: &str = "EIGENWL_";

/// Settings shared by every harness command; serializes to `key = value` lines.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub algs: Vec<AlgorithmSpec>,
    /// graph6 corpus file; when absent the connected graphs with 2..=corpus_max_n vertices are used.
    pub corpus: Option<PathBuf>,
    pub corpus_max_n: usize,
    /// graph6 pair corpus for the distinguishing-count check; defaults to the bundled regression corpus.
    pub pairs: Option<PathBuf>,
    pub seed: u64,
    pub budget: usize,
    pub max_base_n: usize,
    pub output: Option<PathBuf>,
    pub digits: u32,
    pub eig_rel_tol: f64,
    /// 0 lets rayon decide.
    pub threads: usize,
    /// Include wall-clock timings in reports (breaks byte-identical output).
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = Precision::default();
        RunConfig {
            command: "scan".into(),
            algs: vec![AlgorithmSpec::Wl1, AlgorithmSpec::Epwl(crate::graph::MatrixKind::Adjacency)],
            corpus: None,
            corpus_max_n: 6,
            pairs: None,
            seed: 7,
            budget: 400,
            max_base_n: 6,
            output: None,
            digits: p.digits,
            eig_rel_tol: p.eig_rel_tol,
            threads: 0,
            timing: false,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::usage(format!("bad value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::usage(format!("bad value `{value}` for `{key}` (expected true/false)"))),
    }
}

fn opt_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

impl RunConfig {
    /// Algorithm lists are `;`-separated since some specs contain commas.
    pub fn parse_algs(value: &str) -> Result<Vec<AlgorithmSpec>> {
        value.split(';').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect()
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "command" => self.command = value.to_string(),
            "algs" => self.algs = Self::parse_algs(value)?,
            "corpus" => self.corpus = opt_path(value),
            "corpus_max_n" => self.corpus_max_n = parse_num(key, value)?,
            "pairs" => self.pairs = opt_path(value),
            "seed" => self.seed = parse_num(key, value)?,
            "budget" => self.budget = parse_num(key, value)?,
            "max_base_n" => self.max_base_n = parse_num(key, value)?,
            "output" => self.output = opt_path(value),
            "digits" => self.digits = parse_num(key, value)?,
            "eig_rel_tol" => self.eig_rel_tol = parse_num(key, value)?,
            "threads" => self.threads = parse_num(key, value)?,
            "timing" => self.timing = parse_bool(key, value)?,
            other => return Err(Error::usage(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines over the defaults; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::usage(format!("config line {}: expected `key = value`", i + 1)))?;
            cfg.set(k, v).map_err(|e| Error::usage(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    /// Applies `EIGENWL_<KEY>` overrides, e.g. `EIGENWL_SEED=3`.
    pub fn apply_env<I: IntoIterator<Item = (String, String)>>(&mut self, vars: I) -> Result<()> {
        for (k, v) in vars {
            if let Some(key) = k.strip_prefix(ENV_PREFIX) {
                self.set(&key.to_ascii_lowercase(), &v).map_err(|e| Error::usage(format!("{k}: {e}")))?;
            }
        }
        Ok(())
    }

    pub fn to_kv(&self) -> String {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let algs: Vec<String> = self.algs.iter().map(ToString::to_string).collect();
        format!(
            "command = {}\nalgs = {}\ncorpus = {}\ncorpus_max_n = {}\npairs = {}\nseed = {}\nbudget = {}\n\
             max_base_n = {}\noutput = {}\ndigits = {}\neig_rel_tol = {:e}\nthreads = {}\ntiming = {}\n",
            self.command,
            algs.join(";"),
            path(&self.corpus),
            self.corpus_max_n,
            path(&self.pairs),
            self.seed,
            self.budget,
            self.max_base_n,
            path(&self.output),
            self.digits,
            self.eig_rel_tol,
            self.threads,
            self.timing,
        )
    }

    /// SHA-256 over the settings that can change results (not output, threads, timing).
    pub fn hash(&self) -> String {
        let relevant: String = self
            .to_kv()
            .lines()
            .filter(|l| !["output", "threads", "timing"].iter().any(|k| l.starts_with(&format!("{k} "))))
            .map(|l| format!("{l}\n"))
            .collect();
        Sha256::digest(relevant.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn precision(&self) -> Result<Precision> {
        Precision::new(self.digits, self.eig_rel_tol)
    }

    pub fn load_corpus(&self) -> Result<Vec<Graph>> {
        match &self.corpus {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::usage(format!("cannot read corpus {}: {e}", p.display())))?;
                read_corpus(&text)
            }
            None => connected_corpus(2, self.corpus_max_n),
        }
    }

    /// Runs `f` on a pool with the configured thread count.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        if self.threads == 0 {
            return Ok(f());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.algs = RunConfig::parse_algs("wl1; gdwl:prd:w=1,0.5 ;basisnet:L:layers=2").unwrap();
        cfg.corpus = Some("graphs.g6".into());
        cfg.timing = true;
        let back = RunConfig::parse(&cfg.to_kv()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn errors_name_the_line() {
        let err = RunConfig::parse("seed = 1\n\n# c\nbogus = 2\n").unwrap_err().to_string();
        assert!(err.contains("line 4"), "{err}");
        let err = RunConfig::parse("algs = wl1;epwl:Q\n").unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn env_overrides() {
        let mut cfg = RunConfig::default();
        cfg.apply_env([("EIGENWL_SEED".to_string(), "99".to_string()), ("OTHER".into(), "x".into())]).unwrap();
        assert_eq!(cfg.seed, 99);
        assert!(cfg.apply_env([("EIGENWL_NOPE".to_string(), "1".to_string())]).is_err());
    }

    #[test]
    fn hash_ignores_output_only_settings() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.output = Some("x.json".into());
        b.threads = 3;
        assert_eq!(a.hash(), b.hash());
        b.seed = 8;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
