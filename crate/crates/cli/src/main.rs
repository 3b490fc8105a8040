use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eigenwl::distances::{distance, DistanceKind};
use eigenwl::furer::furer_pair;
use eigenwl::harness::{cmd_hunt, cmd_scan, cmd_verify, RunConfig};
use eigenwl::highorder::{token_projection_entry, token_spectrum_with};
use eigenwl::refinement::{distinguishes_with, AlgorithmSpec};
use eigenwl::spectral::{pair_token_with, spectrum_token_with};
use eigenwl::{furer, parse_graph6, twist, write_graph6, Error, Graph, MatrixKind, Result};

#[derive(Parser)]
#[command(name = "eigenwl", version, about = "Spectral invariants and color refinement hierarchies on small graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exit 1 if any of the algorithms distinguishes the two graph6 graphs, 0 otherwise.
    Compare {
        #[arg(long = "alg", required = true)]
        algs: Vec<AlgorithmSpec>,
        g: String,
        h: String,
        #[arg(long, default_value_t = 6)]
        digits: u32,
    },
    /// Joint runs over a corpus and the pairwise relation matrix.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run every property check; exit 1 on any violation.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Search Fürer pairs for graphs separating exactly one of two algorithms.
    Hunt {
        #[command(flatten)]
        common: Common,
    },
    /// Distance matrix of one graph as CSV (`u,v,value`).
    Distances {
        g: String,
        /// spd, rd, htd, ctd, biharmonic, prd[:w=..], diffusion[:tau=..]
        #[arg(long, default_value = "spd")]
        kind: DistanceKind,
    },
    /// Fürer product of a base graph and a twisted copy, as graph6.
    Furer {
        base: String,
        /// Base edges to twist, e.g. `0-1`; defaults to the first edge.
        #[arg(long)]
        twist: Vec<String>,
    },
    /// Spectrum token, or the projection token of a pair, of a graph or its k-th token graph.
    Token {
        g: String,
        #[arg(long, default_value = "A")]
        kind: MatrixKind,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Comma-separated vertex set; needs --v too.
        #[arg(long, requires = "v")]
        u: Option<String>,
        #[arg(long, requires = "u")]
        v: Option<String>,
        #[arg(long, default_value_t = 6)]
        digits: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Overrides applied on top of the config file and `EIGENWL_*` variables.
#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Repeatable; replaces the configured list.
    #[arg(long = "algs", value_delimiter = ';')]
    algs: Vec<AlgorithmSpec>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    corpus_max_n: Option<usize>,
    #[arg(long)]
    pairs: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    max_base_n: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long)]
    eig_rel_tol: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    timing: bool,
    /// Print the effective config as key = value lines and exit.
    #[arg(long)]
    dump_config: bool,
}

impl Common {
    fn resolve(&self, command: &str) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::parse(
                &std::fs::read_to_string(p)
                    .map_err(|e| Error::usage(format!("cannot read config {}: {e}", p.display())))?,
            )?,
            None => RunConfig::default(),
        };
        cfg.command = command.to_string();
        cfg.apply_env(std::env::vars())?;
        if !self.algs.is_empty() {
            cfg.algs = self.algs.clone();
        }
        macro_rules! over {
            ($($f:ident),*) => { $( if let Some(x) = &self.$f { cfg.$f = x.clone(); } )* };
        }
        over!(corpus_max_n, seed, budget, max_base_n, digits, eig_rel_tol, threads);
        macro_rules! over_opt {
            ($($f:ident),*) => { $( if self.$f.is_some() { cfg.$f = self.$f.clone(); } )* };
        }
        over_opt!(corpus, pairs, output);
        cfg.timing |= self.timing;
        cfg.precision()?;
        Ok(cfg)
    }
}

fn graph(text: &str) -> Result<Graph> {
    parse_graph6(text.trim())
}

fn vertex_set(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::usage(format!("bad vertex `{s}`"))))
        .collect()
}

/// Writes to `--output` when given, stdout otherwise.
fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Compare { algs, g, h, digits } => {
            let prec = eigenwl::Precision::new(digits, eigenwl::Precision::default().eig_rel_tol)?;
            let (g, h) = (graph(&g)?, graph(&h)?);
            let mut any = false;
            for spec in &algs {
                spec.validate(&g)?;
                spec.validate(&h)?;
                let d = distinguishes_with(spec, &g, &h, &prec)?;
                println!("{spec}\t{}", if d { "distinguished" } else { "not distinguished" });
                any |= d;
            }
            Ok(u8::from(any))
        }
        Command::Scan { common, format } => {
            let cfg = common.resolve("scan")?;
            if common.dump_config {
                print!("{}", cfg.to_kv());
                return Ok(0);
            }
            let report = cmd_scan(&cfg, &cfg.load_corpus()?)?;
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
            };
            emit(&cfg.output, &text)?;
            Ok(0)
        }
        Command::Verify { common } => {
            let cfg = common.resolve("verify")?;
            if common.dump_config {
                print!("{}", cfg.to_kv());
                return Ok(0);
            }
            let report = cmd_verify(&cfg, &cfg.load_corpus()?)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for p in &report.properties {
                let t = p.millis.map(|m| format!(" {m}ms")).unwrap_or_default();
                eprintln!(
                    "{} {} ({} checked, {} violations{t}) {}",
                    if p.pass { "PASS" } else { "FAIL" },
                    p.name,
                    p.checked,
                    p.violations,
                    p.detail
                );
            }
            emit(&cfg.output, &(report.to_json() + "\n"))?;
            Ok(u8::from(!report.pass()))
        }
        Command::Hunt { common } => {
            let cfg = common.resolve("hunt")?;
            if common.dump_config {
                print!("{}", cfg.to_kv());
                return Ok(0);
            }
            let r = cmd_hunt(&cfg)?;
            eprintln!("{} candidates ({} skipped), {:?}, {} witnesses", r.evaluated, r.skipped, r.status, r.witnesses.len());
            if cfg.output.is_none() {
                println!("{}", serde_json::to_string_pretty(&r).expect("serializes"));
            }
            Ok(0)
        }
        Command::Distances { g, kind } => {
            let d = distance(&graph(&g)?, &kind)?;
            print!("{}", d.to_csv());
            Ok(0)
        }
        Command::Furer { base, twist: edges } => {
            let base = graph(&base)?;
            let (product, twisted) = if edges.is_empty() {
                furer_pair(&base)?
            } else {
                let set = edges
                    .iter()
                    .map(|e| {
                        let (a, b) = e.split_once('-').ok_or_else(|| Error::usage(format!("bad edge `{e}`")))?;
                        let v = vertex_set(&format!("{a},{b}"))?;
                        Ok((v[0], v[1]))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let fg = furer(&base)?;
                (fg.product().clone(), twist(&fg, &set)?)
            };
            println!("{}\n{}", write_graph6(&product), write_graph6(&twisted));
            Ok(0)
        }
        Command::Token { g, kind, k, u, v, digits } => {
            let g = graph(&g)?;
            let prec = eigenwl::Precision::new(digits, eigenwl::Precision::default().eig_rel_tol)?;
            match (u, v) {
                (Some(u), Some(v)) => {
                    let (u, v) = (vertex_set(&u)?, vertex_set(&v)?);
                    let t = if k == 1 {
                        if u.len() != 1 || v.len() != 1 {
                            return Err(Error::usage("with k=1, --u and --v take one vertex each"));
                        }
                        pair_token_with(&g, kind, u[0], v[0], &prec)?
                    } else {
                        if digits != 6 {
                            return Err(Error::usage("--digits is fixed at 6 for token-graph pair entries"));
                        }
                        token_projection_entry(&g, k, kind, &u, &v)?
                    };
                    println!("{}", t.render(&prec));
                }
                _ => {
                    let s = if k == 1 {
                        spectrum_token_with(&g, kind, &prec)?
                    } else {
                        token_spectrum_with(&g, k, kind, &prec)?
                    };
                    for (l, m) in s.entries() {
                        println!("{}\t{m}", prec.format(*l));
                    }
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
