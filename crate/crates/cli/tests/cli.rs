use std::path::PathBuf;
use std::process::{Command, Output};

fn eigenwl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigenwl")).args(args).env_remove("EIGENWL_SEED").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eigenwl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const C6: &str = "EhEG";
const TWO_C3: &str = "EwCW";

#[test]
fn compare_exit_codes() {
    assert_eq!(code(&eigenwl(&["compare", "--alg", "wl1", C6, TWO_C3])), 0);
    let o = eigenwl(&["compare", "--alg", "wl1", "--alg", "epwl:A", C6, TWO_C3]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("epwl:A\tdistinguished"));
    assert_eq!(code(&eigenwl(&["compare", "--alg", "epwl:Q", C6, C6])), 2);
    assert_eq!(code(&eigenwl(&["compare", "--alg", "wl1", "zz", C6])), 2);
    assert_eq!(code(&eigenwl(&["compare", "--alg", "epwl:Lhat", "B?", "B?"])), 2);
}

#[test]
fn distances_csv() {
    let o = eigenwl(&["distances", "--kind", "spd", "C`"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("u,v,value"));
    assert_eq!(text.lines().count(), 1 + 16);
    assert!(text.contains("inf"));
}

#[test]
fn scan_is_deterministic_and_reads_config() {
    let cfg = scratch("scan.cfg");
    std::fs::write(&cfg, "# small run\nalgs = wl1;epwl:A\ncorpus_max_n = 5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let a = eigenwl(&["scan", "--config", cfg]);
    let b = eigenwl(&["scan", "--config", cfg, "--threads", "2"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let csv = eigenwl(&["scan", "--config", cfg, "--format", "csv"]);
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("spec_a,spec_b,relation,"));

    let bad = scratch("bad.cfg");
    std::fs::write(&bad, "seed = 1\nalgs = wl1;nope\n").unwrap();
    let o = eigenwl(&["scan", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn env_overrides_config_and_flags_override_env() {
    let run = |env: &str, flags: &[&str]| {
        let mut args = vec!["hunt", "--dump-config"];
        args.extend_from_slice(flags);
        let o = Command::new(env!("CARGO_BIN_EXE_eigenwl")).args(&args).env("EIGENWL_SEED", env).output().unwrap();
        String::from_utf8(o.stdout).unwrap()
    };
    assert!(run("11", &[]).contains("seed = 11\n"));
    assert!(run("11", &["--seed", "12"]).contains("seed = 12\n"));
}

#[test]
fn verify_passes_and_fault_injection_fails() {
    assert_eq!(code(&eigenwl(&["verify", "--corpus-max-n", "5"])), 0);
    let o = eigenwl(&["verify", "--corpus-max-n", "7", "--digits", "1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL exact/float"));
}

#[test]
fn hunt_writes_and_reruns_identically() {
    let out = scratch("witnesses.txt");
    let _ = std::fs::remove_file(&out);
    let args = ["hunt", "--algs", "wl1;epwl:A", "--max-base-n", "4", "--budget", "20", "-o", out.to_str().unwrap()];
    assert_eq!(code(&eigenwl(&args)), 0);
    let first = std::fs::read_to_string(&out).unwrap();
    assert!(first.starts_with("# C6 vs 2C3"));
    assert_eq!(code(&eigenwl(&args)), 0);
    assert_eq!(first, std::fs::read_to_string(&out).unwrap());
    assert_eq!(code(&eigenwl(&["hunt", "--algs", "wl1"])), 2);
    let same = eigenwl(&["hunt", "--algs", "epwl:A;epwl:A", "--max-base-n", "4"]);
    assert!(String::from_utf8_lossy(&same.stdout).contains("\"witnesses\": []"));
}

#[test]
fn furer_and_token() {
    let o = eigenwl(&["furer", "C~"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert_ne!(text.lines().next(), text.lines().nth(1));
    let t = eigenwl(&["token", "A_", "--u", "0", "--v", "1"]);
    assert_eq!(String::from_utf8_lossy(&t.stdout).trim(), "-00000001.000000:-00000000.500000;+00000001.000000:+00000000.500000;");
    assert_eq!(code(&eigenwl(&["token", "Dr{", "--k", "2"])), 0);
    assert_eq!(code(&eigenwl(&["token", "Dr{", "--k", "2", "--u", "0,0", "--v", "1,2"])), 2);
}
