use eigenwl::enumerate::connected_corpus;
use eigenwl::harness::{cmd_scan, cmd_verify, RunConfig, CSV_HEADER, HIERARCHY_REPORT_SCHEMA, VERIFY_REPORT_SCHEMA};
use eigenwl::refinement::{AlgorithmSpec, Relation};
use eigenwl::MatrixKind;

fn validate(schema: &str, doc: &str) {
    let schema: serde_json::Value = serde_json::from_str(schema).unwrap();
    let doc: serde_json::Value = serde_json::from_str(doc).unwrap();
    let v = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = v.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn scan_report_validates_and_carries_witnesses() {
    let cfg = RunConfig {
        algs: vec![AlgorithmSpec::Wl1, AlgorithmSpec::Epwl(MatrixKind::Adjacency), AlgorithmSpec::Fwl2],
        timing: true,
        ..Default::default()
    };
    let r = cmd_scan(&cfg, &connected_corpus(2, 6).unwrap()).unwrap();
    validate(HIERARCHY_REPORT_SCHEMA, &r.to_json());
    for c in &r.relations {
        match c.relation {
            Relation::Finer => assert!(!c.witnesses_b_to_a.is_empty()),
            Relation::Coarser => assert!(!c.witnesses_a_to_b.is_empty()),
            Relation::Incomparable => assert!(!c.witnesses_a_to_b.is_empty() && !c.witnesses_b_to_a.is_empty()),
            Relation::Equivalent => {}
        }
    }
    // wl1 vs epwl:A on connected n <= 6
    assert_eq!(r.relations[0].relation, Relation::Coarser);
    let csv = r.to_csv();
    assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
    assert_eq!(csv.lines().count(), 1 + 3);
}

#[test]
fn scan_is_byte_identical_across_thread_counts() {
    let corpus = connected_corpus(2, 6).unwrap();
    let one = RunConfig { threads: 1, ..Default::default() };
    let four = RunConfig { threads: 4, ..Default::default() };
    assert_eq!(cmd_scan(&one, &corpus).unwrap().to_json(), cmd_scan(&four, &corpus).unwrap().to_json());
}

#[test]
fn verify_report_validates() {
    let cfg = RunConfig { timing: true, ..Default::default() };
    let r = cmd_verify(&cfg, &connected_corpus(2, 5).unwrap()).unwrap();
    assert!(r.pass());
    validate(VERIFY_REPORT_SCHEMA, &r.to_json());
    validate(VERIFY_REPORT_SCHEMA, &cmd_verify(&RunConfig::default(), &[]).unwrap().to_json());
}
