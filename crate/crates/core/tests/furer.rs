use eigenwl::enumerate::connected_corpus;
use eigenwl::furer::{furer_pair, parity_check, search_counterexamples, SearchOptions, SearchStatus};
use eigenwl::refinement::{distinguishes, AlgorithmSpec};
use eigenwl::{furer, is_isomorphic, write_graph6, MatrixKind};
use rayon::prelude::*;

#[test]
fn invariants_hold_for_all_bases_up_to_six() {
    let bases = connected_corpus(2, 6).unwrap();
    bases.par_iter().filter(|b| b.edge_count() <= 9).for_each(|b| {
        furer(b).unwrap().check_invariants().unwrap();
    });
}

/// Twisted products are isomorphic iff the twist sets have equal parity (single and double twists).
#[test]
fn twist_parity_for_bases_up_to_five() {
    let bases = connected_corpus(2, 5).unwrap();
    bases.par_iter().for_each(|base| {
        let e = base.edges();
        for (i, &a) in e.iter().enumerate() {
            assert!(!parity_check(base, &[], &[a]).unwrap(), "{}", write_graph6(base));
            for &b in &e[i + 1..] {
                assert!(parity_check(base, &[], &[a, b]).unwrap(), "{}", write_graph6(base));
                assert!(!parity_check(base, &[a], &[a, b]).unwrap());
            }
        }
    });
}

#[test]
fn wl1_never_separates_a_furer_pair() {
    for base in connected_corpus(3, 5).unwrap().into_iter().filter(|b| b.min_degree() >= 2) {
        let (g, h) = furer_pair(&base).unwrap();
        assert!(is_isomorphic(&g, &h).is_none());
        assert!(!distinguishes(&AlgorithmSpec::Wl1, &g, &h).unwrap(), "{}", write_graph6(&base));
    }
}

#[test]
fn search_finds_wl1_epwl_witness_and_nothing_against_itself() {
    let opts = SearchOptions { max_base_n: 4, ..Default::default() };
    let epwl = AlgorithmSpec::Epwl(MatrixKind::Adjacency);
    let r = search_counterexamples(&AlgorithmSpec::Wl1, &epwl, &opts).unwrap();
    assert!(!r.witnesses.is_empty());
    assert!(r.witnesses.iter().all(|w| !w.a_distinguishes && w.b_distinguishes));
    let same = search_counterexamples(&epwl, &epwl, &opts).unwrap();
    assert!(same.witnesses.is_empty());
    let none = search_counterexamples(&AlgorithmSpec::Wl1, &epwl, &SearchOptions { budget: 0, ..opts }).unwrap();
    assert_eq!(none.status, SearchStatus::BudgetExhausted);
    assert_eq!(none.evaluated, 0);
}
