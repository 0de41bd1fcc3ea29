//! Every named suite not already driven by the acceptance run.

use rankconn_core::{run_suite, Budget};

fn passes(name: &str) {
    let r = run_suite(name, &Budget::default()).unwrap();
    for p in &r.properties {
        assert!(p.checked > 0, "{name}: {} never checked", p.name);
        assert_eq!(p.violations, 0, "{name}: {} failed on {:?}", p.name, p.counterexample);
    }
    assert!(r.passed);
}

#[test]
fn rankconn_n8() {
    passes("rankconn-n8");
}

#[test]
fn bixby_n8() {
    passes("bixby-n8");
}

#[test]
fn rwd_invariants() {
    passes("rwd-invariants");
}

#[test]
fn tangle_n7() {
    passes("tangle-n7");
}

#[test]
fn triplet_n7() {
    passes("triplet-n7");
}

#[test]
fn primetriplet_n8() {
    passes("primetriplet-n8");
}

#[test]
fn intprime_n7() {
    passes("intprime-n7");
}

#[test]
fn triplet_sample() {
    passes("triplet-sample");
}

#[test]
fn search_k2_n8() {
    passes("search-k2-n8");
}

#[test]
fn rwd_oracle_n7_other_seed() {
    let r = run_suite(
        "rwd-oracle-n7",
        &Budget {
            samples: Some(500),
            seed: 9,
        },
    )
    .unwrap();
    assert!(r.passed, "{r:?}");
}
