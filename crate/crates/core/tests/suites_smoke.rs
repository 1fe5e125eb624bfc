//! End-to-end suite runs: every suite on its natural backend, with
//! byte-identical reports across repeated runs and replayable refutations.

use realmod_core::backend::BackendKind;
use realmod_core::report::RunConfig;
use realmod_core::suites::{replay, run};

#[test]
fn ehp_suite_is_green() {
    let config = RunConfig {
        suites: vec!["ehp".to_string()],
        ..RunConfig::default()
    };
    let r = run(&config);
    assert!(r.exit_ok(), "{}", r.to_text());
}

#[test]
fn s4_and_s5_suites_green() {
    let config = RunConfig {
        suites: vec!["s4".to_string()],
        ..RunConfig::default()
    };
    let r = run(&config);
    assert!(r.exit_ok(), "{}", r.to_text());
    let config = RunConfig {
        suites: vec!["s5".to_string()],
        ..RunConfig::default()
    };
    let r = run(&config);
    assert!(r.exit_ok(), "{}", r.to_text());
}

#[test]
fn semantics_and_goedel_suites_green() {
    let config = RunConfig {
        suites: vec!["semantics".to_string(), "goedel".to_string()],
        ..RunConfig::default()
    };
    let r = run(&config);
    assert!(r.exit_ok(), "{}", r.to_text());
}

#[test]
fn arith_suite_green() {
    let config = RunConfig {
        suites: vec!["arith".to_string()],
        ..RunConfig::default()
    };
    let r = run(&config);
    assert!(r.exit_ok(), "{}", r.to_text());
}

#[test]
fn set_suite_green() {
    let config = RunConfig {
        suites: vec!["set".to_string()],
        ..RunConfig::default()
    };
    let r = run(&config);
    assert!(r.exit_ok(), "{}", r.to_text());
}

#[test]
fn scott_suite_green() {
    let config = RunConfig {
        suites: vec!["scott".to_string()],
        backend: BackendKind::Scott,
        ..RunConfig::default()
    };
    let r = run(&config);
    assert!(r.exit_ok(), "{}", r.to_text());
}

#[test]
fn k2_smoke_green() {
    let config = RunConfig {
        suites: vec!["k2-smoke".to_string()],
        ..RunConfig::default()
    };
    let r = run(&config);
    assert!(r.exit_ok(), "{}", r.to_text());
}

#[test]
fn determinism_and_replay() {
    let config = RunConfig {
        suites: vec!["s5".to_string()],
        ..RunConfig::default()
    };
    let r1 = run(&config);
    let r2 = run(&config);
    assert_eq!(r1.to_json(), r2.to_json(), "reports must be byte-identical");
    // every stored refutation replays
    let refuted: Vec<String> = r1
        .items
        .iter()
        .filter(|i| i.verdict == "refuted")
        .map(|i| i.item.clone())
        .collect();
    assert!(!refuted.is_empty());
    for name in refuted.iter().take(3) {
        replay(&r1, name).unwrap_or_else(|e| panic!("replay {name}: {e}"));
    }
    // a tampered config must be flagged, not silently replayed
    let mut tampered = r1.clone();
    tampered.config.seed = r1.config.seed + 1;
    tampered.items[0].verdict = "refuted".to_string();
    tampered.items[0].counterexample = Some("bogus".to_string());
    let name = tampered.items[0].item.clone();
    assert!(replay(&tampered, &name).is_err(), "tampered replay must mismatch");
}
