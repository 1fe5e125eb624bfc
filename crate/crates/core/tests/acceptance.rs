//! The acceptance gate: one test per criterion, each printing a pass/fail
//! line and enforcing its time budget. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::rc::Rc;
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use realmod_core::backend::{Backend, BackendKind, Element};
use realmod_core::comb::{closed_terms, Tri};
use realmod_core::heyting::{check_reduction, standard_family, Ctx, TruthValue};
use realmod_core::modal::{
    check_s4, embedding_conditionals, embedding_intersections, mu, s4_witnesses, s5_refuter,
    singleton_s5_check, ProbeFamily, S5Evidence,
};
use realmod_core::report::RunConfig;
use realmod_core::suites::{replay, run};

fn finish(name: &str, t0: Instant, budget: Duration, ok: bool, detail: &str) {
    let elapsed = t0.elapsed();
    let line = format!(
        "criterion {name}: {} in {elapsed:?} (budget {budget:?}) — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    println!("{line}");
    assert!(ok, "{line}");
    assert!(
        elapsed <= budget,
        "criterion {name} exceeded its budget: {elapsed:?} > {budget:?}"
    );
}

#[test]
fn criterion_01_pca_laws() {
    let t0 = Instant::now();
    let mut failures = 0usize;
    let mut checked = 0usize;
    for be in [
        Backend::term_model(),
        Backend::scott_model(),
        Backend::k2_model(),
    ] {
        let std = be.std_elements();
        let mut pool = be.sample_pool();
        if be.kind == BackendKind::Term {
            for t in closed_terms(12) {
                pool.push(be.inject(&t));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = pool[rng.gen_range(0..pool.len())].clone();
            let b = pool[rng.gen_range(0..pool.len())].clone();
            let c = pool[rng.gen_range(0..pool.len())].clone();
            checked += 1;
            let kab = be.apply_all(&std.k, &[a.clone(), b.clone()]).defined();
            match kab {
                Some(kab) => {
                    if be.eq(&kab, &a) != Tri::Yes {
                        failures += 1;
                    }
                }
                None => failures += 1,
            }
            // s a b c = (a c)(b c) whenever the right side is defined; on
            // the term backend definedness of the composite gates the check
            let rhs = be
                .apply(&a, &c)
                .defined()
                .and_then(|ac| be.apply(&b, &c).defined().map(|bc| (ac, bc)))
                .and_then(|(ac, bc)| be.apply(&ac, &bc).defined());
            if let Some(rhs) = rhs {
                let sab = be
                    .apply_all(&std.s, &[a.clone(), b.clone()])
                    .defined()
                    .expect("s a b is always defined");
                if let Some(lhs) = be.apply(&sab, &c).defined() {
                    if be.eq(&lhs, &rhs) == Tri::No {
                        failures += 1;
                    }
                }
            }
        }
    }
    finish(
        "1 pca-laws",
        t0,
        Duration::from_secs(10),
        failures == 0,
        &format!("{checked} triples across three backends, {failures} failures"),
    );
}

#[test]
fn criterion_02_ehp_extraction_all_backends() {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    for backend in [BackendKind::Term, BackendKind::Scott, BackendKind::K2] {
        let config = RunConfig {
            backend,
            suites: vec!["ehp".to_string()],
            samples: 10,
            ..RunConfig::default()
        };
        let rep = run(&config);
        for it in rep.items.iter().filter(|i| i.item.starts_with("extract-")) {
            if it.verdict != "confirmed" {
                bad.push(format!("{backend:?}/{}: {}", it.item, it.verdict));
            }
        }
    }
    finish(
        "2 ehp-extraction",
        t0,
        Duration::from_secs(60),
        bad.is_empty(),
        &format!("canned derivations on three backends{}", if bad.is_empty() { String::new() } else { format!("; bad: {bad:?}") }),
    );
}

#[test]
fn criterion_03_witness_library_all_backends() {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    for backend in [BackendKind::Term, BackendKind::Scott, BackendKind::K2] {
        let config = RunConfig {
            backend,
            suites: vec!["ehp".to_string()],
            samples: 10,
            ..RunConfig::default()
        };
        let rep = run(&config);
        for it in rep
            .items
            .iter()
            .filter(|i| i.item.starts_with("lib-") || i.item.starts_with("law-"))
        {
            if it.verdict != "confirmed" {
                bad.push(format!("{backend:?}/{}: {}", it.item, it.verdict));
            }
        }
    }
    finish(
        "3 witness-library",
        t0,
        Duration::from_secs(30),
        bad.is_empty(),
        &format!("e1..e12 and the operator laws on three backends{}", if bad.is_empty() { String::new() } else { format!("; bad: {bad:?}") }),
    );
}

#[test]
fn criterion_04_s4() {
    let t0 = Instant::now();
    let ctx = Ctx::new(Backend::term_model());
    let probes = ProbeFamily::default_family(&ctx);
    let w = s4_witnesses(&ctx);
    let fam = standard_family(&ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..10 {
        let base = fam[rng.gen_range(0..fam.len())].clone();
        let base2 = fam[rng.gen_range(0..fam.len())].clone();
        let f = mu(&ctx, 1, &format!("f{i}"), Rc::new(move |_| base.clone()));
        let g = mu(&ctx, 1, &format!("g{i}"), Rc::new(move |_| base2.clone()));
        for (name, v) in check_s4(&ctx, &w, &f, &g, &probes) {
            if !v.is_confirmed() {
                ok = false;
                detail = format!("{name}: {v}");
                break;
            }
        }
    }
    // mu laws and the embedding actions through the s4 suite items
    let rep = run(&RunConfig {
        suites: vec!["s4".to_string()],
        ..RunConfig::default()
    });
    if !rep.exit_ok() {
        ok = false;
        detail = format!("s4 suite: {} unexpected", rep.unexpected);
    }
    // both directions of the embedding actions explicitly
    let x = fam[2].clone();
    let x2 = x.clone();
    let f: Rc<dyn Fn(usize) -> TruthValue> = Rc::new(move |_| x2.clone());
    let g: Rc<dyn Fn(usize) -> TruthValue> = Rc::new(|_| TruthValue::top());
    let probes2 = probes.with_extra(vec![("fval".to_string(), x)]);
    for (name, v) in embedding_conditionals(&ctx, 1, f.clone(), g.clone(), &probes2)
        .into_iter()
        .chain(embedding_intersections(&ctx, 1, vec![f, g], &probes2))
    {
        if !v.is_confirmed() {
            ok = false;
            detail = format!("{name}: {v}");
            break;
        }
    }
    finish(
        "4 s4",
        t0,
        Duration::from_secs(60),
        ok,
        if detail.is_empty() {
            "K/T/4, necessitation, the embedding laws, and both embedding actions"
        } else {
            &detail
        },
    );
}

#[test]
fn criterion_05_s5_failure_and_singleton_validity() {
    let t0 = Instant::now();
    let ctx = Ctx::new(Backend::term_model());
    let probes = ProbeFamily::default_family(&ctx);
    let candidates = closed_terms(300);
    let recs = s5_refuter(&ctx, &candidates);
    let confirmed = recs.iter().filter(|r| r.verdict.is_confirmed()).count();
    let refuted = recs.iter().filter(|r| r.verdict.is_refuted()).count();
    let inconclusive = recs.len() - confirmed - refuted;
    let mut ok = confirmed == 0 && inconclusive * 20 < recs.len();
    let mut detail = format!(
        "{refuted}/300 candidates refuted, {inconclusive} inconclusive, {confirmed} confirmed"
    );
    // singleton-domain validity for 10 sampled elements
    let fam = standard_family(&ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..10 {
        let (f, ev) = if i % 3 == 0 {
            (
                mu(&ctx, 1, "bot", Rc::new(|_| TruthValue::bot())),
                S5Evidence::BotPiEquivalent {
                    to_botpi: ctx.backend.std_elements().i,
                },
            )
        } else {
            let base = loop {
                let cand = fam[rng.gen_range(0..fam.len())].clone();
                if !cand.is_bot() {
                    break cand;
                }
            };
            (
                mu(&ctx, 1, &format!("g{i}"), Rc::new(move |_| base.clone())),
                S5Evidence::MfEmpty,
            )
        };
        let v = singleton_s5_check(&ctx, &f, &ev, &probes);
        if !v.is_confirmed() {
            ok = false;
            detail = format!("singleton {i}: {v}");
            break;
        }
    }
    finish("5 s5", t0, Duration::from_secs(300), ok, &detail);
}

#[test]
fn criterion_06_goedel_translation() {
    let t0 = Instant::now();
    let rep = run(&RunConfig {
        suites: vec!["goedel".to_string()],
        cutoff: 6,
        ..RunConfig::default()
    });
    let total = rep.items.len();
    let ok = rep.exit_ok() && total >= 30;
    finish(
        "6 goedel-translation",
        t0,
        Duration::from_secs(120),
        ok,
        &format!("{total} corpus formulas, {} unexpected", rep.unexpected),
    );
}

#[test]
fn criterion_07_soundness_harness() {
    let t0 = Instant::now();
    // arithmetic structure (includes the gated free-variable instantiation
    // and the existence refuter), the set structure, the graph structure
    let rep = run(&RunConfig {
        suites: vec!["semantics".to_string()],
        ..RunConfig::default()
    });
    let mut ok = rep.exit_ok();
    let mut detail = format!("arith harness: {} unexpected", rep.unexpected);

    // the existence-predicate sweep over 200 candidates
    let ctx = Ctx::new(Backend::term_model());
    let candidates = closed_terms(200);
    let sweep = realmod_core::models::arith::existence_refuter(&candidates, &ctx);
    let refuted = sweep.records.iter().filter(|(_, v)| v.is_refuted()).count();
    if refuted != 200 {
        ok = false;
        detail = format!("existence refuter: only {refuted}/200 refuted");
    }

    // the set structure harness (classical quantifier: the free-variable
    // instantiation must run and confirm)
    let nums = realmod_core::models::setmodel::set_numerals(4, &ctx);
    let pack = realmod_core::models::setmodel::set_witness_pack(&ctx);
    let domain: Vec<_> = nums.numerals.iter().take(3).cloned().collect();
    let s = realmod_core::models::setmodel::set_structure(domain, &pack, &ctx);
    let probes = ProbeFamily::default_family(&ctx);
    let f = realmod_core::semantics::Formula::Eq(
        realmod_core::semantics::FTerm::Var("x".to_string()),
        realmod_core::semantics::FTerm::Var("x".to_string()),
    );
    for it in realmod_core::semantics::axiom_harness(&s, &f, "x", 0, &probes, &ctx) {
        if it.verdict.is_refuted() {
            ok = false;
            detail = format!("set harness {}: {}", it.name, it.verdict);
        }
    }
    let fvi = realmod_core::semantics::free_variable_instantiation(&s, &f, "x", 0, &probes, &ctx);
    if !fvi.iter().all(|i| i.verdict.is_confirmed()) {
        ok = false;
        detail = "set free-variable instantiation not confirmed".to_string();
    }

    // the graph structure harness
    let sctx = Ctx::new(Backend::scott_model());
    let s = realmod_core::models::scottmodel::scott_structure(&sctx);
    let sprobes = ProbeFamily::default_family(&sctx);
    for it in realmod_core::semantics::axiom_harness(&s, &f, "x", 0, &sprobes, &sctx) {
        if it.verdict.is_refuted() {
            ok = false;
            detail = format!("scott harness {}: {}", it.name, it.verdict);
        }
    }
    finish("7 soundness-harness", t0, Duration::from_secs(180), ok, &detail);
}

#[test]
fn criterion_08_arithmetic_model() {
    let t0 = Instant::now();
    let rep = run(&RunConfig {
        suites: vec!["arith".to_string()],
        cutoff: 8,
        ..RunConfig::default()
    });
    let induction = rep
        .items
        .iter()
        .filter(|i| i.item.starts_with("induction-"))
        .count();
    let ct = rep.items.iter().filter(|i| i.item.starts_with("ct-")).count();
    let sigma = rep
        .items
        .iter()
        .filter(|i| i.item.starts_with("sigma1-"))
        .count();
    let ok = rep.exit_ok() && induction >= 5 && ct >= 3 && sigma >= 5;
    finish(
        "8 arithmetic-model",
        t0,
        Duration::from_secs(180),
        ok,
        &format!(
            "{induction} induction, {ct} extraction, {sigma} stability items; {} unexpected",
            rep.unexpected
        ),
    );
}

#[test]
fn criterion_09_set_model() {
    let t0 = Instant::now();
    let rep = run(&RunConfig {
        suites: vec!["set".to_string()],
        cutoff: 6,
        ..RunConfig::default()
    });
    let ok = rep.exit_ok();
    // the asymmetry pairing: atomic stability confirmed while the negated
    // atomic sweep refutes everything
    let stab = rep
        .items
        .iter()
        .find(|i| i.item == "atomic-stability")
        .map(|i| i.verdict == "confirmed")
        .unwrap_or(false);
    let sweep = rep
        .items
        .iter()
        .find(|i| i.item == "negated-atomic-refuter")
        .map(|i| i.verdict == "confirmed")
        .unwrap_or(false);
    finish(
        "9 set-model",
        t0,
        Duration::from_secs(300),
        ok && stab && sweep,
        &format!(
            "order table, witness pack, axiom instances; stability {} with the negated sweep {}",
            stab, sweep
        ),
    );
}

#[test]
fn criterion_10_scott_model() {
    let t0 = Instant::now();
    let rep = run(&RunConfig {
        suites: vec!["scott".to_string()],
        backend: BackendKind::Scott,
        ..RunConfig::default()
    });
    finish(
        "10 scott-model",
        t0,
        Duration::from_secs(120),
        rep.exit_ok(),
        &format!(
            "certificate, choice, fixed point, refuters: {} unexpected",
            rep.unexpected
        ),
    );
}

#[test]
fn criterion_11_determinism_and_replay() {
    let t0 = Instant::now();
    let config = RunConfig {
        suites: vec!["s5".to_string(), "ehp".to_string()],
        ..RunConfig::default()
    };
    let r1 = run(&config);
    let r2 = run(&config);
    let identical = r1.to_json() == r2.to_json();
    let mut replays_ok = true;
    for it in r1.items.iter().filter(|i| i.verdict == "refuted").take(3) {
        if replay(&r1, &it.item).is_err() {
            replays_ok = false;
        }
    }
    finish(
        "11 determinism",
        t0,
        Duration::from_secs(60),
        identical && replays_ok,
        &format!("byte-identical reports: {identical}; refutations replay: {replays_ok}"),
    );
}

/// The remaining per-element spot checks named by the pca kernel: the
/// self-application identity, numeral distinctness at scale, and the
/// fixed-point unfolding, all against independent recomputation.
#[test]
fn kernel_spot_checks() {
    let t0 = Instant::now();
    let be = Backend::term_model();
    let std = be.std_elements();
    // skk and s k (s k) both act as identity on numerals
    let mut ok = true;
    for n in 0..5 {
        let v = be.apply(&std.i, &be.numeral(n)).defined().unwrap();
        ok &= be.eq(&v, &be.numeral(n)) == Tri::Yes;
    }
    let ctx = Ctx::new(be.clone());
    // e5 : X & Y ~> X over 50 sampled pairs
    let lib = realmod_core::heyting::uniform_witnesses(&ctx);
    let fam = standard_family(&ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let x = fam[rng.gen_range(0..fam.len())].clone();
        let y = fam[rng.gen_range(0..fam.len())].clone();
        let v = check_reduction(
            &ctx,
            lib.get("e5").unwrap(),
            &TruthValue::meet(&x, &y),
            &x,
        );
        ok &= !v.is_refuted();
    }
    // k never lands a constant into bottom unrefuted
    let one = be.numeral(1);
    let ka = be.apply(&std.k, &one).defined().unwrap();
    let x = TruthValue::singleton(be.numeral(0));
    let v = check_reduction(&ctx, &ka, &x, &TruthValue::bot());
    ok &= v.is_refuted();
    let _ = Element::Term as fn(_) -> _;
    finish(
        "kernel spot checks",
        t0,
        Duration::from_secs(30),
        ok,
        "identity, projection library, refutation path",
    );
}
