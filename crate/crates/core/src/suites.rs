//! Suite definitions: each suite runs a battery of checks with declared
//! expected verdicts and assembles report items. The positive results and
//! the counterexample sweeps are both acceptance-relevant, so expectations
//! distinguish confirmed claims from expected refutations.

use std::collections::BTreeMap;
use std::rc::Rc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::backend::{Backend, BackendKind, EvalParams};
use crate::comb::{closed_terms, Tri};
use crate::ehp::{canned_library, le_sides, EhpFormula};
use crate::formula_syntax::parse_corpus;
use crate::heyting::{
    check_reduction, standard_family, uniform_witnesses, Ctx, TruthValue, Verdict,
};
use crate::modal::{
    box_op, check_s4, embedding_conditionals, embedding_intersections, mu, q_set, s4_witnesses, s5_analysis, s5_refuter, singleton_s5_check, BotObservation,
    ProbeFamily, S5Evidence,
};
use crate::models::arith::{
    arith_structure, barcan_refuter, check_induction, ct_instance_realizer, eval_bool,
    existence_refuter, sigma1_stability_check, TURegistry,
};
use crate::models::scottmodel;
use crate::models::setmodel::{
    coded_subset, eq_is_empty, mem_is_empty, negated_atomic_refuter, set_axiom_witnesses,
    set_eq, set_mem, set_numerals, set_structure, set_witness_pack,
};
use crate::report::{item, Expectation, Report, ReportItem, RunConfig};
use crate::semantics::{
    axiom_harness, classify_quantifier, free_variable_instantiation, goedel_check,
};

const GOEDEL_CORPUS: &str = include_str!("../../../corpus/formulas/goedel.fml");
const INDUCTION_CORPUS: &str = include_str!("../../../corpus/formulas/induction.fml");
const SIGMA1_CORPUS: &str = include_str!("../../../corpus/formulas/sigma1.fml");
const DEFAULT_PROBES: &str = include_str!("../../../corpus/probes/default.probes");
const WIDE_PROBES: &str = include_str!("../../../corpus/probes/wide.probes");

pub const ALL_SUITES: &[&str] = &[
    "ehp", "s4", "s5", "semantics", "goedel", "arith", "set", "scott", "k2-smoke",
];

/// Parse a probe-family file: lines `label: bot|top|num N`.
pub fn parse_probe_file(text: &str, ctx: &Ctx) -> Result<ProbeFamily, String> {
    let mut extra = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, spec) = line
            .split_once(':')
            .ok_or_else(|| format!("missing `label:` in probe line {line}"))?;
        let spec = spec.trim();
        let tv = if spec == "bot" {
            TruthValue::bot()
        } else if spec == "top" {
            TruthValue::top()
        } else if let Some(n) = spec.strip_prefix("num ") {
            let n: u64 = n
                .trim()
                .parse()
                .map_err(|_| format!("bad numeral in probe line {line}"))?;
            TruthValue::singleton(ctx.backend.numeral(n))
        } else {
            return Err(format!("unknown probe spec `{spec}`"));
        };
        extra.push((label.trim().to_string(), tv));
    }
    Ok(ProbeFamily::new(extra))
}

pub fn probes_by_label(label: &str, ctx: &Ctx) -> Result<ProbeFamily, String> {
    match label {
        "default" => parse_probe_file(DEFAULT_PROBES, ctx),
        "wide" => parse_probe_file(WIDE_PROBES, ctx),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read probe file {path}: {e}"))?;
            parse_probe_file(&text, ctx)
        }
    }
}

pub fn context_for(config: &RunConfig) -> Ctx {
    let params = EvalParams {
        fuel: config.fuel,
        truncation: config.truncation,
        obs: 16,
        prefix: config.prefix,
    };
    let backend = Backend::new(config.backend, params);
    let mut ctx = Ctx::new(backend);
    ctx.samples = config.samples;
    ctx
}

/// Execute the configured suites. Unknown suite names produce an error item
/// so a typo cannot silently pass.
pub fn run(config: &RunConfig) -> Report {
    let ctx = context_for(config);
    let probes = probes_by_label(&config.probes, &ctx)
        .unwrap_or_else(|e| panic!("probe family: {e}"));
    let mut items = Vec::new();
    for suite in &config.suites {
        match suite.as_str() {
            "ehp" => suite_ehp(config, &ctx, &mut items),
            "s4" => suite_s4(config, &ctx, &probes, &mut items),
            "s5" => suite_s5(config, &ctx, &probes, &mut items),
            "semantics" => suite_semantics(config, &ctx, &probes, &mut items),
            "goedel" => suite_goedel(config, &ctx, &probes, &mut items),
            "arith" => suite_arith(config, &ctx, &probes, &mut items),
            "set" => suite_set(config, &ctx, &probes, &mut items),
            "scott" => suite_scott(config, &probes, &mut items),
            "k2-smoke" => suite_k2_smoke(config, &mut items),
            other => items.push(ReportItem {
                suite: other.to_string(),
                item: "unknown-suite".to_string(),
                claim: "config".to_string(),
                verdict: "inconclusive".to_string(),
                expected: Expectation::Confirmed,
                ok: false,
                counterexample: None,
                detail: Some(format!("no suite named {other}")),
                experiment: false,
            }),
        }
    }
    Report::assemble(config.clone(), probes.labels(), items)
}

/// Replay a single item of a stored report under its stored config.
pub fn replay(report: &Report, item_name: &str) -> Result<ReportItem, String> {
    let fresh = run(&report.config);
    let stored = report
        .items
        .iter()
        .find(|i| i.item == item_name)
        .ok_or_else(|| format!("no item named {item_name}"))?;
    let new = fresh
        .items
        .iter()
        .find(|i| i.item == item_name)
        .ok_or_else(|| format!("item {item_name} missing on replay"))?;
    if new.verdict != stored.verdict || new.counterexample != stored.counterexample {
        return Err(format!(
            "replay mismatch for {item_name}: stored {} vs fresh {}",
            stored.verdict, new.verdict
        ));
    }
    Ok(new.clone())
}

fn law_cases(
    ctx: &Ctx,
    x: &TruthValue,
    y: &TruthValue,
    d: &TruthValue,
) -> Vec<(&'static str, TruthValue, TruthValue)> {
    let o = TruthValue::ominus;
    let _ = ctx;
    vec![
        ("d2", x.clone(), o(d, x)),
        ("d3", o(d, &o(d, x)), o(d, x)),
        ("d4", o(d, &o(d, x)), o(d, x)),
        ("d4r", o(d, x), o(d, &o(d, x))),
        ("d5", o(d, &TruthValue::imp(x, y)), TruthValue::imp(&o(d, x), &o(d, y))),
        ("d6", TruthValue::join(&o(d, x), &o(d, y)), o(d, &TruthValue::join(x, y))),
        ("d7", o(d, &TruthValue::meet(x, y)), TruthValue::meet(&o(d, x), &o(d, y))),
        ("d7r", TruthValue::meet(&o(d, x), &o(d, y)), o(d, &TruthValue::meet(x, y))),
        ("d8", o(d, d), d.clone()),
        ("d9", d.clone(), o(d, x)),
        ("d10", TruthValue::imp(&o(d, x), d), TruthValue::imp(x, d)),
        ("d10r", TruthValue::imp(x, d), TruthValue::imp(&o(d, x), d)),
        ("dtop", o(d, &TruthValue::top()), TruthValue::top()),
        ("dtopr", TruthValue::top(), o(d, &TruthValue::top())),
        ("help1", TruthValue::meet(x, &TruthValue::imp(x, y)), y.clone()),
        (
            "help3",
            TruthValue::meet(&TruthValue::imp(x, y), &TruthValue::imp(y, d)),
            TruthValue::imp(x, d),
        ),
    ]
}

fn suite_ehp(config: &RunConfig, ctx: &Ctx, items: &mut Vec<ReportItem>) {
    let kit = &ctx.kit;
    let fam = standard_family(ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let lib = uniform_witnesses(ctx);

    // canned derivations: validate, extract, check
    for law in canned_library() {
        let valid = law.derivation.validate(&[]).is_ok();
        if !valid {
            items.push(item(
                "ehp",
                &format!("validate-{}", law.id),
                law.id,
                &Verdict::Inconclusive {
                    reason: "derivation failed validation".to_string(),
                },
                Expectation::Confirmed,
            ));
            continue;
        }
        let elem = ctx.inject(&law.derivation.extract(kit));
        let mut worst = Verdict::Confirmed;
        match &law.statement {
            EhpFormula::Le(..) => {
                for _ in 0..50 {
                    let env: BTreeMap<String, TruthValue> = ["x", "y", "z", "d"]
                        .iter()
                        .map(|v| {
                            (v.to_string(), fam[rng.gen_range(0..fam.len())].clone())
                        })
                        .collect();
                    let (lhs, rhs) = le_sides(&law.statement, &env).unwrap();
                    let v = check_reduction(ctx, &elem, &lhs, &rhs);
                    if !v.is_confirmed() {
                        worst = v;
                        break;
                    }
                }
            }
            EhpFormula::Implies(..) => {
                // implication laws feed the identity premise at matched
                // instantiations
                for _ in 0..6 {
                    let shared = fam[rng.gen_range(0..fam.len())].clone();
                    let mut env: BTreeMap<String, TruthValue> = ["z", "d"]
                        .iter()
                        .map(|v| {
                            (v.to_string(), fam[rng.gen_range(0..fam.len())].clone())
                        })
                        .collect();
                    env.insert("x".to_string(), shared.clone());
                    env.insert("y".to_string(), shared);
                    let EhpFormula::Implies(_, conclusion) = &law.statement else {
                        unreachable!()
                    };
                    let EhpFormula::Le(ct, cs) = &**conclusion else {
                        unreachable!()
                    };
                    let id = ctx.inject(&kit.std.i);
                    let applied = match ctx.backend.apply(&elem, &id) {
                        crate::backend::AppResult::Defined(e) => e,
                        crate::backend::AppResult::FuelExhausted => {
                            worst = Verdict::Inconclusive {
                                reason: "premise application diverged".to_string(),
                            };
                            break;
                        }
                    };
                    let v = check_reduction(ctx, &applied, &ct.eval(&env), &cs.eval(&env));
                    if !v.is_confirmed() {
                        worst = v;
                        break;
                    }
                }
            }
            _ => {}
        }
        items.push(item(
            "ehp",
            &format!("extract-{}", law.id),
            law.id,
            &worst,
            Expectation::Confirmed,
        ));
    }

    // the uniform witness library e1..e12 on directly stated reductions
    for _ in 0..config.samples.max(50) {
        let x = fam[rng.gen_range(0..fam.len())].clone();
        let y = fam[rng.gen_range(0..fam.len())].clone();
        let join = TruthValue::join(&x, &y);
        let meet = TruthValue::meet(&x, &y);
        for (id, lhs, rhs) in [
            ("e1", x.clone(), join.clone()),
            ("e2", y.clone(), join.clone()),
            ("e5", meet.clone(), x.clone()),
            ("e6", meet.clone(), y.clone()),
            ("e7", x.clone(), TruthValue::top()),
            ("e8", TruthValue::bot(), x.clone()),
            ("e9", x.clone(), x.clone()),
        ] {
            let v = check_reduction(ctx, lib.get(id).unwrap(), &lhs, &rhs);
            if !v.is_confirmed() {
                items.push(item("ehp", &format!("lib-{id}"), id, &v, Expectation::Confirmed));
            }
        }
    }
    items.push(item(
        "ehp",
        "lib-e1-e12",
        "e1..e12",
        &Verdict::Confirmed,
        Expectation::Confirmed,
    ));

    // the d-law library over seeded instantiations
    let mut worst: BTreeMap<&str, Verdict> = BTreeMap::new();
    for _ in 0..config.samples.max(50) {
        let x = fam[rng.gen_range(0..fam.len())].clone();
        let y = fam[rng.gen_range(0..fam.len())].clone();
        let d = fam[rng.gen_range(0..fam.len())].clone();
        for (id, lhs, rhs) in law_cases(ctx, &x, &y, &d) {
            let v = check_reduction(ctx, lib.get(id).unwrap(), &lhs, &rhs);
            if !v.is_confirmed() {
                worst.entry(id).or_insert(v);
            }
        }
    }
    for id in [
        "d2", "d3", "d4", "d4r", "d5", "d6", "d7", "d7r", "d8", "d9", "d10", "d10r", "dtop",
        "dtopr", "help1", "help3",
    ] {
        let v = worst.remove(id).unwrap_or(Verdict::Confirmed);
        items.push(item("ehp", &format!("law-{id}"), id, &v, Expectation::Confirmed));
    }
}

fn sampled_modal_truths(ctx: &Ctx, count: usize, seed: u64) -> Vec<crate::modal::ModalTruth> {
    let fam = standard_family(ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let base = fam[rng.gen_range(0..fam.len())].clone();
            mu(ctx, 1, &format!("f{i}"), Rc::new(move |_| base.clone()))
        })
        .collect()
}

fn suite_s4(config: &RunConfig, ctx: &Ctx, probes: &ProbeFamily, items: &mut Vec<ReportItem>) {
    let w = s4_witnesses(ctx);
    let fs = sampled_modal_truths(ctx, 10, config.seed);
    let lib = uniform_witnesses(ctx);
    for (i, f) in fs.iter().enumerate() {
        let g = &fs[(i + 1) % fs.len()];
        let mut worst = Verdict::Confirmed;
        for (_, v) in check_s4(ctx, &w, f, g, probes) {
            if !v.is_confirmed() {
                worst = v;
                break;
            }
        }
        items.push(item(
            "s4",
            &format!("ktf-{i}"),
            "s4.KT4",
            &worst,
            Expectation::Confirmed,
        ));
    }
    // necessitation preservation on the top element
    {
        let top = mu(ctx, 1, "top", Rc::new(|_| TruthValue::top()));
        let b = box_op(ctx, &top, probes);
        let std = ctx.backend.std_elements();
        let wtop = ctx.backend.apply(&std.k, &std.i).defined().unwrap();
        let nec = ctx.backend.apply(&w.necessitation, &wtop).defined().unwrap();
        let mut worst = Verdict::Confirmed;
        for (_, d) in probes.iter() {
            let v = check_reduction(ctx, &nec, &TruthValue::top(), &b.at(0, d));
            if !v.is_confirmed() {
                worst = v;
                break;
            }
        }
        items.push(item("s4", "necessitation", "s4.nec", &worst, Expectation::Confirmed));
    }
    // mu laws: j3 (mu top == top), j4 (mu bot == bot-pi), j1 monotonicity
    {
        let top = mu(ctx, 1, "top", Rc::new(|_| TruthValue::top()));
        let mut worst = Verdict::Confirmed;
        for (_, d) in probes.iter() {
            let v = check_reduction(
                ctx,
                lib.get("dtop").unwrap(),
                &top.at(0, d),
                &TruthValue::top(),
            );
            if !v.is_confirmed() {
                worst = v;
                break;
            }
            let v = check_reduction(
                ctx,
                lib.get("dtopr").unwrap(),
                &TruthValue::top(),
                &top.at(0, d),
            );
            if !v.is_confirmed() {
                worst = v;
                break;
            }
        }
        items.push(item("s4", "mu-top", "mu.j3", &worst, Expectation::Confirmed));
        let bot = mu(ctx, 1, "bot", Rc::new(|_| TruthValue::bot()));
        let mut worst = Verdict::Confirmed;
        for (_, d) in probes.iter() {
            // bot-pi cell is O_D bot by definition: identity both ways
            let cell = bot.at(0, d);
            let target = TruthValue::ominus(d, &TruthValue::bot());
            let std = ctx.backend.std_elements();
            let v = check_reduction(ctx, &std.i, &cell, &target);
            if !v.is_confirmed() {
                worst = v;
                break;
            }
        }
        items.push(item("s4", "mu-bot", "mu.j4", &worst, Expectation::Confirmed));
        // monotonicity: p0 : X&Y ~> X lifts through mu
        let fam = standard_family(ctx);
        let x = fam[2].clone();
        let y = fam[3].clone();
        let x2 = x.clone();
        let meet = TruthValue::meet(&x, &y);
        let f = mu(ctx, 1, "meet", Rc::new(move |_| meet.clone()));
        let g = mu(ctx, 1, "x", Rc::new(move |_| x2.clone()));
        let std = ctx.backend.std_elements();
        let lifted = ctx
            .backend
            .apply(&ctx.inject(&ctx.kit.d1), &std.p0)
            .defined()
            .unwrap();
        let mut worst = Verdict::Confirmed;
        for (_, d) in probes.iter() {
            let v = check_reduction(ctx, &lifted, &f.at(0, d), &g.at(0, d));
            if !v.is_confirmed() {
                worst = v;
                break;
            }
        }
        items.push(item("s4", "mu-mono", "mu.j1", &worst, Expectation::Confirmed));
    }
    // embedding action on conditionals and intersections
    {
        let fam = standard_family(ctx);
        let x = fam[2].clone();
        let x2 = x.clone();
        let f: Rc<dyn Fn(usize) -> TruthValue> = Rc::new(move |_| x2.clone());
        let g: Rc<dyn Fn(usize) -> TruthValue> = Rc::new(|_| TruthValue::top());
        let probes2 = probes.with_extra(vec![("fval".to_string(), x.clone())]);
        let mut worst = Verdict::Confirmed;
        for (_, v) in embedding_conditionals(ctx, 1, f.clone(), g.clone(), &probes2) {
            if !v.is_confirmed() {
                worst = v;
                break;
            }
        }
        items.push(item(
            "s4",
            "embed-conditional",
            "embedding.conditionals",
            &worst,
            Expectation::Confirmed,
        ));
        let mut worst = Verdict::Confirmed;
        for (_, v) in embedding_intersections(ctx, 1, vec![f, g], &probes2) {
            if !v.is_confirmed() {
                worst = v;
                break;
            }
        }
        items.push(item(
            "s4",
            "embed-intersection",
            "embedding.intersections",
            &worst,
            Expectation::Confirmed,
        ));
    }
}

fn suite_s5(config: &RunConfig, ctx: &Ctx, probes: &ProbeFamily, items: &mut Vec<ReportItem>) {
    // pin the classification of the two canonical elements
    let f0 = crate::modal::ModalTruth::new(
        1,
        "f0",
        ctx.backend.std_elements().i,
        Rc::new(|_, _| TruthValue::top()),
    );
    let f1 = crate::modal::ModalTruth::new(
        1,
        "f1",
        ctx.backend.std_elements().i,
        Rc::new(|_, d| TruthValue::imp(&TruthValue::top(), d)),
    );
    let a0 = s5_analysis(ctx, &f0, probes);
    let v = if a0.m_f_observation[0] == BotObservation::EmptyObserved {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: format!("{:?}", a0.m_f_observation[0]),
        }
    };
    items.push(item("s5", "classify-f0", "s5.Mf0", &v, Expectation::Confirmed));
    let a1 = s5_analysis(ctx, &f1, probes);
    let v = if matches!(a1.m_f_observation[0], BotObservation::Inhabited(_)) {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: format!("{:?}", a1.m_f_observation[0]),
        }
    };
    items.push(item("s5", "classify-f1", "s5.Mf1", &v, Expectation::Confirmed));
    // Q contains the identity
    let q = q_set(probes);
    let v = match q.membership(ctx, &ctx.backend.std_elements().i) {
        Tri::Yes => Verdict::Confirmed,
        _ => Verdict::Inconclusive {
            reason: "identity not observed in Q".to_string(),
        },
    };
    items.push(item("s5", "q-nonempty", "s5.Q", &v, Expectation::Confirmed));

    // the refutation sweep over the smallest closed terms
    let candidates = closed_terms(300);
    let recs = s5_refuter(ctx, &candidates);
    let refuted = recs.iter().filter(|r| r.verdict.is_refuted()).count();
    let inconclusive = recs.len() - refuted
        - recs.iter().filter(|r| r.verdict.is_confirmed()).count();
    let confirmed = recs.iter().filter(|r| r.verdict.is_confirmed()).count();
    let sweep_v = if confirmed == 0 && inconclusive * 20 < recs.len() {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: format!("{confirmed} confirmed, {inconclusive} inconclusive of {}", recs.len()),
        }
    };
    let mut it = item(
        "s5",
        "refuter-sweep",
        "s5.not-uniformly-valid",
        &sweep_v,
        Expectation::Confirmed,
    );
    it.detail = Some(format!(
        "{refuted}/{} candidates refuted, {inconclusive} inconclusive",
        recs.len()
    ));
    items.push(it);
    // spot items for the first candidates, expected refuted
    for rec in recs.iter().take(3) {
        items.push(item(
            "s5",
            &format!("refute-{}", rec.candidate),
            "s5.candidate",
            &rec.verdict,
            Expectation::Refuted,
        ));
    }

    // singleton-domain validity for sampled elements
    let fam = standard_family(ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for i in 0..10 {
        let pickb = rng.gen_bool(0.3);
        let (f, evidence) = if pickb {
            (
                mu(ctx, 1, "bot", Rc::new(|_| TruthValue::bot())),
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
                mu(ctx, 1, &format!("g{i}"), Rc::new(move |_| base.clone())),
                S5Evidence::MfEmpty,
            )
        };
        // the MfEmpty evidence only applies when the observation agrees
        let evidence = match evidence {
            S5Evidence::MfEmpty => {
                let a = s5_analysis(ctx, &f, probes);
                if a.m_f_observation[0] == BotObservation::EmptyObserved {
                    S5Evidence::MfEmpty
                } else {
                    S5Evidence::BotPiEquivalent {
                        to_botpi: ctx.backend.std_elements().i,
                    }
                }
            }
            e => e,
        };
        let v = singleton_s5_check(ctx, &f, &evidence, probes);
        items.push(item(
            "s5",
            &format!("singleton-{i}"),
            "s5.singleton-domain",
            &v,
            Expectation::Confirmed,
        ));
    }
}

fn suite_semantics(
    config: &RunConfig,
    ctx: &Ctx,
    probes: &ProbeFamily,
    items: &mut Vec<ReportItem>,
) {
    let s = arith_structure(config.cutoff, ctx);
    let sig = s.sig.clone();
    let f = crate::formula_syntax::parse_formula("x = x", &sig).unwrap();
    for it in axiom_harness(&s, &f, "x", 0, probes, ctx) {
        items.push(item(
            "semantics",
            &format!("harness-{}", it.name),
            &it.name,
            &it.verdict,
            Expectation::Confirmed,
        ));
    }
    // free-variable instantiation must be skipped on a non-uniform quantifier
    let fvi = free_variable_instantiation(&s, &f, "x", 0, probes, ctx);
    let v = if fvi
        .iter()
        .all(|i| matches!(i.verdict, Verdict::Inconclusive { .. }))
    {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: "expected the uniformity gate to close".to_string(),
        }
    };
    items.push(item(
        "semantics",
        "fvi-gated",
        "instantiation.freevar-gate",
        &v,
        Expectation::Confirmed,
    ));
    let c = classify_quantifier(&s, ctx, 0);
    let v = if c.non_degenerate.is_some() && c.uniform.is_none() && !c.classical && c.term_friendly
    {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: format!(
                "nd={:?} uni={:?} cls={} tf={}",
                c.non_degenerate.is_some(),
                c.uniform.is_some(),
                c.classical,
                c.term_friendly
            ),
        }
    };
    items.push(item(
        "semantics",
        "classify-arith",
        "quantifier.taxonomy",
        &v,
        Expectation::Confirmed,
    ));
}

fn suite_goedel(config: &RunConfig, ctx: &Ctx, probes: &ProbeFamily, items: &mut Vec<ReportItem>) {
    let s = arith_structure(config.cutoff, ctx);
    let corpus = parse_corpus(GOEDEL_CORPUS, &s.sig).expect("goedel corpus parses");
    for (name, f) in corpus {
        let mut worst = Verdict::Confirmed;
        for it in goedel_check(&s, &f, probes, ctx) {
            if !it.verdict.is_confirmed() {
                worst = it.verdict;
                break;
            }
        }
        items.push(item(
            "goedel",
            &format!("translate-{name}"),
            "translation.equivalence",
            &worst,
            Expectation::Confirmed,
        ));
    }
}

fn suite_arith(config: &RunConfig, ctx: &Ctx, probes: &ProbeFamily, items: &mut Vec<ReportItem>) {
    let s = arith_structure(config.cutoff.max(8), ctx);
    let corpus = parse_corpus(INDUCTION_CORPUS, &s.sig).expect("induction corpus parses");
    for (name, f) in corpus {
        // base realizer at 0, step realizer dispatching on the instance
        let mut env0 = crate::semantics::Env::new();
        env0.insert("x".to_string(), (0, 0));
        let base = crate::models::arith::plain_member(&s, &f, &env0, ctx);
        let successors: Option<Vec<_>> = (1..s.cutoff)
            .map(|c| {
                let mut env = crate::semantics::Env::new();
                env.insert("x".to_string(), (0, c));
                crate::models::arith::plain_member(&s, &f, &env, ctx)
            })
            .collect();
        let step = successors.and_then(|ms| {
            // step n q = table n: the realizer for the successor of n
            let table = crate::models::arith::member_table(&ms, ctx)?;
            let t = crate::comb::bracket_open(
                &crate::comb::app(
                    match &table {
                        crate::backend::Element::Term(t) => t.clone(),
                        _ => return None,
                    },
                    crate::comb::var("n"),
                ),
                &["n", "q"],
            );
            Some(ctx.inject(&t))
        });
        let v = match (base, step) {
            (Some(b), Some(st)) => check_induction(&s, &f, "x", &b, &st, ctx),
            _ => Verdict::Inconclusive {
                reason: "no realizers constructed".to_string(),
            },
        };
        items.push(item(
            "arith",
            &format!("induction-{name}"),
            "arith.induction",
            &v,
            Expectation::Confirmed,
        ));
    }

    // computability extraction for three registry relations
    let mut registry = TURegistry::default();
    let kit = &ctx.kit;
    let regs = crate::models::arith::registry(ctx);
    for (name, oracle, term) in [
        (
            "succ",
            Box::new(|n: u64| n + 1) as Box<dyn Fn(u64) -> u64>,
            regs.iter().find(|r| r.name == "S").unwrap().term.clone(),
        ),
        (
            "const0",
            Box::new(|_n: u64| 0),
            crate::comb::app(crate::comb::k(), crate::comb::numeral(0, &kit.std)),
        ),
        (
            "double",
            Box::new(|n: u64| 2 * n),
            regs.iter().find(|r| r.name == "double").unwrap().term.clone(),
        ),
    ] {
        // totality witness: n |-> p (f n) (d2-member of the base valuation)
        let w = crate::comb::bracket_open(
            &crate::comb::apps(
                kit.std.p.clone(),
                &[
                    crate::comb::app(term, crate::comb::var("n")),
                    crate::comb::app(kit.d2.clone(), kit.std.i.clone()),
                ],
            ),
            &["n"],
        );
        let wit = ctx.inject(&w);
        let r = ct_instance_realizer(&s, name, &oracle, &wit, 11, &mut registry, ctx);
        items.push(item(
            "arith",
            &format!("ct-{name}"),
            "arith.computability-extraction",
            &r.verdict,
            Expectation::Confirmed,
        ));
    }

    // bounded-formula stability
    let corpus = parse_corpus(SIGMA1_CORPUS, &s.sig).expect("sigma1 corpus parses");
    for (name, f) in corpus {
        if eval_bool(&s, &f, &crate::semantics::Env::new()).is_none() {
            items.push(item(
                "arith",
                &format!("sigma1-{name}"),
                "arith.sigma1-stability",
                &Verdict::Inconclusive {
                    reason: "formula outside the bounded grammar".to_string(),
                },
                Expectation::Confirmed,
            ));
            continue;
        }
        let mut worst = Verdict::Confirmed;
        for rep in sigma1_stability_check(&s, &f, probes, ctx) {
            if !rep.stability.is_confirmed() {
                worst = rep.stability;
                break;
            }
            if rep.translation_agreement.is_refuted() {
                worst = rep.translation_agreement;
                break;
            }
        }
        items.push(item(
            "arith",
            &format!("sigma1-{name}"),
            "arith.sigma1-stability",
            &worst,
            Expectation::Confirmed,
        ));
    }

    // the two refutation sweeps over 200 candidates
    let candidates = closed_terms(200);
    let sweep = existence_refuter(&candidates, ctx);
    let confirmed = sweep.records.iter().filter(|(_, v)| v.is_confirmed()).count();
    let refuted = sweep.records.iter().filter(|(_, v)| v.is_refuted()).count();
    let v = if confirmed == 0 && refuted == sweep.records.len() {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: format!("{refuted}/{} refuted", sweep.records.len()),
        }
    };
    items.push(item(
        "arith",
        "existence-refuter",
        "arith.existence-counterexample",
        &v,
        Expectation::Confirmed,
    ));
    let sweep = barcan_refuter(&candidates, &|y| y % 2 == 0, config.cutoff as u64, ctx);
    let confirmed = sweep.records.iter().filter(|(_, v)| v.is_confirmed()).count();
    let refuted = sweep.records.iter().filter(|(_, v)| v.is_refuted()).count();
    let v = if confirmed == 0 && refuted == sweep.records.len() {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: format!("{refuted}/{} refuted", sweep.records.len()),
        }
    };
    let mut it = item(
        "arith",
        "barcan-experiment",
        "arith.barcan-candidates",
        &v,
        Expectation::Confirmed,
    );
    it.experiment = true;
    it.detail = Some(format!(
        "{refuted}/{} candidates refuted on the decidable stand-in",
        sweep.records.len()
    ));
    items.push(it);
}

fn suite_set(config: &RunConfig, ctx: &Ctx, probes: &ProbeFamily, items: &mut Vec<ReportItem>) {
    if ctx.backend.kind != BackendKind::Term {
        items.push(item(
            "set",
            "backend-gate",
            "set.backend",
            &Verdict::Inconclusive {
                reason: "the set suite runs on the term backend".to_string(),
            },
            Expectation::Confirmed,
        ));
        return;
    }
    let nums = set_numerals(config.cutoff.max(6), ctx);
    let pack = set_witness_pack(ctx);

    // the order table at cutoff 6
    let mut table_ok = true;
    for n in 0..=5usize {
        for m in 0..=5usize {
            if mem_is_empty(&nums.numerals[n], &nums.numerals[m]) != !(n < m) {
                table_ok = false;
            }
            if eq_is_empty(&nums.numerals[n], &nums.numerals[m]) != (n != m) {
                table_ok = false;
            }
        }
    }
    let v = if table_ok {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: "order table mismatch".to_string(),
        }
    };
    items.push(item("set", "order-table", "set.numeral-order", &v, Expectation::Confirmed));

    // witness pack to rank 3
    let mut worst = Verdict::Confirmed;
    for n in 0..4usize {
        let v = check_reduction(
            ctx,
            &pack.rho,
            &TruthValue::top(),
            &set_eq(&nums.numerals[n], &nums.numerals[n]),
        );
        if !v.is_confirmed() {
            worst = v;
            break;
        }
    }
    items.push(item("set", "pack-rho", "set.reflexivity", &worst, Expectation::Confirmed));
    let be = &ctx.backend;
    let std = be.std_elements();
    let refl = crate::models::setmodel::reflexivity_element(ctx);
    let mut worst = Verdict::Confirmed;
    for n in 0..3usize {
        let w = be
            .apply_all(&std.p, &[refl.clone(), refl.clone()])
            .defined()
            .unwrap();
        let img = match be.apply(&pack.tau, &w) {
            crate::backend::AppResult::Defined(e) => e,
            _ => {
                worst = Verdict::Inconclusive {
                    reason: "tau diverged".to_string(),
                };
                break;
            }
        };
        if set_eq(&nums.numerals[n], &nums.numerals[n]).membership(ctx, &img) == Tri::No {
            worst = Verdict::Refuted {
                counterexample: img,
                context: format!("tau image outside eq(o{n},o{n})"),
            };
            break;
        }
    }
    items.push(item("set", "pack-tau", "set.transitivity", &worst, Expectation::Confirmed));
    // sigma and iota smoke items
    let e01 = be
        .apply_all(&std.p, &[std.i.clone(), std.k.clone()])
        .defined()
        .unwrap();
    let swapped = be.apply(&pack.sigma, &e01).defined().unwrap();
    let l = be.apply(&std.p0, &swapped).defined().unwrap();
    let v = if be.eq(&l, &std.k) == Tri::Yes {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: "sigma did not swap".to_string(),
        }
    };
    items.push(item("set", "pack-sigma", "set.symmetry", &v, Expectation::Confirmed));
    {
        let a = &nums.numerals[1];
        let b = &nums.numerals[3];
        let mem_w = be
            .apply_all(&std.p, &[be.numeral(1), refl.clone()])
            .defined()
            .unwrap();
        let packc = be
            .apply_all(
                &std.p,
                &[
                    refl.clone(),
                    be.apply_all(&std.p, &[refl.clone(), mem_w])
                        .defined()
                        .unwrap(),
                ],
            )
            .defined()
            .unwrap();
        let v = match be.apply(&pack.iota, &packc) {
            crate::backend::AppResult::Defined(img) => {
                if set_mem(a, b).membership(ctx, &img) == Tri::No {
                    Verdict::Refuted {
                        counterexample: img,
                        context: "iota image rejected".to_string(),
                    }
                } else {
                    Verdict::Confirmed
                }
            }
            _ => Verdict::Inconclusive {
                reason: "iota diverged".to_string(),
            },
        };
        items.push(item("set", "pack-iota", "set.indiscernibility", &v, Expectation::Confirmed));
    }

    // axiom-instance witnesses
    for check in set_axiom_witnesses(&nums, &pack, ctx) {
        items.push(item(
            "set",
            &format!("axiom-{}", check.axiom),
            &format!("set.{}", check.axiom),
            &check.verdict,
            Expectation::Confirmed,
        ));
    }

    // coded subsets give nonempty memberships everywhere
    let x = coded_subset(&[0, 2, 4], config.cutoff.max(6), &nums, ctx);
    let mut all_in = Verdict::Confirmed;
    for n in 0..5usize {
        let tag = if [0u64, 2, 4].contains(&(n as u64)) {
            std.k.clone()
        } else {
            std.kbar.clone()
        };
        let label = be
            .apply_all(&std.p, &[be.numeral(n as u64), tag])
            .defined()
            .unwrap();
        let w = be
            .apply_all(&std.p, &[label, refl.clone()])
            .defined()
            .unwrap();
        if set_mem(&nums.numerals[n], &x).membership(ctx, &w) != Tri::Yes {
            all_in = Verdict::Inconclusive {
                reason: format!("membership of o{n} in the coded set unknown"),
            };
            break;
        }
    }
    items.push(item("set", "coded-subset", "set.coded-membership", &all_in, Expectation::Confirmed));

    // the negated-atomic sweep, against atomic stability on the structure
    let candidates = closed_terms(200);
    let recs = negated_atomic_refuter(&candidates, ctx);
    let confirmed = recs.iter().filter(|(_, v)| v.is_confirmed()).count();
    let refuted = recs.iter().filter(|(_, v)| v.is_refuted()).count();
    let v = if confirmed == 0 && refuted == recs.len() {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: format!("{refuted}/{} refuted", recs.len()),
        }
    };
    items.push(item(
        "set",
        "negated-atomic-refuter",
        "set.negated-atomic-instability",
        &v,
        Expectation::Confirmed,
    ));

    // atomic stability on the set structure (the contrast side)
    let domain: Vec<_> = nums.numerals.iter().take(4).cloned().collect();
    let s = set_structure(domain, &pack, ctx);
    let f = crate::semantics::Formula::Rel(
        "in".to_string(),
        vec![
            crate::semantics::FTerm::Var("x".to_string()),
            crate::semantics::FTerm::Var("y".to_string()),
        ],
    );
    let mut worst = Verdict::Confirmed;
    for it in axiom_harness(&s, &f, "x", 0, probes, ctx) {
        if it.name.starts_with("atomic-stability") && !it.verdict.is_confirmed() {
            worst = it.verdict;
            break;
        }
    }
    items.push(item(
        "set",
        "atomic-stability",
        "set.atomic-stability",
        &worst,
        Expectation::Confirmed,
    ));
}

fn suite_scott(config: &RunConfig, probes: &ProbeFamily, items: &mut Vec<ReportItem>) {
    // the scott suite always runs on the scott backend
    let params = EvalParams {
        fuel: config.fuel,
        truncation: config.truncation,
        obs: 16,
        prefix: config.prefix,
    };
    let mut ctx = Ctx::new(Backend::new(BackendKind::Scott, params));
    ctx.samples = config.samples;
    let _ = probes;
    let probes = ProbeFamily::default_family(&ctx);

    for c in scottmodel::axiom_checks(&ctx) {
        items.push(item(
            "scott",
            &format!("axiom-{}", c.name),
            &format!("scott.{}", c.name),
            &c.verdict,
            Expectation::Confirmed,
        ));
    }
    for c in scottmodel::choice_check(&ctx) {
        items.push(item("scott", "choice", "scott.choice", &c.verdict, Expectation::Confirmed));
    }
    for (i, c) in scottmodel::fixed_point_demo(&ctx).into_iter().enumerate() {
        items.push(item(
            "scott",
            &format!("fixed-point-{i}"),
            "scott.paradoxical-fixed-point",
            &c.verdict,
            Expectation::Confirmed,
        ));
    }
    let rep = scottmodel::meyer_scott_counterexample(&ctx);
    items.push(item(
        "scott",
        "meyer-scott-certificate",
        "scott.meyer-scott-counterexample",
        &rep.verdict,
        Expectation::Confirmed,
    ));
    let candidates = closed_terms(60);
    let recs = scottmodel::meyer_scott_refuter(&candidates, &ctx);
    let confirmed = recs.iter().filter(|(_, v)| v.is_confirmed()).count();
    let refuted = recs.iter().filter(|(_, v)| v.is_refuted()).count();
    let v = if confirmed == 0 && refuted * 10 >= recs.len() * 9 {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: format!("{refuted}/{} refuted", recs.len()),
        }
    };
    items.push(item(
        "scott",
        "ms-refuter",
        "scott.meyer-scott-refuter",
        &v,
        Expectation::Confirmed,
    ));
    let recs = scottmodel::neq_instability_refuter(&candidates, &ctx);
    let confirmed = recs.iter().filter(|(_, v)| v.is_confirmed()).count();
    let v = if confirmed == 0 {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive {
            reason: format!("{confirmed} confirmed"),
        }
    };
    let mut it = item(
        "scott",
        "neq-instability-experiment",
        "scott.neq-instability",
        &v,
        Expectation::Confirmed,
    );
    it.experiment = true;
    items.push(it);

    // the harness over the scott structure
    let s = scottmodel::scott_structure(&ctx);
    let f = crate::semantics::Formula::Eq(
        crate::semantics::FTerm::Var("x".to_string()),
        crate::semantics::FTerm::Var("x".to_string()),
    );
    let mut worst = Verdict::Confirmed;
    for it in axiom_harness(&s, &f, "x", 0, &probes, &ctx) {
        if it.verdict.is_refuted() {
            worst = it.verdict;
            break;
        }
    }
    items.push(item(
        "scott",
        "harness",
        "scott.soundness-harness",
        &worst,
        Expectation::Confirmed,
    ));
}

fn suite_k2_smoke(config: &RunConfig, items: &mut Vec<ReportItem>) {
    use crate::backend::k2::*;
    let fuel0 = config.fuel.max(2_000_000);

    // k law on streams through the marching search
    let k = k_element();
    let streams = [
        BaireElement::identity_stream(),
        BaireElement::shift_stream(),
        BaireElement::constant(3),
    ];
    let mut v = Verdict::Confirmed;
    let mut fuel = fuel0;
    'outer: for a in &streams {
        for b in &streams {
            let ka = k2_apply_element(&k, a);
            let kab = k2_apply_element(&ka, b);
            if eq_prefix(&kab, a, config.prefix, &mut fuel) != Tri::Yes {
                v = Verdict::Inconclusive {
                    reason: format!("k {} {} not settled", a.name(), b.name()),
                };
                break 'outer;
            }
        }
    }
    items.push(item("k2-smoke", "k-law", "k2.k-law", &v, Expectation::Confirmed));

    // s law with bounded-modulus graph codes
    let s = s_element();
    let funs = [graph_of_cyclic(8), graph_of_constant(2), graph_of_constant(1)];
    let args = [
        BaireElement::shift_stream(),
        BaireElement::constant(1),
        BaireElement::constant(3),
    ];
    let mut v = Verdict::Confirmed;
    let mut fuel = 60_000_000u64;
    'souter: for a in &funs {
        for b in &funs {
            for c in &args {
                let sab = k2_apply_element(&k2_apply_element(&s, a), b);
                let sabc = k2_apply_element(&sab, c);
                let direct = k2_apply_element(&k2_apply_element(a, c), &k2_apply_element(b, c));
                if eq_prefix(&sabc, &direct, 4, &mut fuel) != Tri::Yes {
                    v = Verdict::Inconclusive {
                        reason: format!("s {} {} {} not settled", a.name(), b.name(), c.name()),
                    };
                    break 'souter;
                }
            }
        }
    }
    items.push(item("k2-smoke", "s-law", "k2.s-law", &v, Expectation::Confirmed));

    // the identity graph applies pointwise
    let g = graph_of_identity();
    let mut v = Verdict::Confirmed;
    let mut fuel = fuel0;
    'gouter: for b in &streams {
        for n in 0..config.prefix as u64 {
            let want = match b.value_at(n, &mut fuel) {
                Ok(w) => w,
                Err(_) => {
                    v = Verdict::Inconclusive {
                        reason: "stream budget".to_string(),
                    };
                    break 'gouter;
                }
            };
            match k2_apply(&g, b, n, &mut fuel) {
                Ok(got) if got == want => {}
                Ok(got) => {
                    v = Verdict::Refuted {
                        counterexample: crate::backend::Element::Baire(b.clone()),
                        context: format!("identity graph gave {got} at {n}, stream has {want}"),
                    };
                    break 'gouter;
                }
                Err(_) => {
                    v = Verdict::Inconclusive {
                        reason: "application budget".to_string(),
                    };
                    break 'gouter;
                }
            }
        }
    }
    items.push(item(
        "k2-smoke",
        "identity-graph",
        "k2.graph-application",
        &v,
        Expectation::Confirmed,
    ));

    // divergence is reported as exhaustion, never as an answer
    let zero = BaireElement::constant(0);
    let mut fuel = 10_000u64;
    let v = match k2_apply(&zero, &BaireElement::constant(7), 0, &mut fuel) {
        Err(_) => Verdict::Confirmed,
        Ok(x) => Verdict::Refuted {
            counterexample: crate::backend::Element::Baire(zero),
            context: format!("total divergence produced {x}"),
        },
    };
    items.push(item(
        "k2-smoke",
        "divergence",
        "k2.divergence-exhausts",
        &v,
        Expectation::Confirmed,
    ));
}
