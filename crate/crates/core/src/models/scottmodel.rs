//! The graph-model structure: pca-axiom checks at the valuation level, the
//! certified Meyer-Scott counterexample, the choice witness, the
//! paradoxical-combinator fixed point, and the per-candidate refutation
//! sweeps for the non-modal Meyer-Scott axiom and the stability of
//! non-identity.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::backend::scott::{
    eq_at, pair, scott_apply, GraphElement, ScottCtx,
};
use crate::backend::{Backend, BackendKind, Element};
use crate::comb::{app, apps, bracket_open, var, Term, Tri};
use crate::heyting::{Ctx, TruthValue, Verdict};
use crate::semantics::{Signature, Structure, WitnessPack};

fn as_graph(e: &Element) -> &GraphElement {
    match e {
        Element::Scott(g) => g,
        _ => panic!("scott model element expected"),
    }
}

/// The curated domain for the harness structure: small definite elements.
pub fn sample_domain(ctx: &Ctx) -> Vec<Element> {
    let mut out = vec![
        Element::Scott(GraphElement::empty()),
        Element::Scott(GraphElement::finite([0])),
        Element::Scott(GraphElement::finite([1, 4])),
        Element::Scott(GraphElement::all_nats()),
    ];
    out.push(ctx.backend.std_elements().k);
    out
}

/// The graph-model structure for the harness: disjunctive equality by
/// truncation-bounded observation, singleton quantifier.
pub fn scott_structure(ctx: &Ctx) -> Structure {
    assert_eq!(ctx.backend.kind, BackendKind::Scott);
    let domain = sample_domain(ctx);
    let names: Vec<String> = domain.iter().map(|e| format!("{e}")).collect();
    let sig = Signature {
        sorts: vec!["S".to_string()],
        consts: names.iter().map(|n| (n.clone(), 0)).collect(),
        funcs: Vec::new(),
        rels: Vec::new(),
    };
    let consts: BTreeMap<String, (usize, usize)> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), (0usize, i)))
        .collect();
    let be = ctx.backend.clone();
    let dom = domain.clone();
    let eq_val: Rc<dyn Fn(usize, usize, usize) -> TruthValue> =
        Rc::new(move |_s, a, b| match be.eq(&dom[a], &dom[b]) {
            Tri::Yes => TruthValue::top(),
            _ => TruthValue::bot(),
        });
    let dom2 = domain.clone();
    let quantifier: Rc<dyn Fn(usize, usize) -> TruthValue> =
        Rc::new(move |_s, c| TruthValue::singleton(dom2[c].clone()));
    let i = ctx.kit.std.i.clone();
    let pack = WitnessPack {
        e_ref1: i.clone(),
        e_ref2: app(crate::comb::k(), i.clone()),
        e_sym: i.clone(),
        e_tran: i,
        e_rel: BTreeMap::new(),
        e_fun: BTreeMap::new(),
        e_term_friendly: BTreeMap::new(),
    };
    let cutoff = domain.len();
    Structure {
        name: "scott".to_string(),
        sig,
        domains: vec![names],
        consts,
        funcs: BTreeMap::new(),
        eq_val,
        rel_val: BTreeMap::new(),
        quantifier,
        pack,
        cutoff,
    }
}

pub struct ScottCheck {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

fn scott_ctx(ctx: &Ctx) -> ScottCtx {
    ctx.backend.scott_ctx()
}

/// The valuation of a closed identity `t = s` over given elements:
/// top when observed equal at the truncation, bottom when observed apart.
fn obs_eq_value(ctx: &Ctx, a: &GraphElement, b: &GraphElement) -> TruthValue {
    match eq_at(a, b, ctx.backend.params.obs, &scott_ctx(ctx)) {
        Tri::Yes => TruthValue::top(),
        _ => TruthValue::bot(),
    }
}

/// (i) the pca axioms and the modal Meyer-Scott axiom via constant
/// witnesses over sampled instances.
pub fn axiom_checks(ctx: &Ctx) -> Vec<ScottCheck> {
    let be = &ctx.backend;
    let std = be.std_elements();
    let samples = sample_domain(ctx);
    let mut out = Vec::new();

    // k x y = x and s x y z = (xz)(yz), as quantified values realized by a
    // constant witness (any total element); truth decided by observation
    let mut k_cells = Vec::new();
    let mut s_cells = Vec::new();
    for x in &samples {
        for y in &samples {
            let kxy = be
                .apply_all(&std.k, &[x.clone(), y.clone()])
                .defined()
                .unwrap();
            k_cells.push(TruthValue::imp(
                &TruthValue::singleton(x.clone()),
                &TruthValue::imp(
                    &TruthValue::singleton(y.clone()),
                    &obs_eq_value(ctx, as_graph(&kxy), as_graph(x)),
                ),
            ));
            for z in samples.iter().take(3) {
                let sxyz = be
                    .apply_all(&std.s, &[x.clone(), y.clone(), z.clone()])
                    .defined()
                    .unwrap();
                let direct = be
                    .apply_all(
                        &be.apply(x, z).defined().unwrap(),
                        &[be.apply(y, z).defined().unwrap()],
                    )
                    .defined()
                    .unwrap();
                s_cells.push(obs_eq_value(ctx, as_graph(&sxyz), as_graph(&direct)));
            }
        }
    }
    let witness = be.apply(&std.k, &std.k).defined().unwrap();
    let v = crate::heyting::check_reduction(
        ctx,
        &witness,
        &TruthValue::top(),
        &TruthValue::big_meet(k_cells),
    );
    out.push(ScottCheck {
        name: "k-axiom".to_string(),
        verdict: v,
        detail: "forall x y, k x y = x via a constant witness".to_string(),
    });
    let v = crate::heyting::check_reduction(
        ctx,
        &witness,
        &TruthValue::top(),
        &TruthValue::big_meet(s_cells),
    );
    out.push(ScottCheck {
        name: "s-axiom".to_string(),
        verdict: v,
        detail: "forall x y z, s x y z = (xz)(yz)".to_string(),
    });

    // 1_2 k = k and 1_3 s = s
    let one = apps(crate::comb::s(), &[app(crate::comb::k(), ctx.kit.std.i.clone())]);
    let one2 = apps(
        crate::comb::s(),
        &[app(crate::comb::k(), one.clone()), app(crate::comb::s(), app(crate::comb::k(), one.clone()))],
    );
    let one3 = apps(
        crate::comb::s(),
        &[app(crate::comb::k(), one.clone()), app(crate::comb::s(), app(crate::comb::k(), one2.clone()))],
    );
    let o2k = be.apply(&be.inject(&one2), &std.k).defined().unwrap();
    let o3s = be.apply(&be.inject(&one3), &std.s).defined().unwrap();
    let v2 = eq_at(as_graph(&o2k), as_graph(&std.k), 12, &scott_ctx(ctx));
    let v3 = eq_at(as_graph(&o3s), as_graph(&std.s), 12, &scott_ctx(ctx));
    out.push(ScottCheck {
        name: "eta-expanders".to_string(),
        verdict: if v2 != Tri::No && v3 != Tri::No {
            Verdict::Confirmed
        } else {
            Verdict::Refuted {
                counterexample: o2k,
                context: format!("1_2 k: {v2:?}, 1_3 s: {v3:?}"),
            }
        },
        detail: "1_2 k = k and 1_3 s = s at the observation bound".to_string(),
    });

    // modal Meyer-Scott: box(forall x ax=bx) => 1a=1b with a constant
    // witness; instances where the antecedent is inhabited have a = b
    // observationally, hence a true consequent
    let a = GraphElement::finite([pair(0, 2)]);
    let b = GraphElement::finite([pair(0, 2)]);
    let one_inj = be.inject(&one);
    let (oa, ob) = (
        be.apply(&one_inj, &Element::Scott(a.clone())).defined().unwrap(),
        be.apply(&one_inj, &Element::Scott(b.clone())).defined().unwrap(),
    );
    let consequent = obs_eq_value(ctx, as_graph(&oa), as_graph(&ob));
    let mut antecedent_cells = Vec::new();
    for x in &samples {
        let ax = scott_apply(&a, as_graph(x));
        let bx = scott_apply(&b, as_graph(x));
        antecedent_cells.push(TruthValue::imp(
            &TruthValue::singleton(x.clone()),
            &obs_eq_value(ctx, &ax, &bx),
        ));
    }
    let antecedent = TruthValue::ominus(
        &TruthValue::top(),
        &TruthValue::big_meet(antecedent_cells),
    );
    let v = crate::heyting::check_reduction(
        ctx,
        &witness,
        &TruthValue::top(),
        &TruthValue::imp(&antecedent, &consequent),
    );
    out.push(ScottCheck {
        name: "modal-meyer-scott".to_string(),
        verdict: v,
        detail: "box-guarded extensionality holds via any element".to_string(),
    });

    out
}

/// (ii) the choice witness: b0 a x = p0 (a x), b1 a x pairs the value with
/// the tagged proof part, b2 a = p (b0 a) (b1 a).
pub fn choice_check(ctx: &Ctx) -> Vec<ScottCheck> {
    let be = &ctx.backend;
    let std = be.std_elements();
    let kit = &ctx.kit;
    let b0 = bracket_open(
        &app(kit.std.p0.clone(), app(var("a"), var("x"))),
        &["a", "x"],
    );
    let b1 = bracket_open(
        &apps(
            kit.std.p.clone(),
            &[
                app(kit.std.p0.clone(), app(var("a"), var("x"))),
                apps(
                    kit.std.p.clone(),
                    &[
                        kit.std.k.clone(),
                        app(kit.std.p1.clone(), app(var("a"), var("x"))),
                    ],
                ),
            ],
        ),
        &["a", "x"],
    );
    let b2 = bracket_open(
        &apps(
            kit.std.p.clone(),
            &[
                app(b0.clone(), var("a")),
                app(b1.clone(), var("a")),
            ],
        ),
        &["a"],
    );
    // instance: a x = p x k (the witness pairs each x with a trivial proof)
    let a = be.inject(&bracket_open(
        &apps(kit.std.p.clone(), &[var("x"), kit.std.k.clone()]),
        &["x"],
    ));
    let b0e = ctx.inject(&b0);
    let b2e = ctx.inject(&b2);
    let mut out = Vec::new();
    let samples = sample_domain(ctx);
    let mut ok = true;
    let mut detail = String::new();
    for x in samples.iter().take(5) {
        let c = be
            .apply_all(&b0e, &[a.clone(), x.clone()])
            .defined()
            .unwrap();
        if be.eq(&c, x) == Tri::No {
            ok = false;
            detail = format!("b0 a {x} is not {x}");
            break;
        }
    }
    let packed = be.apply(&b2e, &a).defined().unwrap();
    let c_fun = be.apply(&std.p0, &packed).defined().unwrap();
    for x in samples.iter().take(3) {
        let cx = be.apply(&c_fun, x).defined().unwrap();
        if be.eq(&cx, x) == Tri::No {
            ok = false;
            detail = format!("(p0 (b2 a)) {x} differs from {x}");
            break;
        }
    }
    out.push(ScottCheck {
        name: "choice-witness".to_string(),
        verdict: if ok {
            Verdict::Confirmed
        } else {
            Verdict::Inconclusive { reason: detail.clone() }
        },
        detail: if detail.is_empty() {
            "b2 extracts the chosen function and pairs proofs".to_string()
        } else {
            detail
        },
    });
    out
}

/// (iii) the paradoxical-combinator fixed point, with stability across two
/// truncations.
pub fn fixed_point_demo(_ctx: &Ctx) -> Vec<ScottCheck> {
    let y = GraphElement::fix();
    let g = GraphElement::graph_op();
    let samples = [
        GraphElement::finite([pair(0, 1), pair(2, 3)]),
        GraphElement::k(),
        GraphElement::finite([pair(1, 0)]),
    ];
    let mut out = Vec::new();
    for c in &samples {
        let gc = scott_apply(&g, c);
        let ygc = scott_apply(&y, &gc);
        let c_ygc = scott_apply(c, &ygc);
        let lo = ScottCtx {
            truncation: 1 << 8,
            steps: 2_000_000,
        };
        let hi = ScottCtx {
            truncation: 1 << 10,
            steps: 2_000_000,
        };
        let fixed_lo = eq_at(&c_ygc, &ygc, 8, &lo);
        let fixed_hi = eq_at(&c_ygc, &ygc, 8, &hi);
        let mut stable = true;
        for m in 0..8u64 {
            let a = ygc.membership(m, &lo);
            let b = ygc.membership(m, &hi);
            if (a == Tri::Yes && b == Tri::No) || (a == Tri::No && b == Tri::Yes) {
                stable = false;
            }
        }
        let verdict = if fixed_lo != Tri::No && fixed_hi != Tri::No && stable {
            Verdict::Confirmed
        } else {
            Verdict::Inconclusive {
                reason: format!("fixed point {fixed_lo:?}/{fixed_hi:?}, stable {stable}"),
            }
        };
        out.push(ScottCheck {
            name: "fixed-point".to_string(),
            verdict,
            detail: format!("c (y (g c)) = y (g c) for c = {c}"),
        });
    }
    out
}

/// The certified Meyer-Scott counterexample (a = empty, b = omega).
pub struct MeyerScottReport {
    pub a: GraphElement,
    pub b: GraphElement,
    pub ax_empty: Vec<(String, bool)>,
    pub bx_all: Vec<(String, bool)>,
    pub one_a_empty: bool,
    pub pair00_in_one_b: bool,
    pub verdict: Verdict,
}

pub fn meyer_scott_counterexample(_ctx: &Ctx) -> MeyerScottReport {
    let be = Backend::scott_model();
    let a = GraphElement::empty();
    let b = GraphElement::all_nats();
    let sctx = ScottCtx {
        truncation: 1 << 10,
        steps: 4_000_000,
    };
    let mut samples: Vec<GraphElement> = vec![
        GraphElement::empty(),
        GraphElement::finite([0]),
        GraphElement::finite([1, 4]),
        GraphElement::finite([2, 3, 5]),
        GraphElement::cofinite([2]),
        GraphElement::all_nats(),
        GraphElement::k(),
        GraphElement::s(),
        GraphElement::finite([pair(0, 5)]),
        GraphElement::finite([pair(1, 1)]),
    ];
    let mut ax_empty = Vec::new();
    let mut bx_all = Vec::new();
    let mut ok = true;
    for x in samples.drain(..) {
        let ax = scott_apply(&a, &x);
        let empty = (0..16).all(|m| ax.membership(m, &sctx) == Tri::No);
        ok &= empty;
        ax_empty.push((format!("{x}"), empty));
        let bx = scott_apply(&b, &x);
        let all = (0..16).all(|m| bx.membership(m, &sctx) == Tri::Yes);
        ok &= all;
        bx_all.push((format!("{x}"), all));
    }
    // 1 = s(k(skk))
    let one = be.inject(&apps(
        crate::comb::s(),
        &[app(crate::comb::k(), crate::comb::ski_i())],
    ));
    let one_a = scott_apply(as_graph(&one), &a);
    let one_b = scott_apply(as_graph(&one), &b);
    let one_a_empty = (0..32).all(|m| one_a.membership(m, &sctx) == Tri::No);
    let pair00_in_one_b = one_b.membership(pair(0, 0), &sctx) == Tri::Yes;
    ok &= one_a_empty && pair00_in_one_b;
    MeyerScottReport {
        a,
        b,
        ax_empty,
        bx_all,
        one_a_empty,
        pair00_in_one_b,
        verdict: if ok {
            Verdict::Confirmed
        } else {
            Verdict::Inconclusive {
                reason: "truncation too small".to_string(),
            }
        },
    }
}

/// (iv) the non-modal Meyer-Scott refuter: a witness would send the
/// identity to every element at once.
pub fn meyer_scott_refuter(candidates: &[Term], ctx: &Ctx) -> Vec<(Term, Verdict)> {
    let be = &ctx.backend;
    let std = be.std_elements();
    let x1 = Element::Scott(GraphElement::finite([0]));
    let x2 = Element::Scott(GraphElement::finite([1]));
    let mut out = Vec::new();
    for cand in candidates {
        let c = be.inject(cand);
        let v = match be.apply(&c, &std.i) {
            crate::backend::AppResult::Defined(v) => v,
            crate::backend::AppResult::FuelExhausted => {
                out.push((
                    cand.clone(),
                    Verdict::Inconclusive {
                        reason: "application budget".to_string(),
                    },
                ));
                continue;
            }
        };
        let e1 = be.eq(&v, &x1);
        let e2 = be.eq(&v, &x2);
        let verdict = match (e1, e2) {
            (Tri::Yes, Tri::Yes) => Verdict::Inconclusive {
                reason: "observation bound too coarse".to_string(),
            },
            (Tri::No, _) => Verdict::Refuted {
                counterexample: v,
                context: "c (skk) misses {0}".to_string(),
            },
            (_, Tri::No) => Verdict::Refuted {
                counterexample: v,
                context: "c (skk) misses {1}".to_string(),
            },
            _ => Verdict::Inconclusive {
                reason: "equality undecided at truncation".to_string(),
            },
        };
        out.push((cand.clone(), verdict));
    }
    out
}

/// (v) the non-identity instability sweep. Each candidate is tested against
/// the finite slice of the chained argument: over the observably distinct
/// pair (empty, omega), the image of the per-probe diamond inhabitant must
/// land in the pinned double negation of the empty equality, at two
/// disjoint probes. This is an experiment (the full argument runs through
/// the choice principle); candidates are never confirmed.
pub fn neq_instability_refuter(candidates: &[Term], ctx: &Ctx) -> Vec<(Term, Verdict)> {
    let be = &ctx.backend;
    let x = Element::Scott(GraphElement::empty());
    let y = Element::Scott(GraphElement::all_nats());
    let probes = [
        Element::Scott(GraphElement::finite([0])),
        Element::Scott(GraphElement::finite([1])),
    ];
    let mut out = Vec::new();
    for cand in candidates {
        let e = be.inject(cand);
        let mut verdict: Option<Verdict> = None;
        for d in &probes {
            let dtv = TruthValue::singleton(d.clone());
            // the per-probe diamond inhabitant k (k d)
            let kd = be.apply(&be.std_elements().k, d).defined().unwrap();
            let q = be.apply(&be.std_elements().k, &kd).defined().unwrap();
            let r = (|| {
                let a = be.apply(&e, &x).defined()?;
                let b = be.apply(&a, &y).defined()?;
                be.apply(&b, &q).defined()
            })();
            let Some(r) = r else {
                verdict = Some(Verdict::Refuted {
                    counterexample: q,
                    context: "candidate diverged on the diamond inhabitant".to_string(),
                });
                break;
            };
            // r must land in the pinned cell O_D(empty): its action on the
            // vacuous antecedent must produce members of D
            let target = TruthValue::ominus(&dtv, &TruthValue::bot());
            if target.membership(ctx, &r) == Tri::No {
                verdict = Some(Verdict::Refuted {
                    counterexample: r,
                    context: format!("image misses the pinned cell at probe {d}"),
                });
                break;
            }
        }
        out.push((
            cand.clone(),
            verdict.unwrap_or(Verdict::Inconclusive {
                reason: "survived the finite slice; the full chain is not run".to_string(),
            }),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::closed_terms;

    fn ctx() -> Ctx {
        Ctx::new(Backend::scott_model())
    }

    #[test]
    fn axioms_confirmed() {
        let ctx = ctx();
        for c in axiom_checks(&ctx) {
            assert!(c.verdict.is_confirmed(), "{}: {} ({})", c.name, c.verdict, c.detail);
        }
    }

    #[test]
    fn choice_confirmed() {
        let ctx = ctx();
        for c in choice_check(&ctx) {
            assert!(c.verdict.is_confirmed(), "{}: {}", c.name, c.verdict);
        }
    }

    #[test]
    fn fixed_point_confirmed() {
        let ctx = ctx();
        for c in fixed_point_demo(&ctx) {
            assert!(c.verdict.is_confirmed(), "{}: {} ({})", c.name, c.verdict, c.detail);
        }
    }

    #[test]
    fn meyer_scott_certified() {
        let ctx = ctx();
        let rep = meyer_scott_counterexample(&ctx);
        assert!(rep.verdict.is_confirmed(), "{}", rep.verdict);
        assert!(rep.one_a_empty);
        assert!(rep.pair00_in_one_b);
    }

    #[test]
    fn ms_refuter_sweep() {
        let ctx = ctx();
        let cands = closed_terms(30);
        let recs = meyer_scott_refuter(&cands, &ctx);
        assert_eq!(recs.iter().filter(|(_, v)| v.is_confirmed()).count(), 0);
        assert!(recs.iter().filter(|(_, v)| v.is_refuted()).count() >= 25);
    }

    #[test]
    fn neq_sweep_never_confirms() {
        let ctx = ctx();
        let cands = closed_terms(30);
        let recs = neq_instability_refuter(&cands, &ctx);
        assert_eq!(recs.iter().filter(|(_, v)| v.is_confirmed()).count(), 0);
        assert!(recs.iter().filter(|(_, v)| v.is_refuted()).count() >= 20);
    }

    #[test]
    fn harness_runs_on_scott_structure() {
        let ctx = ctx();
        let s = scott_structure(&ctx);
        let f = crate::semantics::Formula::Eq(
            crate::semantics::FTerm::Var("x".to_string()),
            crate::semantics::FTerm::Var("x".to_string()),
        );
        let probes = crate::modal::ProbeFamily::default_family(&ctx);
        let items = crate::semantics::axiom_harness(&s, &f, "x", 0, &probes, &ctx);
        for it in &items {
            assert!(
                !it.verdict.is_refuted(),
                "{}: {}",
                it.name,
                it.verdict
            );
        }
    }
}
