//! The modal semantics over the arithmetic structure: translation
//! equivalences, the soundness harness, quantifier classification, and
//! change of basis.

use std::rc::Rc;

use realmod_core::backend::Backend;
use realmod_core::heyting::{Ctx, Verdict};
use realmod_core::modal::ProbeFamily;
use realmod_core::models::arith::{arith_structure, feq, flt, fnum, fsucc, fvar};
use realmod_core::semantics::{
    axiom_harness, change_of_basis, classify_quantifier, free_variable_instantiation,
    goedel_check, goedel_translate, simplify_box_forall, Env, Formula,
};

fn setup() -> (Ctx, realmod_core::semantics::Structure, ProbeFamily) {
    let ctx = Ctx::new(Backend::term_model());
    let s = arith_structure(6, &ctx);
    let probes = ProbeFamily::default_family(&ctx);
    (ctx, s, probes)
}

fn no_refutations(items: &[realmod_core::semantics::HarnessItem], what: &str) {
    for it in items {
        assert!(
            !it.verdict.is_refuted(),
            "{what}/{}: {}",
            it.name,
            it.verdict
        );
    }
}

fn all_confirmed(items: &[realmod_core::semantics::HarnessItem], what: &str) {
    for it in items {
        assert!(
            it.verdict.is_confirmed(),
            "{what}/{}: {}",
            it.name,
            it.verdict
        );
    }
}

#[test]
fn translation_shapes() {
    let f = Formula::Imp(
        Rc::new(feq(fvar("x"), fnum(0))),
        Rc::new(Formula::False),
    );
    let t = goedel_translate(&f).unwrap();
    assert_eq!(format!("{t}"), "(box (x = 0 -> false))");
    // atomics unchanged
    let a = feq(fvar("x"), fvar("y"));
    assert_eq!(goedel_translate(&a).unwrap(), a);
    // bounded existential stays compositional
    let ex = Formula::Exists(
        "z".to_string(),
        0,
        Rc::new(Formula::And(
            Rc::new(flt(fvar("z"), fvar("y"))),
            Rc::new(feq(fvar("z"), fvar("z"))),
        )),
    );
    let t = goedel_translate(&ex).unwrap();
    assert_eq!(format!("{t}"), "(exists z. (lt(z, y) & z = z))");
    // box forall x box phi simplifies to box forall x phi
    let fa = Formula::Forall(
        "z".to_string(),
        0,
        Rc::new(Formula::Imp(
            Rc::new(flt(fvar("z"), fvar("y"))),
            Rc::new(feq(fvar("z"), fvar("z"))),
        )),
    );
    let t = simplify_box_forall(&goedel_translate(&fa).unwrap());
    assert_eq!(
        format!("{t}"),
        "(box (forall z. (lt(z, y) -> z = z)))"
    );
}

#[test]
fn goedel_equivalences_on_corpus() {
    let (ctx, s, probes) = setup();
    let corpus: Vec<Formula> = vec![
        feq(fnum(0), fnum(0)),
        Formula::Imp(Rc::new(feq(fnum(0), fnum(1))), Rc::new(Formula::False)),
        Formula::Forall(
            "x".to_string(),
            0,
            Rc::new(Formula::Exists(
                "y".to_string(),
                0,
                Rc::new(feq(fvar("y"), fsucc(fvar("x")))),
            )),
        ),
        Formula::And(
            Rc::new(feq(fnum(1), fnum(1))),
            Rc::new(flt(fnum(0), fnum(1))),
        ),
        Formula::Or(
            Rc::new(feq(fnum(0), fnum(1))),
            Rc::new(flt(fnum(1), fnum(2))),
        ),
    ];
    for f in &corpus {
        let items = goedel_check(&s, f, &probes, &ctx);
        no_refutations(&items, &format!("{f}"));
    }
}

#[test]
fn harness_over_arith() {
    let (ctx, s, probes) = setup();
    let f = feq(fvar("x"), fvar("x"));
    let items = axiom_harness(&s, &f, "x", 0, &probes, &ctx);
    assert!(!items.is_empty());
    no_refutations(&items, "arith-harness");
    // atomic stability is among the confirmed items
    let stab: Vec<_> = items
        .iter()
        .filter(|i| i.name.starts_with("atomic-stability"))
        .collect();
    assert!(!stab.is_empty());
    for it in stab {
        assert!(it.verdict.is_confirmed(), "{}: {}", it.name, it.verdict);
    }
}

#[test]
fn quantifier_classification_of_arith() {
    let (ctx, s, _) = setup();
    let c = classify_quantifier(&s, &ctx, 0);
    assert!(c.non_degenerate.is_some());
    assert!(c.uniform.is_none());
    assert!(!c.classical);
    assert!(c.classical_refutation.is_some());
    assert!(c.term_friendly);
}

#[test]
fn free_variable_instantiation_skipped_for_arith() {
    let (ctx, s, probes) = setup();
    let f = feq(fvar("x"), fvar("x"));
    let items = free_variable_instantiation(&s, &f, "x", 0, &probes, &ctx);
    assert_eq!(items.len(), 1);
    assert!(matches!(
        items[0].verdict,
        Verdict::Inconclusive { .. }
    ));
}

#[test]
fn change_of_basis_matches_boxed_formula() {
    let (ctx, s, probes) = setup();
    let f = feq(fvar("x"), fnum(0));
    let s2 = change_of_basis(&s, &f, "G", &["x".to_string()], 0, &probes, &ctx).unwrap();
    let boxed = Formula::Box(Rc::new(f.clone()));
    let g_atom = Formula::Rel("G".to_string(), vec![fvar("x")]);
    for c in 0..2usize {
        let mut env = Env::new();
        env.insert("x".to_string(), (0, c));
        for (_, d) in probes.iter() {
            let lhs = s2.evaluate_modal(&g_atom, &env, d, &probes).unwrap();
            let rhs = s.evaluate_modal(&boxed, &env, d, &probes).unwrap();
            // agreement of membership on both sides' samples
            for cand in lhs.samples(&ctx).into_iter().chain(rhs.samples(&ctx)) {
                let a = lhs.membership(&ctx, &cand);
                let b = rhs.membership(&ctx, &cand);
                assert!(
                    !(a == realmod_core::comb::Tri::Yes && b == realmod_core::comb::Tri::No)
                        && !(a == realmod_core::comb::Tri::No
                            && b == realmod_core::comb::Tri::Yes),
                    "G vs box phi disagree at x={c}: {a:?} vs {b:?} on {cand}"
                );
            }
        }
    }
    // name collision rejected
    assert!(change_of_basis(&s2, &f, "G", &["x".to_string()], 0, &probes, &ctx).is_err());
}

#[test]
fn universal_instantiation_closed_form_everywhere() {
    let (ctx, s, probes) = setup();
    let f = feq(fvar("x"), fvar("x"));
    let items = axiom_harness(&s, &f, "x", 0, &probes, &ctx);
    let ui: Vec<_> = items
        .iter()
        .filter(|i| i.name == "universal-instantiation-closed")
        .collect();
    assert!(!ui.is_empty());
    all_confirmed(
        &ui.into_iter()
            .map(|i| realmod_core::semantics::HarnessItem {
                name: i.name.clone(),
                verdict: i.verdict.clone(),
            })
            .collect::<Vec<_>>(),
        "UI-closed",
    );
}

#[test]
fn ect_instance_replay() {
    // expand the structure with a decidable atomic for the successor graph,
    // extract its program from the totality witness, and recover the boxed
    // atomic through change of basis
    let (ctx, s, probes) = setup();
    let mut s2 = s.clone();
    s2.sig.rels.push(("G".to_string(), vec![0, 0]));
    s2.rel_val.insert(
        "G".to_string(),
        Rc::new(|args: &[usize]| {
            if args[1] == args[0] + 1 {
                realmod_core::heyting::TruthValue::top()
            } else {
                realmod_core::heyting::TruthValue::bot()
            }
        }),
    );
    // the witness pack entry for G: discard the equality pack
    let kit = &ctx.kit;
    let p1 = kit.std.p1.clone();
    let er = realmod_core::comb::bracket_open(
        &realmod_core::comb::app(
            p1.clone(),
            realmod_core::comb::app(p1.clone(), realmod_core::comb::var("c")),
        ),
        &["c"],
    );
    s2.pack.e_rel.insert("G".to_string(), er);

    // totality: forall n exists m G(n, m), realized by the member table
    let ct_ante = Formula::Forall(
        "n".to_string(),
        0,
        Rc::new(Formula::Exists(
            "m".to_string(),
            0,
            Rc::new(Formula::Rel(
                "G".to_string(),
                vec![fvar("n"), fvar("m")],
            )),
        )),
    );
    // at the domain edge the successor leaves the cutoff: restrict to a
    // bounded variant for the totality realizer
    let bound = s2.cutoff - 1;
    let wit = {
        let mut members = Vec::new();
        for n in 0..bound {
            let mut env = Env::new();
            env.insert("n".to_string(), (0, n));
            let body = Formula::Exists(
                "m".to_string(),
                0,
                Rc::new(Formula::Rel(
                    "G".to_string(),
                    vec![fvar("n"), fvar("m")],
                )),
            );
            members.push(
                realmod_core::models::arith::plain_member(&s2, &body, &env, &ctx)
                    .expect("existence member"),
            );
        }
        realmod_core::models::arith::member_table(&members, &ctx).unwrap()
    };
    // program extraction against the successor oracle
    let mut reg = realmod_core::models::arith::TURegistry::default();
    let r = realmod_core::models::arith::ct_instance_realizer(
        &s2,
        "G",
        &|n| n + 1,
        &wit,
        bound as u64,
        &mut reg,
        &ctx,
    );
    assert!(r.verdict.is_confirmed(), "{}", r.verdict);
    // the registered rows give true table atomics
    assert!(reg.t_holds(r.index, 2, 1000 * r.index as u64 + 2));
    assert!(reg.u_holds(1000 * r.index as u64 + 2, 3));

    // translation sends the antecedent behind a box; its member transports
    let translated = goedel_translate(&ct_ante).unwrap();
    assert!(format!("{translated}").starts_with("(box"));

    // change of basis recovers the boxed atomic as a new relation
    let s3 = change_of_basis(&s2, &Formula::Rel("G".to_string(), vec![fvar("x"), fvar("y")]),
        "H", &["x".to_string(), "y".to_string()], 0, &probes, &ctx)
        .unwrap();
    let h_atom = Formula::Rel("H".to_string(), vec![fvar("x"), fvar("y")]);
    let boxed_g = Formula::Box(Rc::new(Formula::Rel(
        "G".to_string(),
        vec![fvar("x"), fvar("y")],
    )));
    for (x, y) in [(0usize, 1usize), (1, 2), (0, 2)] {
        let mut env = Env::new();
        env.insert("x".to_string(), (0, x));
        env.insert("y".to_string(), (0, y));
        for (_, d) in probes.iter().take(2) {
            let lhs = s3.evaluate_modal(&h_atom, &env, d, &probes).unwrap();
            let rhs = s2.evaluate_modal(&boxed_g, &env, d, &probes).unwrap();
            for cand in lhs.samples(&ctx).into_iter().chain(rhs.samples(&ctx)) {
                let a = lhs.membership(&ctx, &cand);
                let b = rhs.membership(&ctx, &cand);
                assert!(
                    !(a == realmod_core::comb::Tri::Yes && b == realmod_core::comb::Tri::No)
                        && !(a == realmod_core::comb::Tri::No
                            && b == realmod_core::comb::Tri::Yes),
                    "H vs boxed G disagree at ({x},{y})"
                );
            }
        }
    }
}

#[test]
fn translation_commutes_with_substitution() {
    use realmod_core::semantics::subst_formula;
    let cases = [
        feq(fvar("x"), fvar("x")),
        Formula::Imp(Rc::new(feq(fvar("x"), fnum(0))), Rc::new(Formula::False)),
        Formula::Forall(
            "z".to_string(),
            0,
            Rc::new(Formula::Or(
                Rc::new(feq(fvar("z"), fvar("x"))),
                Rc::new(flt(fvar("x"), fvar("z"))),
            )),
        ),
        Formula::Exists("y".to_string(), 0, Rc::new(feq(fvar("y"), fsucc(fvar("x"))))),
    ];
    let with = fsucc(fnum(1));
    for f in cases {
        let a = goedel_translate(&subst_formula(&f, "x", &with)).unwrap();
        let b = subst_formula(&goedel_translate(&f).unwrap(), "x", &with);
        assert_eq!(a, b, "translation does not commute for {f}");
    }
}
