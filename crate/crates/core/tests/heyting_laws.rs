//! The uniform witness library against the double-negation laws and the
//! prealgebra structure, over seeded instantiations of the standard family.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use realmod_core::backend::Backend;
use realmod_core::comb::Tri;
use realmod_core::heyting::{
    check_reduction, standard_family, uniform_witnesses, Ctx, TruthValue,
};

fn pick(fam: &[TruthValue], rng: &mut ChaCha8Rng) -> TruthValue {
    fam[rng.gen_range(0..fam.len())].clone()
}

#[test]
fn dlaws_never_refuted_on_term_backend() {
    let ctx = Ctx::new(Backend::term_model());
    let lib = uniform_witnesses(&ctx);
    let fam = standard_family(&ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let o = TruthValue::ominus;

    for _ in 0..50 {
        let x = pick(&fam, &mut rng);
        let y = pick(&fam, &mut rng);
        let d = pick(&fam, &mut rng);
        let cases: Vec<(&str, TruthValue, TruthValue)> = vec![
            ("d2", x.clone(), o(&d, &x)),
            ("d3", o(&d, &o(&d, &x)), o(&d, &x)),
            ("d4r", o(&d, &x), o(&d, &o(&d, &x))),
            (
                "d5",
                o(&d, &TruthValue::imp(&x, &y)),
                TruthValue::imp(&o(&d, &x), &o(&d, &y)),
            ),
            (
                "d6",
                TruthValue::join(&o(&d, &x), &o(&d, &y)),
                o(&d, &TruthValue::join(&x, &y)),
            ),
            (
                "d7",
                o(&d, &TruthValue::meet(&x, &y)),
                TruthValue::meet(&o(&d, &x), &o(&d, &y)),
            ),
            (
                "d7r",
                TruthValue::meet(&o(&d, &x), &o(&d, &y)),
                o(&d, &TruthValue::meet(&x, &y)),
            ),
            ("d8", o(&d, &d), d.clone()),
            ("d9", d.clone(), o(&d, &x)),
            (
                "d10",
                TruthValue::imp(&o(&d, &x), &d),
                TruthValue::imp(&x, &d),
            ),
            (
                "d10r",
                TruthValue::imp(&x, &d),
                TruthValue::imp(&o(&d, &x), &d),
            ),
            ("dtop", o(&d, &TruthValue::top()), TruthValue::top()),
            ("dtopr", TruthValue::top(), o(&d, &TruthValue::top())),
            (
                "help1",
                TruthValue::meet(&x, &TruthValue::imp(&x, &y)),
                y.clone(),
            ),
            (
                "help3",
                TruthValue::meet(&TruthValue::imp(&x, &y), &TruthValue::imp(&y, &d)),
                TruthValue::imp(&x, &d),
            ),
        ];
        for (id, lhs, rhs) in cases {
            let w = lib.get(id).unwrap();
            let v = check_reduction(&ctx, w, &lhs, &rhs);
            assert!(!v.is_refuted(), "{id} refuted at x={x} y={y} d={d}: {v}");
        }
    }
}

#[test]
fn elementary_witnesses_e1_to_e12() {
    let ctx = Ctx::new(Backend::term_model());
    let lib = uniform_witnesses(&ctx);
    let fam = standard_family(&ctx);
    let std = ctx.backend.std_elements();
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    for _ in 0..50 {
        let x = pick(&fam, &mut rng);
        let y = pick(&fam, &mut rng);
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
            let w = lib.get(id).unwrap();
            let v = check_reduction(&ctx, w, &lhs, &rhs);
            assert!(!v.is_refuted(), "{id} refuted at x={x} y={y}: {v}");
        }

        // e3: from a : X ~> X and a' : Y ~> X, dispatch X v Y ~> X
        // (a = identity, a' = constant into a sample of X when X is sampled)
        if let Some(x0) = x.samples(&ctx).first().cloned() {
            let a = std.i.clone();
            let a2 = ctx.backend.apply(&std.k, &x0).defined().unwrap();
            let packed = ctx
                .backend
                .apply_all(&std.p, &[a, a2])
                .defined()
                .unwrap();
            let e3 = ctx
                .backend
                .apply(lib.get("e3").unwrap(), &packed)
                .defined()
                .unwrap();
            let v = check_reduction(&ctx, &e3, &join, &x);
            assert!(!v.is_refuted(), "e3 refuted at x={x} y={y}: {v}");

            // e4: from a : Y ~> X (constant) and a' : Y ~> Y, land in X & Y
            let a = ctx.backend.apply(&std.k, &x0).defined().unwrap();
            let packed = ctx
                .backend
                .apply_all(&std.p, &[a, std.i.clone()])
                .defined()
                .unwrap();
            let e4 = ctx
                .backend
                .apply(lib.get("e4").unwrap(), &packed)
                .defined()
                .unwrap();
            let v = check_reduction(&ctx, &e4, &y, &TruthValue::meet(&x, &y));
            assert!(!v.is_refuted(), "e4 refuted at x={x} y={y}: {v}");

            // e10 composition: i : Y ~> Y then const x0 : Y ~> X
            let a2 = ctx.backend.apply(&std.k, &x0).defined().unwrap();
            let packed = ctx
                .backend
                .apply_all(&std.p, &[std.i.clone(), a2])
                .defined()
                .unwrap();
            let e10 = ctx
                .backend
                .apply(lib.get("e10").unwrap(), &packed)
                .defined()
                .unwrap();
            let v = check_reduction(&ctx, &e10, &y, &x);
            assert!(!v.is_refuted(), "e10 refuted at x={x} y={y}: {v}");
        }

        // e11: from e5 : X & Y ~> X, curry to Y ~> (X => X)
        let e11 = ctx
            .backend
            .apply(lib.get("e11").unwrap(), lib.get("e5").unwrap())
            .defined()
            .unwrap();
        let v = check_reduction(&ctx, &e11, &y, &TruthValue::imp(&x, &x));
        assert!(!v.is_refuted(), "e11 refuted at x={x} y={y}: {v}");

        // e12: from k i : Y ~> (X => X), uncurry to X & Y ~> X
        let ki = ctx.backend.apply(&std.k, &std.i).defined().unwrap();
        let e12 = ctx
            .backend
            .apply(lib.get("e12").unwrap(), &ki)
            .defined()
            .unwrap();
        let v = check_reduction(&ctx, &e12, &meet, &x);
        assert!(!v.is_refuted(), "e12 refuted at x={x} y={y}: {v}");
    }
}

#[test]
fn d1_monotonicity_composes() {
    // confirmed u : X ~> Y lifts to O X ~> O Y through d1
    let ctx = Ctx::new(Backend::term_model());
    let lib = uniform_witnesses(&ctx);
    let fam = standard_family(&ctx);
    let std = ctx.backend.std_elements();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let x = pick(&fam, &mut rng);
        let y = pick(&fam, &mut rng);
        let d = pick(&fam, &mut rng);
        let meet = TruthValue::meet(&x, &y);
        // u = p0 : X & Y ~> X
        let lifted = ctx
            .backend
            .apply(lib.get("d1").unwrap(), &std.p0)
            .defined()
            .unwrap();
        let v = check_reduction(
            &ctx,
            &lifted,
            &TruthValue::ominus(&d, &meet),
            &TruthValue::ominus(&d, &x),
        );
        assert!(!v.is_refuted(), "d1 lift refuted: {v}");
    }
}

#[test]
fn transitivity_of_confirmed_reductions() {
    let ctx = Ctx::new(Backend::term_model());
    let lib = uniform_witnesses(&ctx);
    let fam = standard_family(&ctx);
    let std = ctx.backend.std_elements();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let x = pick(&fam, &mut rng);
        let y = pick(&fam, &mut rng);
        let meet2 = TruthValue::meet(&TruthValue::meet(&x, &y), &y);
        // p0 : (X&Y)&Y ~> X&Y, then p0 : X&Y ~> X; composition via e10
        let packed = ctx
            .backend
            .apply_all(&std.p, &[std.p0.clone(), std.p0.clone()])
            .defined()
            .unwrap();
        let comp = ctx
            .backend
            .apply(lib.get("e10").unwrap(), &packed)
            .defined()
            .unwrap();
        let v1 = check_reduction(&ctx, &std.p0, &meet2, &TruthValue::meet(&x, &y));
        let v2 = check_reduction(&ctx, &std.p0, &TruthValue::meet(&x, &y), &x);
        let v3 = check_reduction(&ctx, &comp, &meet2, &x);
        assert!(!v1.is_refuted() && !v2.is_refuted());
        assert!(!v3.is_refuted(), "composition refuted: {v3}");
    }
}

#[test]
fn family_ops_helpers() {
    // Proposition-level helper checks over small families with probes
    let ctx = Ctx::new(Backend::term_model());
    let lib = uniform_witnesses(&ctx);
    let fam = standard_family(&ctx);
    let o = TruthValue::ominus;
    let g: Vec<TruthValue> = fam.iter().take(3).cloned().collect();
    let f: Vec<TruthValue> = fam.iter().skip(2).take(3).cloned().collect();
    let d = TruthValue::singleton(ctx.backend.numeral(1));

    // O_D union of (g_i & f_i) vs O_D union of (g_i & O_D f_i): the
    // left-to-right witness lifts d2 pairwise under the union
    let union_plain = TruthValue::big_join(
        g.iter()
            .zip(f.iter())
            .map(|(gi, fi)| TruthValue::meet(gi, fi))
            .collect(),
    );
    let union_dn = TruthValue::big_join(
        g.iter()
            .zip(f.iter())
            .map(|(gi, fi)| TruthValue::meet(gi, &o(&d, fi)))
            .collect(),
    );
    // forward: members of union_plain map into union_dn by padding with d2
    let std = ctx.backend.std_elements();
    let kit = &ctx.kit;
    let pad = realmod_core::comb::bracket_open(
        &realmod_core::comb::apps(
            kit.std.p.clone(),
            &[
                realmod_core::comb::app(kit.std.p0.clone(), realmod_core::comb::var("c")),
                realmod_core::comb::app(
                    kit.d2.clone(),
                    realmod_core::comb::app(kit.std.p1.clone(), realmod_core::comb::var("c")),
                ),
            ],
        ),
        &["c"],
    );
    let pad = ctx.inject(&pad);
    let v = check_reduction(&ctx, &pad, &union_plain, &union_dn);
    assert!(!v.is_refuted(), "pairwise pad refuted: {v}");
    // hence O_D(union_plain) ~> O_D(union_dn) through d1
    let lifted = ctx
        .backend
        .apply(lib.get("d1").unwrap(), &pad)
        .defined()
        .unwrap();
    let v = check_reduction(&ctx, &lifted, &o(&d, &union_plain), &o(&d, &union_dn));
    assert!(!v.is_refuted(), "mylittlehelper forward refuted: {v}");

    // intersection of f_i sits inside O_D of each member (proponintersection,
    // forward direction): d2 uniformly
    let inter = TruthValue::big_meet(f.clone());
    let probes = [TruthValue::bot(), TruthValue::top(), d.clone()];
    for dd in &probes {
        let d2w = ctx.inject(&kit.d2);
        for fi in &f {
            let v = check_reduction(&ctx, &d2w, &inter, &o(dd, fi));
            assert!(!v.is_refuted(), "proponintersection fwd refuted: {v}");
        }
    }
    // backward: d8 maps the doubly-negated intersection back at D = f_i
    let all = TruthValue::big_meet(
        probes
            .iter()
            .flat_map(|dd| f.iter().map(move |fi| o(dd, fi)))
            .chain(f.iter().map(|fi| o(fi, fi)))
            .collect(),
    );
    let d8 = lib.get("d8").unwrap();
    for fi in &f {
        let v = check_reduction(&ctx, d8, &all, fi);
        assert!(!v.is_refuted(), "proponintersection bwd refuted at {fi}: {v}");
    }
    let _ = std;
}

#[test]
fn big_ops_membership_neutrality() {
    let ctx = Ctx::new(Backend::term_model());
    let x = TruthValue::singleton(ctx.backend.numeral(2));
    let m = TruthValue::big_meet(vec![TruthValue::top(), TruthValue::top(), x.clone()]);
    let e_in = ctx.backend.numeral(2);
    let e_out = ctx.backend.numeral(3);
    assert_eq!(m.membership(&ctx, &e_in), Tri::Yes);
    assert_eq!(m.membership(&ctx, &e_out), Tri::No);
    let j = TruthValue::big_join(vec![TruthValue::bot(), x]);
    assert_eq!(j.membership(&ctx, &e_in), Tri::Yes);
    assert_eq!(j.membership(&ctx, &e_out), Tri::No);
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_tv() -> impl Strategy<Value = TruthValue> {
        let ctx = Ctx::new(Backend::term_model());
        let leaves = prop_oneof![
            Just(TruthValue::top()),
            Just(TruthValue::bot()),
            (0u64..5).prop_map({
                let ctx = ctx.clone();
                move |n| TruthValue::singleton(ctx.backend.numeral(n))
            }),
        ];
        leaves.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| TruthValue::meet(&a, &b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| TruthValue::join(&a, &b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| TruthValue::imp(&a, &b)),
                (inner.clone(), inner).prop_map(|(a, b)| TruthValue::ominus(&a, &b)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Samples of a truth value are never membership-Out of it.
        #[test]
        fn sampler_soundness(tv in arb_tv()) {
            let ctx = Ctx::new(Backend::term_model());
            for s in tv.samples(&ctx) {
                prop_assert_ne!(tv.membership(&ctx, &s), Tri::No);
            }
        }

        /// A refutation found at a small sample budget persists at a larger
        /// one (the sample sequence is a prefix-extension).
        #[test]
        fn refutation_persists_with_budget(tv in arb_tv(), n in 0u64..4) {
            let ctx = Ctx::new(Backend::term_model());
            let small = ctx.with_samples(4);
            let big = ctx.with_samples(12);
            let std = ctx.backend.std_elements();
            let ka = ctx.backend.apply(&std.k, &ctx.backend.numeral(n)).defined().unwrap();
            let target = TruthValue::singleton(ctx.backend.numeral(n + 1));
            let v_small = check_reduction(&small, &ka, &tv, &target);
            let v_big = check_reduction(&big, &ka, &tv, &target);
            if v_small.is_refuted() {
                prop_assert!(v_big.is_refuted());
            }
        }
    }
}
