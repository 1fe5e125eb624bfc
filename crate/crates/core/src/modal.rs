//! The Boolean prealgebra hosting the modal semantics: point-indexed maps
//! `f(x, D)` fixed by the generalized double negation, the embedding `mu`,
//! the probe-family intersection `inf`, and the box operator `mu . inf`.
//!
//! Intersections over the full powerset are not computable; they are
//! approximated over a finite probe family. Every report produced from these
//! values carries the probe list as an approximation flag.

use std::fmt;
use std::rc::Rc;

use crate::backend::Element;
use crate::comb::{app, Term, Tri};
use crate::heyting::{check_reduction, Ctx, TruthValue, Verdict};

/// Finite family of truth values standing in for quantification over all of
/// the powerset. Always contains bottom and top; duplicates (by structural
/// fingerprint) are dropped.
#[derive(Clone)]
pub struct ProbeFamily {
    probes: Vec<(String, TruthValue)>,
}

impl ProbeFamily {
    pub fn new(mut extra: Vec<(String, TruthValue)>) -> ProbeFamily {
        let mut probes = vec![
            ("bot".to_string(), TruthValue::bot()),
            ("top".to_string(), TruthValue::top()),
        ];
        let mut seen: Vec<String> = probes.iter().map(|(_, t)| t.fingerprint()).collect();
        for (label, tv) in extra.drain(..) {
            let fp = tv.fingerprint();
            if !seen.contains(&fp) {
                seen.push(fp);
                probes.push((label, tv));
            }
        }
        ProbeFamily { probes }
    }

    pub fn default_family(ctx: &Ctx) -> ProbeFamily {
        ProbeFamily::new(vec![
            (
                "num1".to_string(),
                TruthValue::singleton(ctx.backend.numeral(1)),
            ),
            (
                "num2".to_string(),
                TruthValue::singleton(ctx.backend.numeral(2)),
            ),
        ])
    }

    pub fn with_extra(&self, extra: Vec<(String, TruthValue)>) -> ProbeFamily {
        let mut all = self.probes.clone();
        all.extend(extra);
        ProbeFamily::new(all.split_off(2))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(String, TruthValue)> {
        self.probes.iter()
    }

    pub fn values(&self) -> Vec<TruthValue> {
        self.probes.iter().map(|(_, t)| t.clone()).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.probes.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for ProbeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

type CellRule = Rc<dyn Fn(usize, &TruthValue) -> TruthValue>;

/// An element of the Boolean prealgebra over a finite point domain: a rule
/// assigning a truth value to every point and probe, together with the
/// membership certificate for the double-negation fixedpoint condition.
#[derive(Clone)]
pub struct ModalTruth {
    pub points: usize,
    rule: CellRule,
    /// Witness for `O_D f(x,D) ~> f(x,D)` on every cell.
    pub cert: Element,
    pub label: String,
}

impl ModalTruth {
    pub fn new(points: usize, label: &str, cert: Element, rule: CellRule) -> ModalTruth {
        ModalTruth {
            points,
            rule,
            cert,
            label: label.to_string(),
        }
    }

    pub fn at(&self, x: usize, d: &TruthValue) -> TruthValue {
        (self.rule)(x, d)
    }

    /// Check the Boolean-membership certificate on all tabulated cells.
    pub fn check_certificate(&self, ctx: &Ctx, probes: &ProbeFamily) -> Verdict {
        for x in 0..self.points {
            for (_, d) in probes.iter() {
                let cell = self.at(x, d);
                let v = check_reduction(
                    ctx,
                    &self.cert,
                    &TruthValue::ominus(d, &cell),
                    &cell,
                );
                if v.is_refuted() {
                    return v;
                }
            }
        }
        Verdict::Confirmed
    }
}

/// The embedding: `mu(f)(x, D) = O_D f(x)`. The certificate is the
/// idempotence witness of the double negation.
pub fn mu(ctx: &Ctx, points: usize, label: &str, f: Rc<dyn Fn(usize) -> TruthValue>) -> ModalTruth {
    let cert = ctx.inject(&ctx.kit.d3);
    ModalTruth::new(
        points,
        &format!("mu({label})"),
        cert,
        Rc::new(move |x, d| TruthValue::ominus(d, &f(x))),
    )
}

/// Pointwise intersection over the probe family.
pub fn inf_op(f: &ModalTruth, probes: &ProbeFamily) -> Rc<dyn Fn(usize) -> TruthValue> {
    let f = f.clone();
    let probes = probes.clone();
    Rc::new(move |x| {
        TruthValue::big_meet(probes.iter().map(|(_, z)| f.at(x, z)).collect())
    })
}

/// The box operator `mu . inf`, a declared superset approximation of the
/// true box (the intersection runs over the probe family only).
pub fn box_op(ctx: &Ctx, f: &ModalTruth, probes: &ProbeFamily) -> ModalTruth {
    let inner = inf_op(f, probes);
    let mut b = mu(ctx, f.points, &format!("box({})", f.label), inner);
    b.label = format!("box({})", f.label);
    b
}

/// The Boolean join `f v^pi g = O_D (f v g)`.
pub fn or_pi(ctx: &Ctx, f: &ModalTruth, g: &ModalTruth) -> ModalTruth {
    assert_eq!(f.points, g.points);
    let cert = ctx.inject(&ctx.kit.d3);
    let (fc, gc) = (f.clone(), g.clone());
    ModalTruth::new(
        f.points,
        &format!("({} v {})", f.label, g.label),
        cert,
        Rc::new(move |x, d| {
            TruthValue::ominus(d, &TruthValue::join(&fc.at(x, d), &gc.at(x, d)))
        }),
    )
}

/// Pointwise conjunction; the certificate distributes the double negation
/// over the pair and reassembles with the component certificates.
pub fn and_cell(ctx: &Ctx, f: &ModalTruth, g: &ModalTruth) -> ModalTruth {
    assert_eq!(f.points, g.points);
    let kit = &ctx.kit;
    // cf cg t = p (cf (p0 (d7 t))) (cg (p1 (d7 t)))
    let gadget = crate::comb::bracket_open(
        &crate::comb::apps(
            kit.std.p.clone(),
            &[
                app(
                    crate::comb::var("cf"),
                    app(kit.std.p0.clone(), app(kit.d7.clone(), crate::comb::var("t"))),
                ),
                app(
                    crate::comb::var("cg"),
                    app(kit.std.p1.clone(), app(kit.d7.clone(), crate::comb::var("t"))),
                ),
            ],
        ),
        &["cf", "cg", "t"],
    );
    let cert = ctx
        .backend
        .apply_all(&ctx.inject(&gadget), &[f.cert.clone(), g.cert.clone()])
        .defined()
        .expect("certificate assembly is total");
    let (fc, gc) = (f.clone(), g.clone());
    ModalTruth::new(
        f.points,
        &format!("({} & {})", f.label, g.label),
        cert,
        Rc::new(move |x, d| TruthValue::meet(&fc.at(x, d), &gc.at(x, d))),
    )
}

/// Pointwise conditional. The antecedent need not be in the algebra
/// (freedom in the antecedent): the certificate only uses the consequent's.
pub fn imp_cell(ctx: &Ctx, f: &ModalTruth, g: &ModalTruth) -> ModalTruth {
    assert_eq!(f.points, g.points);
    let kit = &ctx.kit;
    // cg t a = cg ((d5 t) (d2 a))
    let gadget = crate::comb::bracket_open(
        &app(
            crate::comb::var("cg"),
            app(
                app(kit.d5.clone(), crate::comb::var("t")),
                app(kit.d2.clone(), crate::comb::var("a")),
            ),
        ),
        &["cg", "t", "a"],
    );
    let cert = ctx
        .backend
        .apply(&ctx.inject(&gadget), &g.cert)
        .defined()
        .expect("certificate assembly is total");
    let (fc, gc) = (f.clone(), g.clone());
    ModalTruth::new(
        f.points,
        &format!("({} => {})", f.label, g.label),
        cert,
        Rc::new(move |x, d| TruthValue::imp(&fc.at(x, d), &gc.at(x, d))),
    )
}

/// Intersection of a uniformly certified family: certified by composing the
/// shared certificate with monotonicity.
pub fn big_meet_cells(ctx: &Ctx, label: &str, fs: &[ModalTruth], shared_cert: &Element) -> ModalTruth {
    assert!(!fs.is_empty());
    let points = fs[0].points;
    let kit = &ctx.kit;
    // c t = c (d1 i t): shrink O of the intersection to O of a component,
    // then apply the shared certificate
    let gadget = crate::comb::bracket_open(
        &app(
            crate::comb::var("c"),
            crate::comb::apps(kit.d1.clone(), &[kit.std.i.clone(), crate::comb::var("t")]),
        ),
        &["c", "t"],
    );
    let cert = ctx
        .backend
        .apply(&ctx.inject(&gadget), shared_cert)
        .defined()
        .expect("certificate assembly is total");
    let fs: Vec<ModalTruth> = fs.to_vec();
    ModalTruth::new(
        points,
        label,
        cert,
        Rc::new(move |x, d| {
            TruthValue::big_meet(fs.iter().map(|f| f.at(x, d)).collect())
        }),
    )
}

/// Closed S4 witnesses. `k_axiom` and `four` are closed; `t_axiom` expects
/// the target's Boolean certificate as its first argument.
pub struct S4Witnesses {
    pub k_axiom: Element,
    pub t_axiom: Element,
    pub four: Element,
    pub necessitation: Element,
}

pub fn s4_witnesses(ctx: &Ctx) -> S4Witnesses {
    let kit = &ctx.kit;
    // K: c |-> d1 help1 (d7r c)
    let k_term = crate::comb::bracket_open(
        &app(
            crate::comb::apps(kit.d1.clone(), std::slice::from_ref(&kit.help1)),
            app(kit.d7r.clone(), crate::comb::var("c")),
        ),
        &["c"],
    );
    // T: w c |-> w (d1 i c)
    let t_term = crate::comb::bracket_open(
        &app(
            crate::comb::var("w"),
            crate::comb::apps(
                kit.d1.clone(),
                &[kit.std.i.clone(), crate::comb::var("c")],
            ),
        ),
        &["w", "c"],
    );
    // 4: d1 d2
    let four_term = app(kit.d1.clone(), kit.d2.clone());
    // necessitation: w t |-> d2 (w t)
    let nec_term = crate::comb::bracket_open(
        &app(
            kit.d2.clone(),
            app(crate::comb::var("w"), crate::comb::var("t")),
        ),
        &["w", "t"],
    );
    S4Witnesses {
        k_axiom: ctx.inject(&k_term),
        t_axiom: ctx.inject(&t_term),
        four: ctx.inject(&four_term),
        necessitation: ctx.inject(&nec_term),
    }
}

/// Check the S4 axioms on one certified element (and a companion for K).
pub fn check_s4(
    ctx: &Ctx,
    w: &S4Witnesses,
    f: &ModalTruth,
    g: &ModalTruth,
    probes: &ProbeFamily,
) -> Vec<(String, Verdict)> {
    let mut out = Vec::new();
    let boxf = box_op(ctx, f, probes);
    let boxg = box_op(ctx, g, probes);
    let fg = imp_cell(ctx, f, g);
    let boxfg = box_op(ctx, &fg, probes);
    let boxboxf = box_op(ctx, &boxf, probes);
    let t_wit = ctx
        .backend
        .apply(&w.t_axiom, &f.cert)
        .defined()
        .expect("T witness assembly");
    for x in 0..f.points {
        for (_, d) in probes.iter() {
            let k_v = check_reduction(
                ctx,
                &w.k_axiom,
                &TruthValue::meet(&boxf.at(x, d), &boxfg.at(x, d)),
                &boxg.at(x, d),
            );
            out.push((format!("K@{x}"), k_v));
            let t_v = check_reduction(ctx, &t_wit, &boxf.at(x, d), &f.at(x, d));
            out.push((format!("T@{x}"), t_v));
            let four_v = check_reduction(ctx, &w.four, &boxf.at(x, d), &boxboxf.at(x, d));
            out.push((format!("4@{x}"), four_v));
        }
    }
    out
}

/// Both directions of `mu(f => g) == box(mu f => mu g)`.
pub fn embedding_conditionals(
    ctx: &Ctx,
    points: usize,
    f: Rc<dyn Fn(usize) -> TruthValue>,
    g: Rc<dyn Fn(usize) -> TruthValue>,
    probes: &ProbeFamily,
) -> Vec<(String, Verdict)> {
    let kit = &ctx.kit;
    let f2 = f.clone();
    let g2 = g.clone();
    let lhs = mu(
        ctx,
        points,
        "f=>g",
        Rc::new(move |x| TruthValue::imp(&f2(x), &g2(x))),
    );
    let muf = mu(ctx, points, "f", f.clone());
    let mug = mu(ctx, points, "g", g.clone());
    let imp = imp_cell(ctx, &muf, &mug);
    let rhs = box_op(ctx, &imp, probes);
    // forward: d1 (\v. d5 (d2 v)), backward: d1 (\e a. d8 (e (d2 a)))
    let fwd = app(
        kit.d1.clone(),
        crate::comb::bracket_open(
            &app(kit.d5.clone(), app(kit.d2.clone(), crate::comb::var("v"))),
            &["v"],
        ),
    );
    let bwd = app(
        kit.d1.clone(),
        crate::comb::bracket_open(
            &app(
                kit.d8.clone(),
                app(
                    crate::comb::var("e"),
                    app(kit.d2.clone(), crate::comb::var("a")),
                ),
            ),
            &["e", "a"],
        ),
    );
    let fwd = ctx.inject(&fwd);
    let bwd = ctx.inject(&bwd);
    let mut out = Vec::new();
    for x in 0..points {
        for (_, d) in probes.iter() {
            out.push((
                format!("4.8-fwd@{x}"),
                check_reduction(ctx, &fwd, &lhs.at(x, d), &rhs.at(x, d)),
            ));
            out.push((
                format!("4.8-bwd@{x}"),
                check_reduction(ctx, &bwd, &rhs.at(x, d), &lhs.at(x, d)),
            ));
        }
    }
    out
}

/// Both directions of `mu(meet_i f_i) == box(meet_i mu(f_i))`.
pub fn embedding_intersections(
    ctx: &Ctx,
    points: usize,
    fs: Vec<Rc<dyn Fn(usize) -> TruthValue>>,
    probes: &ProbeFamily,
) -> Vec<(String, Verdict)> {
    let kit = &ctx.kit;
    let fs2 = fs.clone();
    let lhs = mu(
        ctx,
        points,
        "meet f_i",
        Rc::new(move |x| TruthValue::big_meet(fs2.iter().map(|f| f(x)).collect())),
    );
    let mus: Vec<ModalTruth> = fs
        .iter()
        .enumerate()
        .map(|(i, f)| mu(ctx, points, &format!("f{i}"), f.clone()))
        .collect();
    let shared = ctx.inject(&kit.d3);
    let inter = big_meet_cells(ctx, "meet mu(f_i)", &mus, &shared);
    let rhs = box_op(ctx, &inter, probes);
    let fwd = ctx.inject(&app(kit.d1.clone(), kit.d2.clone()));
    let bwd = ctx.inject(&app(kit.d1.clone(), kit.d8.clone()));
    let mut out = Vec::new();
    for x in 0..points {
        for (_, d) in probes.iter() {
            out.push((
                format!("4.9-fwd@{x}"),
                check_reduction(ctx, &fwd, &lhs.at(x, d), &rhs.at(x, d)),
            ));
            out.push((
                format!("4.9-bwd@{x}"),
                check_reduction(ctx, &bwd, &rhs.at(x, d), &lhs.at(x, d)),
            ));
        }
    }
    out
}

/// The set Q: intersection over probes of `(top => Z) => (top => Z)`.
pub fn q_set(probes: &ProbeFamily) -> TruthValue {
    TruthValue::big_meet(
        probes
            .iter()
            .map(|(_, z)| {
                let tz = TruthValue::imp(&TruthValue::top(), z);
                TruthValue::imp(&tz, &tz)
            })
            .collect(),
    )
}

/// Emptiness observation at a finite budget.
#[derive(Clone, Debug, PartialEq)]
pub enum BotObservation {
    EmptyObserved,
    Inhabited(String),
    Inconclusive,
}

/// Observe whether a truth value is empty: no samples, and no candidate from
/// the standard pool (or constant functions over it) tests as a member.
pub fn observe_bot(ctx: &Ctx, tv: &TruthValue) -> BotObservation {
    if let Some(s) = tv.samples(ctx).first() {
        if tv.membership(ctx, s) == Tri::Yes {
            return BotObservation::Inhabited(format!("{s}"));
        }
    }
    let std = ctx.backend.std_elements();
    let mut candidates = vec![std.i.clone(), std.k.clone()];
    for e in ctx.backend.sample_pool() {
        if let crate::backend::AppResult::Defined(ke) = ctx.backend.apply(&std.k, &e) {
            candidates.push(ke);
        }
    }
    let mut unknown = false;
    for c in candidates {
        match tv.membership(ctx, &c) {
            Tri::Yes => return BotObservation::Inhabited(format!("{c}")),
            Tri::Unknown => unknown = true,
            Tri::No => {}
        }
    }
    if unknown {
        BotObservation::Inconclusive
    } else {
        BotObservation::EmptyObserved
    }
}

/// The box-diamond classification of one element per the status-of-S5
/// analysis: M_f = inf(f => bot-pi), and box-diamond f collapses to
/// `O_D Q` when M_f is empty and to `O_D bot` otherwise.
pub struct S5Analysis {
    pub m_f: Vec<TruthValue>,
    pub m_f_observation: Vec<BotObservation>,
    pub boxdiamond: ModalTruth,
}

pub fn s5_analysis(ctx: &Ctx, f: &ModalTruth, probes: &ProbeFamily) -> S5Analysis {
    let mut m_f = Vec::new();
    let mut obs = Vec::new();
    for x in 0..f.points {
        let cell = TruthValue::big_meet(
            probes
                .iter()
                .map(|(_, z)| {
                    TruthValue::imp(&f.at(x, z), &TruthValue::ominus(z, &TruthValue::bot()))
                })
                .collect(),
        );
        obs.push(observe_bot(ctx, &cell));
        m_f.push(cell);
    }
    let q = q_set(probes);
    let per_point: Vec<TruthValue> = obs
        .iter()
        .map(|o| match o {
            BotObservation::EmptyObserved => q.clone(),
            _ => TruthValue::bot(),
        })
        .collect();
    let cert = ctx.inject(&ctx.kit.d3);
    let boxdiamond = ModalTruth::new(
        f.points,
        &format!("boxdia({})", f.label),
        cert,
        Rc::new(move |x, d| TruthValue::ominus(d, &per_point[x])),
    );
    S5Analysis {
        m_f,
        m_f_observation: obs,
        boxdiamond,
    }
}

/// One replayed refutation: the candidate, what it was fed, the verdict.
pub struct RefutationRecord {
    pub candidate: Term,
    pub verdict: Verdict,
    pub trace: String,
}

/// Replay the S5 counterexample against each candidate: a uniform witness
/// for both `f0 ~> boxdia f0` and `f1 ~> boxdia f1` would have to send the
/// constant-a function to an element equal to both a and b.
pub fn s5_refuter(ctx: &Ctx, candidates: &[Term]) -> Vec<RefutationRecord> {
    let be = &ctx.backend;
    let std = be.std_elements();
    let a = be.numeral(0);
    let b = be.numeral(1);
    let e_prime = be.apply(&std.k, &a).defined().unwrap();
    let m = be.apply(&std.k, &b).defined().unwrap();
    let mut out = Vec::new();
    for cand in candidates {
        let e = be.inject(cand);
        let fuel2 = ctx.backend.params.fuel.saturating_mul(2);
        let step1 = match be.apply_fuel(&e, &e_prime, fuel2) {
            crate::backend::AppResult::Defined(v) => v,
            crate::backend::AppResult::FuelExhausted => {
                out.push(RefutationRecord {
                    candidate: cand.clone(),
                    verdict: Verdict::Refuted {
                        counterexample: e_prime.clone(),
                        context: "e e' diverged at doubled fuel".to_string(),
                    },
                    trace: "application to the constant-a function diverged".to_string(),
                });
                continue;
            }
        };
        let w = match be.apply_fuel(&step1, &m, fuel2) {
            crate::backend::AppResult::Defined(v) => v,
            crate::backend::AppResult::FuelExhausted => {
                out.push(RefutationRecord {
                    candidate: cand.clone(),
                    verdict: Verdict::Refuted {
                        counterexample: m.clone(),
                        context: "e e' m diverged at doubled fuel".to_string(),
                    },
                    trace: "application to the Q=>{b} member diverged".to_string(),
                });
                continue;
            }
        };
        let eq_a = be.eq(&w, &a);
        let eq_b = be.eq(&w, &b);
        let (verdict, trace) = match (eq_a, eq_b) {
            (Tri::Yes, _) => (
                Verdict::Refuted {
                    counterexample: m.clone(),
                    context: format!("e e' m = {w} = a, but the f0 side needs b"),
                },
                "f0 requirement violated".to_string(),
            ),
            (_, Tri::Yes) => (
                Verdict::Refuted {
                    counterexample: m.clone(),
                    context: format!("e e' m = {w} = b, but the f1 side needs a"),
                },
                "f1 requirement violated".to_string(),
            ),
            (Tri::No, Tri::No) => (
                Verdict::Refuted {
                    counterexample: m.clone(),
                    context: format!("e e' m = {w} is neither a nor b"),
                },
                "both requirements violated".to_string(),
            ),
            _ => (
                Verdict::Inconclusive {
                    reason: "canonical equality undecided at this fuel".to_string(),
                },
                "equality fuel-limited".to_string(),
            ),
        };
        out.push(RefutationRecord {
            candidate: cand.clone(),
            verdict,
            trace,
        });
    }
    out
}

/// Evidence that a singleton-domain element satisfies S5: either it is
/// equivalent to bot-pi (with the forward witness), or its M_f is observed
/// empty.
pub enum S5Evidence {
    BotPiEquivalent { to_botpi: Element },
    MfEmpty,
}

/// Construct and check the singleton-domain S5 witness for one element.
pub fn singleton_s5_check(
    ctx: &Ctx,
    f: &ModalTruth,
    evidence: &S5Evidence,
    probes: &ProbeFamily,
) -> Verdict {
    assert_eq!(f.points, 1, "singleton-domain check");
    let analysis = s5_analysis(ctx, f, probes);
    let witness = match evidence {
        // f == bot-pi: the equivalence witness lands f inside O_D bot
        S5Evidence::BotPiEquivalent { to_botpi } => to_botpi.clone(),
        // M_f empty: any member of Q lifted by the law-(14) witness,
        // constantly
        S5Evidence::MfEmpty => {
            let d2i = ctx
                .backend
                .apply(&ctx.inject(&ctx.kit.d2), &ctx.backend.std_elements().i)
                .defined()
                .unwrap();
            ctx.backend
                .apply(&ctx.backend.std_elements().k, &d2i)
                .defined()
                .unwrap()
        }
    };
    for (_, d) in probes.iter() {
        let v = check_reduction(ctx, &witness, &f.at(0, d), &analysis.boxdiamond.at(0, d));
        if v.is_refuted() {
            return v;
        }
    }
    Verdict::Confirmed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Backend;

    fn setup() -> (Ctx, ProbeFamily) {
        let ctx = Ctx::new(Backend::term_model());
        let probes = ProbeFamily::default_family(&ctx);
        (ctx, probes)
    }

    #[test]
    fn probe_family_dedups_and_keeps_ends() {
        let (ctx, _) = setup();
        let p = ProbeFamily::new(vec![
            ("b".into(), TruthValue::bot()),
            ("x".into(), TruthValue::singleton(ctx.backend.numeral(1))),
            ("x2".into(), TruthValue::singleton(ctx.backend.numeral(1))),
        ]);
        assert_eq!(p.len(), 3); // bot, top, one singleton
    }

    #[test]
    fn mu_of_top_is_top_like() {
        let (ctx, probes) = setup();
        let f = mu(&ctx, 1, "top", Rc::new(|_| TruthValue::top()));
        // law-dtop: O_D top == top, checked in both directions
        let lib = crate::heyting::uniform_witnesses(&ctx);
        for (_, d) in probes.iter() {
            let cell = f.at(0, d);
            let v = check_reduction(&ctx, lib.get("dtop").unwrap(), &cell, &TruthValue::top());
            assert!(!v.is_refuted(), "{v}");
            let v = check_reduction(&ctx, lib.get("dtopr").unwrap(), &TruthValue::top(), &cell);
            assert!(!v.is_refuted(), "{v}");
        }
    }

    #[test]
    fn mu_certificates_hold() {
        let (ctx, probes) = setup();
        for (label, base) in [
            ("top", TruthValue::top()),
            ("num", TruthValue::singleton(ctx.backend.numeral(2))),
        ] {
            let f = mu(&ctx, 2, label, Rc::new(move |_| base.clone()));
            assert!(f.check_certificate(&ctx, &probes).is_confirmed());
        }
    }

    #[test]
    fn mu_monotone() {
        let (ctx, probes) = setup();
        // f <= g via p0 : meet ~> component; lift to mu(f) ~> mu(g)
        let x = TruthValue::singleton(ctx.backend.numeral(1));
        let y = TruthValue::singleton(ctx.backend.numeral(2));
        let meet = TruthValue::meet(&x, &y);
        let f = mu(&ctx, 1, "f", Rc::new(move |_| meet.clone()));
        let g = mu(&ctx, 1, "g", Rc::new(move |_| x.clone()));
        let std = ctx.backend.std_elements();
        let lifted = ctx
            .backend
            .apply(&ctx.inject(&ctx.kit.d1), &std.p0)
            .defined()
            .unwrap();
        for (_, d) in probes.iter() {
            let v = check_reduction(&ctx, &lifted, &f.at(0, d), &g.at(0, d));
            assert!(!v.is_refuted(), "{v}");
        }
    }

    #[test]
    fn box_of_top_confirmed() {
        let (ctx, probes) = setup();
        let top = mu(&ctx, 1, "top", Rc::new(|_| TruthValue::top()));
        let b = box_op(&ctx, &top, &probes);
        // top ~> box top via the necessitation gadget on the trivial witness
        let s4 = s4_witnesses(&ctx);
        let std = ctx.backend.std_elements();
        // w: anything ~> top cell: constant into a top sample... the
        // d2-image of i is in O_D top for every D
        let w = ctx
            .backend
            .apply(&std.k, &std.i)
            .defined()
            .unwrap();
        let nec = ctx
            .backend
            .apply(&s4.necessitation, &w)
            .defined()
            .unwrap();
        for (_, d) in probes.iter() {
            let v = check_reduction(&ctx, &nec, &TruthValue::top(), &b.at(0, d));
            assert!(!v.is_refuted(), "{v}");
        }
    }

    #[test]
    fn s4_axioms_on_samples() {
        let (ctx, probes) = setup();
        let w = s4_witnesses(&ctx);
        let n2 = TruthValue::singleton(ctx.backend.numeral(2));
        let f = mu(&ctx, 1, "f", Rc::new(move |_| n2.clone()));
        let g = mu(&ctx, 1, "top", Rc::new(|_| TruthValue::top()));
        for (name, v) in check_s4(&ctx, &w, &f, &g, &probes) {
            assert!(!v.is_refuted(), "{name}: {v}");
        }
    }

    #[test]
    fn embedding_laws_on_samples() {
        let (ctx, probes) = setup();
        let n1 = TruthValue::singleton(ctx.backend.numeral(1));
        let n1c = n1.clone();
        let f: Rc<dyn Fn(usize) -> TruthValue> = Rc::new(move |_| n1c.clone());
        let g: Rc<dyn Fn(usize) -> TruthValue> = Rc::new(|_| TruthValue::top());
        let probes = probes.with_extra(vec![("fval".into(), n1.clone())]);
        for (name, v) in embedding_conditionals(&ctx, 1, f.clone(), g.clone(), &probes) {
            assert!(!v.is_refuted(), "{name}: {v}");
        }
        for (name, v) in embedding_intersections(&ctx, 1, vec![f, g], &probes) {
            assert!(!v.is_refuted(), "{name}: {v}");
        }
    }

    #[test]
    fn constructors_emit_certified_elements() {
        let (ctx, probes) = setup();
        let n2 = TruthValue::singleton(ctx.backend.numeral(2));
        let n22 = n2.clone();
        let f = mu(&ctx, 1, "f", Rc::new(move |_| n2.clone()));
        let g = mu(&ctx, 1, "top", Rc::new(|_| TruthValue::top()));
        let b = box_op(&ctx, &f, &probes);
        assert!(b.check_certificate(&ctx, &probes).is_confirmed(), "box");
        let j = or_pi(&ctx, &f, &g);
        assert!(j.check_certificate(&ctx, &probes).is_confirmed(), "join");
        let m = and_cell(&ctx, &f, &g);
        assert!(m.check_certificate(&ctx, &probes).is_confirmed(), "meet");
        // freedom in the antecedent: an uncertified antecedent is fine
        let wild = ModalTruth::new(
            1,
            "wild",
            ctx.backend.std_elements().i,
            Rc::new(move |_, _| n22.clone()),
        );
        let i = imp_cell(&ctx, &wild, &g);
        assert!(i.check_certificate(&ctx, &probes).is_confirmed(), "imp");
        // uniform intersections stay certified through the shared witness
        let shared = ctx.inject(&ctx.kit.d3);
        let inter = big_meet_cells(&ctx, "inter", &[f, g], &shared);
        assert!(inter.check_certificate(&ctx, &probes).is_confirmed(), "meet-family");
    }

    #[test]
    fn inf_shrinks_as_probes_grow() {
        let (ctx, probes) = setup();
        let n1 = TruthValue::singleton(ctx.backend.numeral(1));
        let f = mu(&ctx, 1, "f", Rc::new(move |_| n1.clone()));
        let wide = probes.with_extra(vec![(
            "num3".to_string(),
            TruthValue::singleton(ctx.backend.numeral(3)),
        )]);
        let small = inf_op(&f, &probes)(0);
        let large = inf_op(&f, &wide)(0);
        // everything observed in the wider intersection is in the smaller
        for cand in large.samples(&ctx).into_iter().chain(small.samples(&ctx)) {
            if large.membership(&ctx, &cand) == crate::comb::Tri::Yes {
                assert_ne!(small.membership(&ctx, &cand), crate::comb::Tri::No);
            }
        }
    }

    #[test]
    fn q_contains_identity() {
        let (ctx, probes) = setup();
        let q = q_set(&probes);
        let std = ctx.backend.std_elements();
        assert_eq!(q.membership(&ctx, &std.i), Tri::Yes);
    }

    #[test]
    fn s5_classification_of_f0_f1() {
        let (ctx, probes) = setup();
        // f0 = top everywhere: M empty; f1 = (top => D): M inhabited
        let f0 = ModalTruth::new(
            1,
            "f0",
            ctx.backend.std_elements().i,
            Rc::new(|_, _| TruthValue::top()),
        );
        let f1 = ModalTruth::new(
            1,
            "f1",
            ctx.backend.std_elements().i,
            Rc::new(|_, d| TruthValue::imp(&TruthValue::top(), d)),
        );
        let a0 = s5_analysis(&ctx, &f0, &probes);
        assert_eq!(a0.m_f_observation[0], BotObservation::EmptyObserved);
        let a1 = s5_analysis(&ctx, &f1, &probes);
        assert!(matches!(
            a1.m_f_observation[0],
            BotObservation::Inhabited(_)
        ));
    }

    #[test]
    fn s5_refuter_kills_identity_and_constants() {
        let (ctx, _) = setup();
        let std = crate::comb::StdTerms::new();
        let cands = vec![
            crate::comb::ski_i(),
            crate::comb::app(crate::comb::k(), crate::comb::app(crate::comb::k(), crate::comb::numeral(0, &std))),
        ];
        for rec in s5_refuter(&ctx, &cands) {
            assert!(rec.verdict.is_refuted(), "{} not refuted", rec.candidate);
        }
    }

    #[test]
    fn singleton_s5_both_cases() {
        let (ctx, probes) = setup();
        // case M_f empty: f = mu(top)
        let f = mu(&ctx, 1, "top", Rc::new(|_| TruthValue::top()));
        let v = singleton_s5_check(&ctx, &f, &S5Evidence::MfEmpty, &probes);
        assert!(v.is_confirmed(), "{v}");
        // case f == bot-pi: f = mu(bot), witness: identity maps O_D bot to
        // O_D bot
        let fb = mu(&ctx, 1, "bot", Rc::new(|_| TruthValue::bot()));
        let v = singleton_s5_check(
            &ctx,
            &fb,
            &S5Evidence::BotPiEquivalent {
                to_botpi: ctx.backend.std_elements().i,
            },
            &probes,
        );
        assert!(v.is_confirmed(), "{v}");
    }
}
