//! The truncated hereditary-set model: finite-support elements labeled by
//! pca elements, realizability-valued membership and equality, the
//! recursion-theorem witness pack, set numerals and coded subsets of omega,
//! the axiom-instance witnesses, and the negated-atomic-stability refuter.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::backend::{AppResult, Element};
use crate::comb::{app, apps, bracket_open, fixpoint, var, Term, Tri};
use crate::heyting::{Ctx, TruthValue, TvCustom, Verdict};
use crate::semantics::{Signature, Structure, WitnessPack};

/// Finite-support hereditary element: entries pair a pca label with a child.
#[derive(Clone)]
pub struct SetElem(Rc<SetNode>);

struct SetNode {
    name: String,
    entries: Vec<(Element, SetElem)>,
    rank: usize,
}

impl SetElem {
    pub fn new(name: &str, entries: Vec<(Element, SetElem)>) -> SetElem {
        let rank = entries
            .iter()
            .map(|(_, c)| c.rank() + 1)
            .max()
            .unwrap_or(0);
        SetElem(Rc::new(SetNode {
            name: name.to_string(),
            entries,
            rank,
        }))
    }

    pub fn empty() -> SetElem {
        SetElem::new("{}", Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn entries(&self) -> &[(Element, SetElem)] {
        &self.0.entries
    }

    fn ptr_eq(&self, other: &SetElem) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }
}

impl std::fmt::Display for SetElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0.name)
    }
}

/// `||a in b||`: members are pairs whose label matches an entry of `b` and
/// whose second component realizes the equality with that entry's child.
struct SetMem {
    a: SetElem,
    b: SetElem,
}

impl TvCustom for SetMem {
    fn membership(&self, ctx: &Ctx, e: &Element) -> Tri {
        let be = &ctx.backend;
        let std = be.std_elements();
        let (l, r) = match (be.apply(&std.p0, e), be.apply(&std.p1, e)) {
            (AppResult::Defined(l), AppResult::Defined(r)) => (l, r),
            _ => return Tri::Unknown,
        };
        let mut out = Tri::No;
        for (label, child) in self.b.entries() {
            match be.eq(&l, label) {
                Tri::Yes => {
                    let eq = set_eq(&self.a, child);
                    match eq.membership(ctx, &r) {
                        Tri::Yes => return Tri::Yes,
                        Tri::Unknown => out = Tri::Unknown,
                        Tri::No => {}
                    }
                }
                Tri::Unknown => out = Tri::Unknown,
                Tri::No => {}
            }
        }
        out
    }

    fn samples(&self, ctx: &Ctx) -> Vec<Element> {
        let be = &ctx.backend;
        let std = be.std_elements();
        let mut out = Vec::new();
        for (label, child) in self.b.entries() {
            if out.len() >= ctx.samples {
                break;
            }
            if structurally_equal(&self.a, child) {
                if let Some(eqw) = set_eq(&self.a, child).samples(ctx).first() {
                    if let AppResult::Defined(pw) =
                        be.apply_all(&std.p, &[label.clone(), eqw.clone()])
                    {
                        out.push(pw);
                    }
                }
            }
        }
        out
    }

    fn label(&self) -> String {
        format!("mem({},{})", self.a, self.b)
    }
}

/// `||a = b||`: pairs mapping entry labels of each side into membership in
/// the other.
struct SetEq {
    a: SetElem,
    b: SetElem,
}

impl TvCustom for SetEq {
    fn membership(&self, ctx: &Ctx, e: &Element) -> Tri {
        let be = &ctx.backend;
        let std = be.std_elements();
        let (l, r) = match (be.apply(&std.p0, e), be.apply(&std.p1, e)) {
            (AppResult::Defined(l), AppResult::Defined(r)) => (l, r),
            _ => return Tri::Unknown,
        };
        let mut out = Tri::Yes;
        for (label, child) in self.a.entries() {
            let img = match be.apply(&l, label) {
                AppResult::Defined(v) => v,
                AppResult::FuelExhausted => return Tri::Unknown,
            };
            match set_mem(child, &self.b).membership(ctx, &img) {
                Tri::No => return Tri::No,
                Tri::Unknown => out = Tri::Unknown,
                Tri::Yes => {}
            }
        }
        for (label, child) in self.b.entries() {
            let img = match be.apply(&r, label) {
                AppResult::Defined(v) => v,
                AppResult::FuelExhausted => return Tri::Unknown,
            };
            match set_mem(child, &self.a).membership(ctx, &img) {
                Tri::No => return Tri::No,
                Tri::Unknown => out = Tri::Unknown,
                Tri::Yes => {}
            }
        }
        out
    }

    fn samples(&self, ctx: &Ctx) -> Vec<Element> {
        if structurally_equal(&self.a, &self.b) {
            vec![reflexivity_element(ctx)]
        } else {
            Vec::new()
        }
    }

    fn label(&self) -> String {
        format!("eq({},{})", self.a, self.b)
    }
}

pub fn set_mem(a: &SetElem, b: &SetElem) -> TruthValue {
    TruthValue::custom(Rc::new(SetMem {
        a: a.clone(),
        b: b.clone(),
    }))
}

pub fn set_eq(a: &SetElem, b: &SetElem) -> TruthValue {
    TruthValue::custom(Rc::new(SetEq {
        a: a.clone(),
        b: b.clone(),
    }))
}

/// Structural identity of hereditary sets (labels by canonical term
/// equality would be overkill; construction shares nodes).
fn structurally_equal(a: &SetElem, b: &SetElem) -> bool {
    if a.ptr_eq(b) {
        return true;
    }
    if a.entries().len() != b.entries().len() {
        return false;
    }
    a.entries()
        .iter()
        .zip(b.entries().iter())
        .all(|((_, c1), (_, c2))| structurally_equal(c1, c2))
}

/// Exact emptiness of the valuation sets, by the finite-support recursion:
/// `||a=b||` is empty iff some entry's membership set across is empty;
/// `||a in b||` is empty iff every entry clashes.
pub fn eq_is_empty(a: &SetElem, b: &SetElem) -> bool {
    a.entries().iter().any(|(_, c)| mem_is_empty(c, b))
        || b.entries().iter().any(|(_, c)| mem_is_empty(c, a))
}

pub fn mem_is_empty(a: &SetElem, b: &SetElem) -> bool {
    b.entries().iter().all(|(_, c)| eq_is_empty(a, c))
}

/// The reflexivity core: `j n = p n (p j j)`, so `p j j` realizes `a = a`
/// for every element.
fn reflexivity_term(ctx: &Ctx) -> Term {
    let std = &ctx.kit.std;
    let body = apps(
        std.p.clone(),
        &[
            var("n"),
            apps(std.p.clone(), &[var("self"), var("self")]),
        ],
    );
    let f = bracket_open(&body, &["self", "n"]);
    let mut fuel = 1_000_000;
    let j = fixpoint(&f, &mut fuel).expect("reflexivity fixpoint");
    apps(std.p.clone(), &[j.clone(), j])
}

pub fn reflexivity_element(ctx: &Ctx) -> Element {
    ctx.inject(&reflexivity_term(ctx))
}

/// The recursion-theorem witness pack.
pub struct SetWitnessPack {
    /// constant function onto the reflexivity pair: `top ~> ||a=a||`
    pub rho: Element,
    /// pair swap: symmetry
    pub sigma: Element,
    /// transitivity
    pub tau: Element,
    /// indiscernibility, taking the pack `p eq_aa' (p eq_bb' mem_ab)`
    pub iota: Element,
    pub rho_term: Term,
    pub sigma_term: Term,
    pub tau_term: Term,
    pub iota_term: Term,
}

fn sigma_term(ctx: &Ctx) -> Term {
    let std = &ctx.kit.std;
    bracket_open(
        &apps(
            std.p.clone(),
            &[
                app(std.p1.clone(), var("t")),
                app(std.p0.clone(), var("t")),
            ],
        ),
        &["t"],
    )
}

/// Transitivity: both components chase entries through the two equality
/// realizers and recurse.
fn tau_term(ctx: &Ctx) -> Term {
    let std = &ctx.kit.std;
    let p = std.p.clone();
    let p0 = std.p0.clone();
    let p1 = std.p1.clone();
    // w = p (p e0 e1) (p e0* e1*)
    let e0 = app(p0.clone(), app(p0.clone(), var("w")));
    let e1 = app(p1.clone(), app(p0.clone(), var("w")));
    let e0s = app(p0.clone(), app(p1.clone(), var("w")));
    let e1s = app(p1.clone(), app(p1.clone(), var("w")));
    // component 0: n |-> p (p0 (e0* (p0 (e0 n)))) (self (p (p1 (e0 n)) (p1 (e0* (p0 (e0 n))))))
    let e0n = app(e0.clone(), var("n"));
    let e0sn = app(e0s.clone(), app(p0.clone(), e0n.clone()));
    let comp0 = bracket_open(
        &apps(
            p.clone(),
            &[
                app(p0.clone(), e0sn.clone()),
                apps(
                    var("self"),
                    &[apps(
                        p.clone(),
                        &[app(p1.clone(), e0n), app(p1.clone(), e0sn)],
                    )],
                ),
            ],
        ),
        &["n"],
    );
    // component 1: n |-> p (p0 (e1 (p0 (e1* n)))) (self (p (p1 (e1* n)) (p1 (e1 (p0 (e1* n))))))
    let e1sn = app(e1s.clone(), var("n"));
    let e1m = app(e1.clone(), app(p0.clone(), e1sn.clone()));
    let comp1 = bracket_open(
        &apps(
            p.clone(),
            &[
                app(p0.clone(), e1m.clone()),
                apps(
                    var("self"),
                    &[apps(
                        p.clone(),
                        &[app(p1.clone(), e1sn), app(p1.clone(), e1m)],
                    )],
                ),
            ],
        ),
        &["n"],
    );
    let body = apps(p.clone(), &[comp0, comp1]);
    let f = bracket_open(&body, &["self", "w"]);
    let mut fuel = 4_000_000;
    fixpoint(&f, &mut fuel).expect("transitivity fixpoint")
}

/// Indiscernibility over the right-nested pack `p eq_aa' (p eq_bb' mem_ab)`.
fn iota_term(ctx: &Ctx, tau: &Term, sigma: &Term) -> Term {
    let std = &ctx.kit.std;
    let p = std.p.clone();
    let p0 = std.p0.clone();
    let p1 = std.p1.clone();
    let eq_aap = app(p0.clone(), var("c"));
    let eq_bbp = app(p0.clone(), app(p1.clone(), var("c")));
    let mem = app(p1.clone(), app(p1.clone(), var("c")));
    let e0p = app(p0.clone(), mem.clone());
    let e1p = app(p1.clone(), mem);
    // a' = c-child chase: tau (p (sigma eq_aa') e1') : ||a' = child||
    let i0 = app(
        tau.clone(),
        apps(p.clone(), &[app(sigma.clone(), eq_aap), e1p]),
    );
    // b-side: e0* = p0 eq_bb' maps b's entries into membership in b'
    let e0s = app(p0.clone(), eq_bbp);
    let hop = app(e0s, e0p);
    let result = apps(
        p.clone(),
        &[
            app(p0.clone(), hop.clone()),
            app(
                tau.clone(),
                apps(p.clone(), &[i0, app(p1.clone(), hop)]),
            ),
        ],
    );
    bracket_open(&result, &["c"])
}

pub fn set_witness_pack(ctx: &Ctx) -> SetWitnessPack {
    let refl = reflexivity_term(ctx);
    let rho = app(crate::comb::k(), refl);
    let sigma = sigma_term(ctx);
    let tau = tau_term(ctx);
    let iota = iota_term(ctx, &tau, &sigma);
    SetWitnessPack {
        rho: ctx.inject(&rho),
        sigma: ctx.inject(&sigma),
        tau: ctx.inject(&tau),
        iota: ctx.inject(&iota),
        rho_term: rho,
        sigma_term: sigma,
        tau_term: tau,
        iota_term: iota,
    }
}

/// Set numerals and the cutoff-bounded set of naturals.
pub struct SetNumerals {
    pub numerals: Vec<SetElem>,
    pub omega: SetElem,
}

pub fn set_numerals(cutoff: usize, ctx: &Ctx) -> SetNumerals {
    let be = &ctx.backend;
    let mut numerals: Vec<SetElem> = Vec::new();
    for n in 0..=cutoff {
        let entries = (0..n)
            .map(|m| (be.numeral(m as u64), numerals[m].clone()))
            .collect();
        numerals.push(SetElem::new(&format!("o{n}"), entries));
    }
    let omega = SetElem::new(
        "omega",
        (0..cutoff)
            .map(|m| (be.numeral(m as u64), numerals[m].clone()))
            .collect(),
    );
    SetNumerals { numerals, omega }
}

/// The coded subset: entries `<p numeral(n) chi_X(n), o_n>`.
pub fn coded_subset(xs: &[u64], cutoff: usize, nums: &SetNumerals, ctx: &Ctx) -> SetElem {
    let be = &ctx.backend;
    let std = be.std_elements();
    let entries = (0..cutoff)
        .map(|n| {
            let tag = if xs.contains(&(n as u64)) {
                std.k.clone()
            } else {
                std.kbar.clone()
            };
            let label = be
                .apply_all(&std.p, &[be.numeral(n as u64), tag])
                .defined()
                .expect("pair total");
            (label, nums.numerals[n].clone())
        })
        .collect();
    SetElem::new(&format!("X{xs:?}"), entries)
}

/// The set-theoretic structure for the harness: a curated finite domain,
/// classical quantifier, membership relation.
pub fn set_structure(domain: Vec<SetElem>, pack: &SetWitnessPack, ctx: &Ctx) -> Structure {
    let sig = Signature {
        sorts: vec!["Set".to_string()],
        consts: domain
            .iter()
            .map(|e| (e.name().to_string(), 0))
            .collect(),
        funcs: Vec::new(),
        rels: vec![("in".to_string(), vec![0, 0])],
    };
    let names: Vec<String> = domain.iter().map(|e| e.name().to_string()).collect();
    let consts: BTreeMap<String, (usize, usize)> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), (0usize, i)))
        .collect();
    let dom_eq = domain.clone();
    let eq_val: crate::semantics::EqVal =
        Rc::new(move |_s, a, b| set_eq(&dom_eq[a], &dom_eq[b]));
    let dom_mem = domain.clone();
    let mut rel_val: BTreeMap<String, crate::semantics::RelVal> = BTreeMap::new();
    rel_val.insert(
        "in".to_string(),
        Rc::new(move |args: &[usize]| set_mem(&dom_mem[args[0]], &dom_mem[args[1]])),
    );
    // classical quantifier
    let quantifier: crate::semantics::QuantVal = Rc::new(|_s, _c| TruthValue::top());
    let mut e_rel = BTreeMap::new();
    e_rel.insert("in".to_string(), pack.iota_term.clone());
    let wpack = WitnessPack {
        e_ref1: ctx.kit.std.i.clone(),
        e_ref2: pack.rho_term.clone(),
        e_sym: pack.sigma_term.clone(),
        e_tran: pack.tau_term.clone(),
        e_rel,
        e_fun: BTreeMap::new(),
        e_term_friendly: BTreeMap::new(),
    };
    let cutoff = domain.len();
    Structure {
        name: "set".to_string(),
        sig,
        domains: vec![names],
        consts,
        funcs: BTreeMap::new(),
        eq_val,
        rel_val,
        quantifier,
        pack: wpack,
        cutoff,
    }
}

pub struct AxiomCheck {
    pub axiom: String,
    pub verdict: Verdict,
}

/// The axiom-instance witnesses of the appendix, checked on small-rank
/// instances.
pub fn set_axiom_witnesses(
    nums: &SetNumerals,
    pack: &SetWitnessPack,
    ctx: &Ctx,
) -> Vec<AxiomCheck> {
    let be = &ctx.backend;
    let std = be.std_elements();
    let kit = &ctx.kit;
    let refl = reflexivity_element(ctx);
    let mut out = Vec::new();

    // Extensionality: f e n = e (p n i0); h (p e0 e1) = p (f e0) (f e1)
    {
        let f = bracket_open(
            &app(
                var("e"),
                apps(kit.std.p.clone(), &[var("n"), term_of_elem(&refl)]),
            ),
            &["e", "n"],
        );
        let h = bracket_open(
            &apps(
                kit.std.p.clone(),
                &[
                    apps(f.clone(), &[app(kit.std.p0.clone(), var("c"))]),
                    apps(f.clone(), &[app(kit.std.p1.clone(), var("c"))]),
                ],
            ),
            &["c"],
        );
        let h = ctx.inject(&h);
        // instance: a = o2, b = o2; the both-ways inclusion realizer is
        // built from identity maps on memberships
        let a = &nums.numerals[2];
        let subset = |_x: &SetElem, _y: &SetElem| {
            // e : ||c in x|| ~> ||c in y|| for x = y = o2: identity
            std.i.clone()
        };
        let e0 = subset(a, a);
        let e1 = subset(a, a);
        let packed = be
            .apply_all(&std.p, &[e0, e1])
            .defined()
            .unwrap();
        let v = match be.apply(&h, &packed) {
            AppResult::Defined(w) => {
                if set_eq(a, a).membership(ctx, &w) != Tri::No {
                    Verdict::Confirmed
                } else {
                    Verdict::Refuted {
                        counterexample: w,
                        context: "extensionality image outside equality".to_string(),
                    }
                }
            }
            _ => Verdict::Inconclusive {
                reason: "diverged".to_string(),
            },
        };
        out.push(AxiomCheck {
            axiom: "extensionality".to_string(),
            verdict: v,
        });
    }

    // Pairing: c = {<e0,a>, <e0,b>}; h n = p (p e0 i0) (p e0 i0)
    {
        let a = &nums.numerals[1];
        let b = &nums.numerals[2];
        let e0 = std.k.clone();
        let c = SetElem::new("pair(o1,o2)", vec![(e0.clone(), a.clone()), (e0.clone(), b.clone())]);
        let w = be
            .apply_all(&std.p, &[e0.clone(), refl.clone()])
            .defined()
            .unwrap();
        let in_a = set_mem(a, &c).membership(ctx, &w);
        let w2 = be
            .apply_all(&std.p, &[e0, refl.clone()])
            .defined()
            .unwrap();
        let in_b = set_mem(b, &c).membership(ctx, &w2);
        let v = if in_a == Tri::Yes && in_b == Tri::Yes {
            Verdict::Confirmed
        } else {
            Verdict::Inconclusive {
                reason: format!("memberships {in_a:?}/{in_b:?}"),
            }
        };
        out.push(AxiomCheck {
            axiom: "pairing".to_string(),
            verdict: v,
        });
    }

    // Union: u = {<n, c>} for sampled realizers n of exists x (c in x & x in a)
    {
        let a = SetElem::new(
            "a2",
            vec![
                (std.k.clone(), nums.numerals[1].clone()),
                (std.kbar.clone(), nums.numerals[2].clone()),
            ],
        );
        // c = o0, x = o1 (or o2): exists-value sampled as p memcx memxa
        let c = &nums.numerals[0];
        let mut u_entries = Vec::new();
        let mut witnesses = Vec::new();
        for (label, x) in a.entries() {
            let memcx = set_mem(c, x);
            let memxa = set_mem(x, &a);
            let Some(w1) = memcx.samples(ctx).first().cloned() else {
                continue;
            };
            let w2 = be
                .apply_all(&std.p, &[label.clone(), refl.clone()])
                .defined()
                .unwrap();
            if memxa.membership(ctx, &w2) != Tri::Yes {
                continue;
            }
            let n = be
                .apply_all(&std.p, &[w1, w2])
                .defined()
                .unwrap();
            u_entries.push((n.clone(), c.clone()));
            witnesses.push(n);
        }
        let u = SetElem::new("union(a2)", u_entries);
        // f n = p n i0
        let f = bracket_open(
            &apps(kit.std.p.clone(), &[var("n"), term_of_elem(&refl)]),
            &["n"],
        );
        let f = ctx.inject(&f);
        let mut v = Verdict::Confirmed;
        if witnesses.is_empty() {
            v = Verdict::Inconclusive {
                reason: "no existence realizers sampled".to_string(),
            };
        }
        for n in witnesses {
            match be.apply(&f, &n) {
                AppResult::Defined(w) => {
                    if set_mem(c, &u).membership(ctx, &w) == Tri::No {
                        v = Verdict::Refuted {
                            counterexample: w,
                            context: "union image rejected".to_string(),
                        };
                        break;
                    }
                }
                _ => {
                    v = Verdict::Inconclusive {
                        reason: "union witness diverged".to_string(),
                    }
                }
            }
        }
        out.push(AxiomCheck {
            axiom: "union".to_string(),
            verdict: v,
        });
    }

    // Power set: pw(a) entries labeled by sampled subset realizers
    {
        let _a = &nums.numerals[1]; // {o0}
        // candidate subsets: {} and {o0} = o1
        let cands = [nums.numerals[0].clone(), nums.numerals[1].clone()];
        let mut entries = Vec::new();
        let mut tested = Vec::new();
        for cand in &cands {
            // subset realizer: maps ||x in cand|| to ||x in a||; for these
            // instances the identity works (cand's entries are entries of a)
            let n = std.i.clone();
            entries.push((n.clone(), cand.clone()));
            tested.push((n, cand.clone()));
        }
        let pw = SetElem::new("pow(o1)", entries);
        let f = bracket_open(
            &apps(kit.std.p.clone(), &[var("n"), term_of_elem(&refl)]),
            &["n"],
        );
        let f = ctx.inject(&f);
        let mut v = Verdict::Confirmed;
        for (n, cand) in tested {
            match be.apply(&f, &n) {
                AppResult::Defined(w) => {
                    if set_mem(&cand, &pw).membership(ctx, &w) == Tri::No {
                        v = Verdict::Refuted {
                            counterexample: w,
                            context: "power-set image rejected".to_string(),
                        };
                        break;
                    }
                }
                _ => {
                    v = Verdict::Inconclusive {
                        reason: "power-set witness diverged".to_string(),
                    }
                }
            }
        }
        out.push(AxiomCheck {
            axiom: "power-set".to_string(),
            verdict: v,
        });
    }

    // Separation on `x = x` over a = o2: b collects the realized entries
    {
        let a = &nums.numerals[2];
        let mut entries = Vec::new();
        for (label, child) in a.entries() {
            // e0 in ||d in a & phi(d)||: pair of membership and phi-realizer
            let mem_w = be
                .apply_all(&std.p, &[label.clone(), refl.clone()])
                .defined()
                .unwrap();
            let phi_w = refl.clone();
            let e0 = be
                .apply_all(&std.p, &[mem_w, phi_w])
                .defined()
                .unwrap();
            entries.push((e0, child.clone()));
        }
        let b = SetElem::new("sep(o2)", entries.clone());
        let f = bracket_open(
            &apps(kit.std.p.clone(), &[var("n"), term_of_elem(&refl)]),
            &["n"],
        );
        let f = ctx.inject(&f);
        let mut v = Verdict::Confirmed;
        for (e0, child) in entries {
            match be.apply(&f, &e0) {
                AppResult::Defined(w) => {
                    if set_mem(&child, &b).membership(ctx, &w) == Tri::No {
                        v = Verdict::Refuted {
                            counterexample: w,
                            context: "separation image rejected".to_string(),
                        };
                        break;
                    }
                }
                _ => {
                    v = Verdict::Inconclusive {
                        reason: "separation witness diverged".to_string(),
                    }
                }
            }
        }
        out.push(AxiomCheck {
            axiom: "separation".to_string(),
            verdict: v,
        });
    }

    // Infinity: e' = p 0~ i0 lands in ||o0 in omega||, and the recursion
    // step sends each membership realizer to the successor's pair
    {
        let w = be
            .apply_all(&std.p, &[be.numeral(0), refl.clone()])
            .defined()
            .unwrap();
        let base = set_mem(&nums.numerals[0], &nums.omega).membership(ctx, &w);
        let e_step = infinity_step_witness(pack, ctx);
        let mut step_ok = true;
        for n in 0..nums.numerals.len().saturating_sub(2).min(3) {
            let arg = be
                .apply_all(&std.p, &[be.numeral(n as u64), refl.clone()])
                .defined()
                .unwrap();
            let Some(r) = be.apply(&e_step, &arg).defined() else {
                step_ok = false;
                break;
            };
            let Some(in_succ) = be.apply(&std.p0, &r).defined() else {
                step_ok = false;
                break;
            };
            let Some(succ_in_omega) = be.apply(&std.p1, &r).defined() else {
                step_ok = false;
                break;
            };
            if set_mem(&nums.numerals[n], &nums.numerals[n + 1]).membership(ctx, &in_succ)
                == Tri::No
            {
                step_ok = false;
            }
            if set_mem(&nums.numerals[n + 1], &nums.omega).membership(ctx, &succ_in_omega)
                == Tri::No
            {
                step_ok = false;
            }
        }
        let v = if base == Tri::Yes && step_ok {
            Verdict::Confirmed
        } else {
            Verdict::Inconclusive {
                reason: format!("base {base:?}, step {step_ok}"),
            }
        };
        out.push(AxiomCheck {
            axiom: "infinity".to_string(),
            verdict: v,
        });
    }

    // Induction on phi(x) = (x = x): e m = m k0 (e m), with k0 the
    // weakening witness
    {
        // k0 : ||phi(b)|| ~> (||b in a|| => ||phi(b)||), i.e. currying of
        // the second projection
        let k0 = ctx.inject(&app(kit.std.k.clone(), kit.std.k.clone()));
        // e = fix(\self m. m k0 (self m))
        let body = apps(
            var("m"),
            &[term_of_elem(&k0), apps(var("self"), &[var("m")])],
        );
        let f = bracket_open(&body, &["self", "m"]);
        let mut fuel = 1_000_000;
        let e = ctx.inject(&fixpoint(&f, &mut fuel).expect("induction fixpoint"));
        // m : realizer of (forall y in x phi(y)) => phi(x), uniformly:
        // here: anything mapping arguments to a reflexivity element
        let m = be
            .apply(&std.k, &be.apply(&std.k, &refl).defined().unwrap())
            .defined()
            .unwrap();
        let mut v = Verdict::Confirmed;
        for target in nums.numerals.iter().take(3) {
            match be.apply(&e, &m) {
                AppResult::Defined(w) => {
                    if set_eq(target, target).membership(ctx, &w) == Tri::No {
                        v = Verdict::Refuted {
                            counterexample: w,
                            context: format!("induction value outside eq({target},{target})"),
                        };
                        break;
                    }
                }
                _ => {
                    v = Verdict::Inconclusive {
                        reason: "induction witness diverged".to_string(),
                    }
                }
            }
        }
        out.push(AxiomCheck {
            axiom: "induction".to_string(),
            verdict: v,
        });
    }

    let _ = pack;
    out
}

fn term_of_elem(e: &Element) -> Term {
    match e {
        Element::Term(t) => t.clone(),
        _ => panic!("set model runs on the term backend"),
    }
}

/// The weakening witness used by infinity and induction:
/// `(u in v  and  u = w) => (w in v)`, from the indiscernibility element.
pub fn k0_witness(pack: &SetWitnessPack, ctx: &Ctx) -> Term {
    let std = &ctx.kit.std;
    let refl = reflexivity_term(ctx);
    // t = p mem_uv eq_uw; the indiscernibility pack wants
    // p eq_uw (p eq_vv mem_uv)
    bracket_open(
        &app(
            pack.iota_term.clone(),
            apps(
                std.p.clone(),
                &[
                    app(std.p1.clone(), var("t")),
                    apps(
                        std.p.clone(),
                        &[refl, app(std.p0.clone(), var("t"))],
                    ),
                ],
            ),
        ),
        &["t"],
    )
}

/// The successor step of the infinity verification: from a membership
/// realizer `p numeral(n) e1` produce the pair of a realizer for
/// `c in o_{n+1}` and one for `o_{n+1} in omega`.
pub fn infinity_step_witness(pack: &SetWitnessPack, ctx: &Ctx) -> Element {
    let std = &ctx.kit.std;
    let refl = reflexivity_term(ctx);
    let k0 = k0_witness(pack, ctx);
    let succ = bracket_open(
        &apps(std.p.clone(), &[std.kbar.clone(), var("n")]),
        &["n"],
    );
    // t |-> p (k0 (p (p (p0 t) i0) (p1 t))) (p (succ (p0 t)) i0)
    let t = bracket_open(
        &apps(
            std.p.clone(),
            &[
                app(
                    k0,
                    apps(
                        std.p.clone(),
                        &[
                            apps(
                                std.p.clone(),
                                &[app(std.p0.clone(), var("t")), refl.clone()],
                            ),
                            app(std.p1.clone(), var("t")),
                        ],
                    ),
                ),
                apps(
                    std.p.clone(),
                    &[app(succ, app(std.p0.clone(), var("t"))), refl],
                ),
            ],
        ),
        &["t"],
    );
    ctx.inject(&t)
}

/// Replay the negated-atomic instability argument per candidate: a uniform
/// stability witness pins `p0 (p0 (e i))` to every numeral label at once.
pub fn negated_atomic_refuter(
    candidates: &[Term],
    ctx: &Ctx,
) -> Vec<(Term, Verdict)> {
    let be = &ctx.backend;
    let std = be.std_elements();
    let mut out = Vec::new();
    for cand in candidates {
        let e = be.inject(cand);
        let fuel2 = be.params.fuel.saturating_mul(2);
        let r = (|| {
            let a = be.apply_fuel(&e, &std.i, fuel2).defined()?;
            let b = be.apply_fuel(&std.p0, &a, fuel2).defined()?;
            be.apply_fuel(&std.p0, &b, fuel2).defined()
        })();
        let verdict = match r {
            None => Verdict::Refuted {
                counterexample: std.i.clone(),
                context: "p0 (p0 (e i)) diverged at doubled fuel".to_string(),
            },
            Some(v) => {
                let n0 = be.numeral(0);
                let n1 = be.numeral(1);
                match (be.eq(&v, &n0), be.eq(&v, &n1)) {
                    (Tri::Yes, _) => Verdict::Refuted {
                        counterexample: v,
                        context: "pinned to numeral 0, missing numeral 1".to_string(),
                    },
                    (_, Tri::Yes) => Verdict::Refuted {
                        counterexample: v,
                        context: "pinned to numeral 1, missing numeral 0".to_string(),
                    },
                    (Tri::No, Tri::No) => Verdict::Refuted {
                        counterexample: v,
                        context: "not a numeral label at all".to_string(),
                    },
                    _ => Verdict::Inconclusive {
                        reason: "equality fuel-limited".to_string(),
                    },
                }
            }
        };
        out.push((cand.clone(), verdict));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Backend;
    use crate::comb::closed_terms;
    use crate::heyting::check_reduction;

    fn setup() -> (Ctx, SetNumerals, SetWitnessPack) {
        let ctx = Ctx::new(Backend::term_model());
        let nums = set_numerals(6, &ctx);
        let pack = set_witness_pack(&ctx);
        (ctx, nums, pack)
    }

    #[test]
    fn numeral_order_table() {
        let (ctx, nums, _) = setup();
        for n in 0..=5usize {
            for m in 0..=5usize {
                let mem_empty = mem_is_empty(&nums.numerals[n], &nums.numerals[m]);
                assert_eq!(mem_empty, !(n < m), "mem({n},{m})");
                let eq_empty = eq_is_empty(&nums.numerals[n], &nums.numerals[m]);
                assert_eq!(eq_empty, n != m, "eq({n},{m})");
            }
        }
        // positive witnesses: p numeral(n) refl is in ||o_n in o_m|| for n<m
        let be = &ctx.backend;
        let std = be.std_elements();
        let refl = reflexivity_element(&ctx);
        for n in 0..3usize {
            for m in (n + 1)..4usize {
                let w = be
                    .apply_all(&std.p, &[be.numeral(n as u64), refl.clone()])
                    .defined()
                    .unwrap();
                assert_eq!(
                    set_mem(&nums.numerals[n], &nums.numerals[m]).membership(&ctx, &w),
                    Tri::Yes,
                    "witness for {n} in {m}"
                );
            }
        }
    }

    #[test]
    fn reflexivity_realizer_works() {
        let (ctx, nums, _) = setup();
        let refl = reflexivity_element(&ctx);
        for n in 0..4usize {
            assert_ne!(
                set_eq(&nums.numerals[n], &nums.numerals[n]).membership(&ctx, &refl),
                Tri::No,
                "refl at {n}"
            );
        }
    }

    #[test]
    fn rho_sigma_tau_iota() {
        let (ctx, nums, pack) = setup();
        let be = &ctx.backend;
        // rho: top ~> ||a=a|| up to rank 3
        for n in 0..4usize {
            let v = check_reduction(
                &ctx,
                &pack.rho,
                &TruthValue::top(),
                &set_eq(&nums.numerals[n], &nums.numerals[n]),
            );
            assert!(!v.is_refuted(), "rho at {n}: {v}");
        }
        // sigma swaps
        let refl = reflexivity_element(&ctx);
        let std = be.std_elements();
        let e01 = be
            .apply_all(&std.p, &[std.i.clone(), std.k.clone()])
            .defined()
            .unwrap();
        let swapped = be.apply(&pack.sigma, &e01).defined().unwrap();
        let l = be.apply(&std.p0, &swapped).defined().unwrap();
        assert_eq!(be.eq(&l, &std.k), Tri::Yes);
        // tau: ||a=b|| & ||b=c|| ~> ||a=c|| on equal numerals
        for n in 0..3usize {
            let a = &nums.numerals[n];
            let w = be
                .apply_all(&std.p, &[refl.clone(), refl.clone()])
                .defined()
                .unwrap();
            let img = be.apply(&pack.tau, &w).defined().unwrap();
            assert_ne!(
                set_eq(a, a).membership(&ctx, &img),
                Tri::No,
                "tau at {n}"
            );
        }
        // iota on a concrete rank-2 instance:
        // ||a=a'|| & ||b=b'|| & ||a in b|| ~> ||a' in b'||
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
        let img = be.apply(&pack.iota, &packc).defined().unwrap();
        assert_ne!(
            set_mem(a, b).membership(&ctx, &img),
            Tri::No,
            "iota image rejected"
        );
    }

    #[test]
    fn coded_subset_membership() {
        let (ctx, nums, _) = setup();
        let be = &ctx.backend;
        let std = be.std_elements();
        let refl = reflexivity_element(&ctx);
        let x = coded_subset(&[0, 2, 4], 6, &nums, &ctx);
        // ||o_n in X|| is nonempty for every n: p (p n~ chi) refl
        for n in 0..5u64 {
            let tag = if [0, 2, 4].contains(&n) {
                std.k.clone()
            } else {
                std.kbar.clone()
            };
            let label = be
                .apply_all(&std.p, &[be.numeral(n), tag])
                .defined()
                .unwrap();
            let w = be
                .apply_all(&std.p, &[label, refl.clone()])
                .defined()
                .unwrap();
            assert_eq!(
                set_mem(&nums.numerals[n as usize], &x).membership(&ctx, &w),
                Tri::Yes,
                "o{n} in X"
            );
        }
    }

    #[test]
    fn axiom_witnesses_confirmed() {
        let (ctx, nums, pack) = setup();
        for check in set_axiom_witnesses(&nums, &pack, &ctx) {
            assert!(
                check.verdict.is_confirmed(),
                "{}: {}",
                check.axiom,
                check.verdict
            );
        }
    }

    #[test]
    fn negated_atomic_sweep() {
        let (ctx, _, _) = setup();
        let cands = closed_terms(40);
        let recs = negated_atomic_refuter(&cands, &ctx);
        assert_eq!(
            recs.iter().filter(|(_, v)| v.is_confirmed()).count(),
            0
        );
        assert!(recs.iter().filter(|(_, v)| v.is_refuted()).count() >= 38);
    }

    #[test]
    fn infinity_step_unfolds_per_defining_equations() {
        let (ctx, nums, pack) = setup();
        let be = &ctx.backend;
        let std = be.std_elements();
        let refl = reflexivity_element(&ctx);
        let e = infinity_step_witness(&pack, &ctx);
        // independent evaluator: build the defining right-hand side from
        // its components at the element level and compare canonically
        let k0 = ctx.inject(&k0_witness(&pack, &ctx));
        for n in 0..3u64 {
            let arg = be
                .apply_all(&std.p, &[be.numeral(n), refl.clone()])
                .defined()
                .unwrap();
            let got = be.apply(&e, &arg).defined().unwrap();
            let first = be
                .apply(
                    &k0,
                    &be.apply_all(
                        &std.p,
                        &[
                            be.apply_all(&std.p, &[be.numeral(n), refl.clone()])
                                .defined()
                                .unwrap(),
                            refl.clone(),
                        ],
                    )
                    .defined()
                    .unwrap(),
                )
                .defined()
                .unwrap();
            let second = be
                .apply_all(&std.p, &[be.numeral(n + 1), refl.clone()])
                .defined()
                .unwrap();
            let want = be.apply_all(&std.p, &[first, second]).defined().unwrap();
            assert_eq!(be.eq(&got, &want), Tri::Yes, "unfolding at {n}");
            // and the components land where the axiom needs them
            let p0r = be.apply(&std.p0, &got).defined().unwrap();
            assert_ne!(
                set_mem(&nums.numerals[n as usize], &nums.numerals[n as usize + 1])
                    .membership(&ctx, &p0r),
                Tri::No
            );
        }
    }

    #[test]
    fn rank_bookkeeping() {
        let (ctx, nums, _) = setup();
        // any element with nonempty membership against a rank-r set has
        // smaller rank
        for n in 0..5usize {
            for m in 0..5usize {
                if !mem_is_empty(&nums.numerals[n], &nums.numerals[m]) {
                    assert!(
                        nums.numerals[n].rank() < nums.numerals[m].rank(),
                        "rank({n}) < rank({m})"
                    );
                }
            }
        }
        let _ = ctx;
    }
}
