//! The arithmetic structure: domain omega (cutoff-bounded), disjunctive
//! equality, singleton quantifier, primitive-recursive function registry with
//! combinatory implementations on Curry numerals, the induction witness, the
//! computability-extraction pipeline with its index table, bounded-formula
//! stability machinery, and the instantiation/Barcan refutation sweeps.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::backend::Element;
use crate::comb::{app, apps, bracket_open, fixpoint, numeral, numeral_value, var, Term, Tri};
use crate::heyting::{check_reduction, Ctx, TruthValue, Verdict};
use crate::modal::ProbeFamily;
use crate::semantics::{Env, FTerm, Formula, Signature, Structure, WitnessPack};

/// Successor on Curry numerals.
fn succ_term(ctx: &Ctx) -> Term {
    let std = &ctx.kit.std;
    bracket_open(
        &apps(std.p.clone(), &[std.kbar.clone(), var("n")]),
        &["n"],
    )
}

/// Predecessor (0 at 0): dispatch on the numeral tag.
fn pred_term(ctx: &Ctx) -> Term {
    let std = &ctx.kit.std;
    bracket_open(
        &apps(
            std.iota.clone(),
            &[
                app(std.p0.clone(), var("n")),
                var("n"),
                app(std.p1.clone(), var("n")),
            ],
        ),
        &["n"],
    )
}

/// Addition by recursion on the first numeral.
fn add_term(ctx: &Ctx) -> Term {
    let std = &ctx.kit.std;
    // self a b = iota (p0 a) (k b) (k (p kbar (self (p1 a) b))) i
    // the branches are guarded behind a dummy application so the untaken
    // one is never unfolded under normal order
    let body = app(
        apps(
            std.iota.clone(),
            &[
                app(std.p0.clone(), var("a")),
                app(std.k.clone(), var("b")),
                app(
                    std.k.clone(),
                    apps(
                        std.p.clone(),
                        &[
                            std.kbar.clone(),
                            apps(var("self"), &[app(std.p1.clone(), var("a")), var("b")]),
                        ],
                    ),
                ),
            ],
        ),
        std.i.clone(),
    );
    let f = bracket_open(&body, &["self", "a", "b"]);
    let mut fuel = 1_000_000;
    fixpoint(&f, &mut fuel).expect("addition fixpoint")
}

/// Predicate tags: k for membership, kbar for non-membership.
pub fn chi(cond: bool, ctx: &Ctx) -> Term {
    if cond {
        ctx.kit.std.k.clone()
    } else {
        ctx.kit.std.kbar.clone()
    }
}

/// Named primitive-recursive registry entry: the meta-level function and
/// its combinatory implementation on numerals.
pub type NatFn = Rc<dyn Fn(&[u64]) -> u64>;

pub struct RegistryFn {
    pub name: String,
    pub arity: usize,
    pub eval: NatFn,
    pub term: Term,
}

pub fn registry(ctx: &Ctx) -> Vec<RegistryFn> {
    let add = add_term(ctx);
    let succ = succ_term(ctx);
    let double = bracket_open(
        &apps(add.clone(), &[var("n"), var("n")]),
        &["n"],
    );
    vec![
        RegistryFn {
            name: "S".to_string(),
            arity: 1,
            eval: Rc::new(|a| a[0] + 1),
            term: succ,
        },
        RegistryFn {
            name: "pred".to_string(),
            arity: 1,
            eval: Rc::new(|a| a[0].saturating_sub(1)),
            term: pred_term(ctx),
        },
        RegistryFn {
            name: "add".to_string(),
            arity: 2,
            eval: Rc::new(|a| a[0] + a[1]),
            term: add,
        },
        RegistryFn {
            name: "double".to_string(),
            arity: 1,
            eval: Rc::new(|a| 2 * a[0]),
            term: double,
        },
    ]
}

/// The arithmetic structure at a cutoff: disjunctive equality, quantifier
/// `Q(n) = {numeral n}`, `lt` as a decidable atomic.
pub fn arith_structure(cutoff: usize, ctx: &Ctx) -> Structure {
    assert!(cutoff >= 2);
    let regs = registry(ctx);
    let sig = Signature {
        sorts: vec!["Nat".to_string()],
        consts: (0..cutoff).map(|n| (n.to_string(), 0)).collect(),
        funcs: regs
            .iter()
            .map(|r| (r.name.clone(), vec![0; r.arity], 0))
            .collect(),
        rels: vec![("lt".to_string(), vec![0, 0])],
    };
    let domains = vec![(0..cutoff).map(|n| n.to_string()).collect::<Vec<_>>()];
    let consts = (0..cutoff)
        .map(|n| (n.to_string(), (0usize, n)))
        .collect::<BTreeMap<_, _>>();
    let mut funcs: BTreeMap<String, crate::semantics::FunInterp> = BTreeMap::new();
    for r in &regs {
        let f = r.eval.clone();
        let max = cutoff - 1;
        funcs.insert(
            r.name.clone(),
            Rc::new(move |args: &[usize]| {
                let vals: Vec<u64> = args.iter().map(|&a| a as u64).collect();
                (f(&vals) as usize).min(max)
            }),
        );
    }
    let eq_val: crate::semantics::EqVal = Rc::new(|_s, a, b| {
        if a == b {
            TruthValue::top()
        } else {
            TruthValue::bot()
        }
    });
    let mut rel_val: BTreeMap<String, crate::semantics::RelVal> = BTreeMap::new();
    rel_val.insert(
        "lt".to_string(),
        Rc::new(|args: &[usize]| {
            if args[0] < args[1] {
                TruthValue::top()
            } else {
                TruthValue::bot()
            }
        }),
    );
    let be = ctx.backend.clone();
    let quantifier: crate::semantics::QuantVal = Rc::new(move |_s, n| {
        TruthValue::singleton(be.numeral(n as u64))
    });
    // equality is two-valued, so identity-style elements witness everything
    // except reflexivity-from-top, which any constant into top handles
    let i = ctx.kit.std.i.clone();
    let e_rel: BTreeMap<String, Term> = sig
        .rels
        .iter()
        .map(|(n, args)| {
            // discard the equality pack: iterate the second projection
            let mut t = var("c");
            for _ in 0..args.len() {
                t = app(ctx.kit.std.p1.clone(), t);
            }
            (n.clone(), bracket_open(&t, &["c"]))
        })
        .collect();
    let e_fun: BTreeMap<String, Term> = sig
        .funcs
        .iter()
        .map(|(n, _, _)| (n.clone(), i.clone()))
        .collect();
    let e_term_friendly: BTreeMap<String, Term> = regs
        .iter()
        .map(|r| {
            let w = match r.arity {
                1 => r.term.clone(),
                2 => bracket_open(
                    &apps(
                        r.term.clone(),
                        &[
                            app(ctx.kit.std.p0.clone(), var("c")),
                            app(ctx.kit.std.p1.clone(), var("c")),
                        ],
                    ),
                    &["c"],
                ),
                _ => unreachable!(),
            };
            (r.name.clone(), w)
        })
        .collect();
    let pack = WitnessPack {
        e_ref1: i.clone(),
        e_ref2: app(crate::comb::k(), i.clone()),
        e_sym: i.clone(),
        e_tran: i,
        e_rel,
        e_fun,
        e_term_friendly,
    };
    Structure {
        name: "arith".to_string(),
        sig,
        domains,
        consts,
        funcs,
        eq_val,
        rel_val,
        quantifier,
        pack,
        cutoff,
    }
}

/// The induction witness: `j (p e0 e1) 0 = e0`,
/// `j (p e0 e1) (n+1) = (e1 n)(j (p e0 e1) n)`.
pub fn induction_witness(ctx: &Ctx) -> Element {
    let std = &ctx.kit.std;
    let body = app(
        apps(
            std.iota.clone(),
            &[
                app(std.p0.clone(), var("n")),
                app(std.k.clone(), app(std.p0.clone(), var("pe"))),
                app(
                    std.k.clone(),
                    app(
                        apps(
                            app(std.p1.clone(), var("pe")),
                            &[app(std.p1.clone(), var("n"))],
                        ),
                        apps(var("self"), &[var("pe"), app(std.p1.clone(), var("n"))]),
                    ),
                ),
            ],
        ),
        std.i.clone(),
    );
    let f = bracket_open(&body, &["self", "pe", "n"]);
    let mut fuel = 1_000_000;
    let z = fixpoint(&f, &mut fuel).expect("induction fixpoint");
    ctx.inject(&z)
}

/// Check the induction reduction for one formula at the cutoff: from a
/// base realizer and a step realizer, `j` lands in every instance.
pub fn check_induction(
    s: &Structure,
    f: &Formula,
    var_name: &str,
    base: &Element,
    step: &Element,
    ctx: &Ctx,
) -> Verdict {
    let j = induction_witness(ctx);
    let be = &ctx.backend;
    let packed = match be.apply_all(&be.std_elements().p, &[base.clone(), step.clone()]) {
        crate::backend::AppResult::Defined(e) => e,
        _ => {
            return Verdict::Inconclusive {
                reason: "packing diverged".to_string(),
            }
        }
    };
    let je = match be.apply(&j, &packed) {
        crate::backend::AppResult::Defined(e) => e,
        _ => {
            return Verdict::Inconclusive {
                reason: "j application diverged".to_string(),
            }
        }
    };
    for c in 0..s.cutoff {
        let mut env = Env::new();
        env.insert(var_name.to_string(), (0, c));
        let target = s.evaluate(f, &env).expect("induction formula evaluable");
        let num = be.numeral(c as u64);
        match be.apply(&je, &num) {
            crate::backend::AppResult::Defined(r) => {
                if target.membership(ctx, &r) == Tri::No {
                    return Verdict::Refuted {
                        counterexample: num,
                        context: format!("induction value at {c} lands outside {target}"),
                    };
                }
            }
            _ => {
                return Verdict::Inconclusive {
                    reason: format!("induction value at {c} diverged"),
                }
            }
        }
    }
    Verdict::Confirmed
}

/// The workbench-level index table standing in for the Kleene T/U
/// predicates: registered programs with their traced runs.
#[derive(Default)]
pub struct TURegistry {
    pub entries: Vec<TUEntry>,
}

pub struct TUEntry {
    pub index: usize,
    pub relation: String,
    /// (input, trace id, output) rows for inputs below the verification bound
    pub rows: Vec<(u64, u64, u64)>,
}

impl TURegistry {
    /// `T(e, n, q)`: program e on input n has halting trace q.
    pub fn t_holds(&self, e: usize, n: u64, q: u64) -> bool {
        self.entries
            .iter()
            .any(|en| en.index == e && en.rows.iter().any(|&(i, t, _)| i == n && t == q))
    }

    /// `U(q, m)`: trace q outputs m.
    pub fn u_holds(&self, q: u64, m: u64) -> bool {
        self.entries
            .iter()
            .any(|en| en.rows.iter().any(|&(_, t, o)| t == q && o == m))
    }
}

pub struct CtExtraction {
    pub index: usize,
    pub verified_inputs: Vec<u64>,
    pub verdict: Verdict,
}

/// Extract the program from a totality witness: the composite
/// `n |-> p0 (e numeral(n))`, verified against the relation's own function
/// and registered in the index table.
pub fn ct_instance_realizer(
    s: &Structure,
    relation: &str,
    oracle: &dyn Fn(u64) -> u64,
    antecedent_witness: &Element,
    bound: u64,
    registry: &mut TURegistry,
    ctx: &Ctx,
) -> CtExtraction {
    let be = &ctx.backend;
    let std = be.std_elements();
    let mut rows = Vec::new();
    let mut verified = Vec::new();
    let index = registry.entries.len() + 1;
    for n in 0..bound {
        let num = be.numeral(n);
        let r = match be.apply(antecedent_witness, &num) {
            crate::backend::AppResult::Defined(r) => r,
            _ => {
                return CtExtraction {
                    index,
                    verified_inputs: verified,
                    verdict: Verdict::Refuted {
                        counterexample: num,
                        context: "totality witness diverged".to_string(),
                    },
                }
            }
        };
        let m_elem = match be.apply(&std.p0, &r) {
            crate::backend::AppResult::Defined(m) => m,
            _ => {
                return CtExtraction {
                    index,
                    verified_inputs: verified,
                    verdict: Verdict::Inconclusive {
                        reason: "projection diverged".to_string(),
                    },
                }
            }
        };
        let Element::Term(mt) = &m_elem else {
            return CtExtraction {
                index,
                verified_inputs: verified,
                verdict: Verdict::Inconclusive {
                    reason: "extraction needs the term backend".to_string(),
                },
            };
        };
        let mut fuel = ctx.backend.params.fuel;
        let Some(m) = numeral_value(mt, &ctx.kit.std, &mut fuel) else {
            return CtExtraction {
                index,
                verified_inputs: verified,
                verdict: Verdict::Refuted {
                    counterexample: m_elem,
                    context: format!("output at {n} is not a numeral"),
                },
            };
        };
        if m != oracle(n) {
            return CtExtraction {
                index,
                verified_inputs: verified,
                verdict: Verdict::Refuted {
                    counterexample: m_elem,
                    context: format!("program output {m} at {n}, relation wants {}", oracle(n)),
                },
            };
        }
        rows.push((n, 1000 * index as u64 + n, m));
        verified.push(n);
    }
    registry.entries.push(TUEntry {
        index,
        relation: relation.to_string(),
        rows,
    });
    let _ = s;
    CtExtraction {
        index,
        verified_inputs: verified,
        verdict: Verdict::Confirmed,
    }
}

/// Classical truth of a bounded formula over the cutoff domain, used as the
/// decidability oracle behind the stability construction.
pub fn eval_bool(s: &Structure, f: &Formula, env: &Env) -> Option<bool> {
    match f {
        Formula::Eq(t, u) => {
            let a = s.eval_term(t, env).ok()?;
            let b = s.eval_term(u, env).ok()?;
            Some(a == b)
        }
        Formula::Rel(r, args) => {
            let mut vals = Vec::new();
            for a in args {
                vals.push(s.eval_term(a, env).ok()?.1);
            }
            // decidable atomics are interpreted by two-valued valuations
            let tv = (s.rel_val.get(r)?)(&vals);
            if tv.is_top() {
                Some(true)
            } else if tv.is_bot() {
                Some(false)
            } else {
                None
            }
        }
        Formula::False => Some(false),
        Formula::And(a, b) => Some(eval_bool(s, a, env)? && eval_bool(s, b, env)?),
        Formula::Or(a, b) => Some(eval_bool(s, a, env)? || eval_bool(s, b, env)?),
        Formula::Imp(a, b) => Some(!eval_bool(s, a, env)? || eval_bool(s, b, env)?),
        Formula::Exists(v, sort, body) => {
            for c in 0..s.domain_size(*sort) {
                let mut env2 = env.clone();
                env2.insert(v.clone(), (*sort, c));
                if eval_bool(s, body, &env2)? {
                    return Some(true);
                }
            }
            Some(false)
        }
        Formula::Forall(v, sort, body) => {
            for c in 0..s.domain_size(*sort) {
                let mut env2 = env.clone();
                env2.insert(v.clone(), (*sort, c));
                if !eval_bool(s, body, &env2)? {
                    return Some(false);
                }
            }
            Some(true)
        }
        // the box preserves instance-level classical truth
        Formula::Box(b) => eval_bool(s, b, env),
    }
}

/// A member of the plain (non-modal) valuation of a true bounded formula.
pub fn plain_member(s: &Structure, f: &Formula, env: &Env, ctx: &Ctx) -> Option<Element> {
    let be = &ctx.backend;
    let std = be.std_elements();
    if !eval_bool(s, f, env)? {
        return None;
    }
    match f {
        // the base valuation of a true atomic is top
        Formula::Eq(..) | Formula::Rel(..) => Some(std.i.clone()),
        Formula::And(a, b) => {
            let ma = plain_member(s, a, env, ctx)?;
            let mb = plain_member(s, b, env, ctx)?;
            be.apply_all(&std.p, &[ma, mb]).defined()
        }
        Formula::Or(a, b) => {
            let (tag, m) = if eval_bool(s, a, env)? {
                (std.k.clone(), plain_member(s, a, env, ctx)?)
            } else {
                (std.kbar.clone(), plain_member(s, b, env, ctx)?)
            };
            be.apply_all(&std.p, &[tag, m]).defined()
        }
        Formula::Imp(a, b) => {
            if eval_bool(s, a, env)? {
                let mb = plain_member(s, b, env, ctx)?;
                be.apply(&std.k, &mb).defined()
            } else {
                // the antecedent's valuation is empty; any element realizes
                Some(std.k.clone())
            }
        }
        Formula::Exists(v, sort, body) => {
            for c in 0..s.domain_size(*sort) {
                let mut env2 = env.clone();
                env2.insert(v.clone(), (*sort, c));
                if eval_bool(s, body, &env2)? {
                    let q = be.numeral(c as u64);
                    let mb = plain_member(s, body, &env2, ctx)?;
                    return be.apply_all(&std.p, &[q, mb]).defined();
                }
            }
            None
        }
        Formula::Forall(v, sort, body) => {
            let mut members = Vec::new();
            for c in 0..s.domain_size(*sort) {
                let mut env2 = env.clone();
                env2.insert(v.clone(), (*sort, c));
                members.push(plain_member(s, body, &env2, ctx)?);
            }
            member_table(&members, ctx)
        }
        Formula::False | Formula::Box(_) => None,
    }
}

/// A numeral-dispatch table of elements, exposed for step-realizer
/// construction.
pub fn member_table(members: &[Element], ctx: &Ctx) -> Option<Element> {
    numeral_table(members, ctx)
}

/// For a true bounded formula: an element in `||phi||_mu(E)` for every E at
/// once. For a false one: an element of `||phi||_mu(E) => bot-pi(E)` for
/// every E. Both are built by recursion on the decidable structure.
pub fn uniform_member(s: &Structure, f: &Formula, env: &Env, ctx: &Ctx) -> Option<Element> {
    let be = &ctx.backend;
    let kit = &ctx.kit;
    let std = be.std_elements();
    if !eval_bool(s, f, env)? {
        return None;
    }
    match f {
        Formula::Eq(..) | Formula::Rel(..) => {
            // the base valuation is top: d2 (anything)
            let d2 = ctx.inject(&kit.d2);
            be.apply(&d2, &std.i).defined()
        }
        Formula::And(a, b) => {
            let ma = uniform_member(s, a, env, ctx)?;
            let mb = uniform_member(s, b, env, ctx)?;
            be.apply_all(&std.p, &[ma, mb]).defined()
        }
        Formula::Or(a, b) => {
            let (tag, m) = if eval_bool(s, a, env)? {
                (std.k.clone(), uniform_member(s, a, env, ctx)?)
            } else {
                (std.kbar.clone(), uniform_member(s, b, env, ctx)?)
            };
            let inj = be.apply_all(&std.p, &[tag, m]).defined()?;
            let d2 = ctx.inject(&kit.d2);
            be.apply(&d2, &inj).defined()
        }
        Formula::Imp(a, b) => {
            if eval_bool(s, a, env)? {
                let mb = uniform_member(s, b, env, ctx)?;
                be.apply(&std.k, &mb).defined()
            } else {
                // exfalso transport through the consequent certificate
                let ra = uniform_refuter(s, a, env, ctx)?;
                let cert = ctx.inject(&s.modal_certificate(b, ctx));
                // c |-> cert (ra c): members of the antecedent are carried
                // to bot-pi and re-rooted in the consequent
                let g = bracket_open(
                    &app(var("cert"), app(var("ra"), var("c"))),
                    &["cert", "ra", "c"],
                );
                be.apply_all(&ctx.inject(&g), &[cert, ra]).defined()
            }
        }
        Formula::Exists(v, sort, body) => {
            for c in 0..s.domain_size(*sort) {
                let mut env2 = env.clone();
                env2.insert(v.clone(), (*sort, c));
                if eval_bool(s, body, &env2)? {
                    let q = be.numeral(c as u64);
                    let mb = uniform_member(s, body, &env2, ctx)?;
                    let packed = be.apply_all(&std.p, &[q, mb]).defined()?;
                    let d2 = ctx.inject(&kit.d2);
                    return be.apply(&d2, &packed).defined();
                }
            }
            None
        }
        Formula::Forall(v, sort, body) => {
            // a finite dispatch table on the numeral argument
            let mut members = Vec::new();
            for c in 0..s.domain_size(*sort) {
                let mut env2 = env.clone();
                env2.insert(v.clone(), (*sort, c));
                members.push(uniform_member(s, body, &env2, ctx)?);
            }
            numeral_table(&members, ctx)
        }
        Formula::False => None,
        Formula::Box(body) => {
            let mb = uniform_member(s, body, env, ctx)?;
            let d2 = ctx.inject(&kit.d2);
            be.apply(&d2, &mb).defined()
        }
    }
}

/// Element of `||phi||_mu(E) => bot-pi(E)`, uniform over E, for false
/// bounded formulas.
pub fn uniform_refuter(s: &Structure, f: &Formula, env: &Env, ctx: &Ctx) -> Option<Element> {
    let be = &ctx.backend;
    let kit = &ctx.kit;
    let std = be.std_elements();
    if eval_bool(s, f, env)? {
        return None;
    }
    match f {
        Formula::Eq(..) | Formula::Rel(..) | Formula::False => {
            // the base valuation is empty: the cell is O_E bot already
            Some(std.i.clone())
        }
        Formula::And(a, b) => {
            if !eval_bool(s, a, env)? {
                let ra = uniform_refuter(s, a, env, ctx)?;
                let g = bracket_open(
                    &app(var("ra"), app(kit.std.p0.clone(), var("c"))),
                    &["ra", "c"],
                );
                be.apply(&ctx.inject(&g), &ra).defined()
            } else {
                let rb = uniform_refuter(s, b, env, ctx)?;
                let g = bracket_open(
                    &app(var("rb"), app(kit.std.p1.clone(), var("c"))),
                    &["rb", "c"],
                );
                be.apply(&ctx.inject(&g), &rb).defined()
            }
        }
        Formula::Or(a, b) => {
            let ra = uniform_refuter(s, a, env, ctx)?;
            let rb = uniform_refuter(s, b, env, ctx)?;
            // t |-> k (t (dispatch)) : members of O_E(join) map to bot-pi(E)
            let arm = |r: Term| {
                bracket_open(
                    &app(app(r, var("b")), kit.std.i.clone()),
                    &["b"],
                )
            };
            let (Element::Term(rat), Element::Term(rbt)) = (&ra, &rb) else {
                return None;
            };
            let dispatch = bracket_open(
                &app(
                    apps(
                        kit.std.iota.clone(),
                        &[
                            app(kit.std.p0.clone(), var("c")),
                            arm(rat.clone()),
                            arm(rbt.clone()),
                        ],
                    ),
                    app(kit.std.p1.clone(), var("c")),
                ),
                &["c"],
            );
            let g = bracket_open(
                &app(kit.std.k.clone(), app(var("t"), dispatch)),
                &["t"],
            );
            Some(ctx.inject(&g))
        }
        Formula::Imp(a, b) => {
            let ma = uniform_member(s, a, env, ctx)?;
            let rb = uniform_refuter(s, b, env, ctx)?;
            let g = bracket_open(
                &app(var("rb"), app(var("w"), var("ma"))),
                &["rb", "ma", "w"],
            );
            be.apply_all(&ctx.inject(&g), &[rb, ma]).defined()
        }
        Formula::Exists(v, sort, body) => {
            let mut refuters = Vec::new();
            for c in 0..s.domain_size(*sort) {
                let mut env2 = env.clone();
                env2.insert(v.clone(), (*sort, c));
                refuters.push(uniform_refuter(s, body, &env2, ctx)?);
            }
            let table = numeral_table(&refuters, ctx)?;
            let Element::Term(tab) = &table else { return None };
            // t |-> k (t (\c. ((tab (p0 c)) (p1 c)) i))
            let inner = bracket_open(
                &app(
                    app(
                        app(tab.clone(), app(kit.std.p0.clone(), var("c"))),
                        app(kit.std.p1.clone(), var("c")),
                    ),
                    kit.std.i.clone(),
                ),
                &["c"],
            );
            let g = bracket_open(
                &app(kit.std.k.clone(), app(var("t"), inner)),
                &["t"],
            );
            Some(ctx.inject(&g))
        }
        Formula::Forall(v, sort, body) => {
            for c in 0..s.domain_size(*sort) {
                let mut env2 = env.clone();
                env2.insert(v.clone(), (*sort, c));
                if !eval_bool(s, body, &env2)? {
                    let rb = uniform_refuter(s, body, &env2, ctx)?;
                    let num = be.numeral(c as u64);
                    // e |-> rb (e numeral)
                    let g = bracket_open(
                        &app(var("rb"), app(var("e"), var("num"))),
                        &["rb", "num", "e"],
                    );
                    return be.apply_all(&ctx.inject(&g), &[rb, num]).defined();
                }
            }
            None
        }
        Formula::Box(body) => {
            // refute through the T-style projection at probe E
            let rb = uniform_refuter(s, body, env, ctx)?;
            let g = bracket_open(
                &app(
                    var("rb"),
                    apps(kit.d1.clone(), &[kit.std.i.clone(), var("c")]),
                ),
                &["rb", "c"],
            );
            be.apply(&ctx.inject(&g), &rb).defined()
        }
    }
}

/// A finite dispatch table on Curry numerals: `table numeral(i) = members[i]`
/// for i below the table length (and the last entry beyond it).
fn numeral_table(members: &[Element], ctx: &Ctx) -> Option<Element> {
    let std = &ctx.kit.std;
    let mut terms = Vec::new();
    for m in members {
        match m {
            Element::Term(t) => terms.push(t.clone()),
            _ => return None,
        }
    }
    // the innermost level is a constant function so overflow indices
    // fall back to the last entry instead of applying it
    let mut acc = app(crate::comb::k(), terms.last()?.clone());
    for t in terms.iter().rev().skip(1) {
        // n |-> iota (p0 n) (k t) (k (acc (p1 n))) i
        acc = bracket_open(
            &app(
                apps(
                    std.iota.clone(),
                    &[
                        app(std.p0.clone(), var("n")),
                        app(std.k.clone(), t.clone()),
                        app(std.k.clone(), app(acc, app(std.p1.clone(), var("n")))),
                    ],
                ),
                std.i.clone(),
            ),
            &["n"],
        );
    }
    Some(ctx.inject(&acc))
}

pub struct StabilityReport {
    pub formula: String,
    pub env: String,
    pub truth: bool,
    pub stability: Verdict,
    pub translation_agreement: Verdict,
}

/// Bounded-formula stability: for each environment, check
/// `||phi||_mu(D) ~> ||box phi||_mu(D)` and the agreement with the
/// translation, using the decidability case split.
pub fn sigma1_stability_check(
    s: &Structure,
    f: &Formula,
    probes: &ProbeFamily,
    ctx: &Ctx,
) -> Vec<StabilityReport> {
    let be = &ctx.backend;
    let kit = &ctx.kit;
    let std = be.std_elements();
    let mut free = Vec::new();
    f.free_vars(&mut free);
    let mut out = Vec::new();
    let envs = if free.is_empty() {
        vec![Env::new()]
    } else {
        let mut envs = Vec::new();
        for c in 0..s.cutoff.min(3) {
            let mut e = Env::new();
            for v in &free {
                e.insert(v.clone(), (0, c));
            }
            envs.push(e);
        }
        envs
    };
    let translated = crate::semantics::goedel_translate(f).expect("non-modal input");
    let boxed = Formula::Box(Rc::new(f.clone()));
    for env in envs {
        let Some(truth) = eval_bool(s, f, &env) else {
            continue;
        };
        let (stab, agree) = if truth {
            let Some(m) = uniform_member(s, f, &env, ctx) else {
                out.push(StabilityReport {
                    formula: f.to_string(),
                    env: format!("{env:?}"),
                    truth,
                    stability: Verdict::Inconclusive {
                        reason: "no uniform member constructed".to_string(),
                    },
                    translation_agreement: Verdict::Inconclusive {
                        reason: "no uniform member constructed".to_string(),
                    },
                });
                continue;
            };
            // stability witness: constant into d2-lifted member
            let d2 = ctx.inject(&kit.d2);
            let boxed_member = be.apply(&d2, &m).defined().unwrap();
            let wit = be.apply(&std.k, &boxed_member).defined().unwrap();
            let mut stab = Verdict::Confirmed;
            for (_, d) in probes.iter() {
                let lhs = s.evaluate_modal(f, &env, d, probes).unwrap();
                let rhs = s.evaluate_modal(&boxed, &env, d, probes).unwrap();
                let v = check_reduction(ctx, &wit, &lhs, &rhs);
                if !v.is_confirmed() {
                    stab = v;
                    break;
                }
            }
            // translation agreement: each side is inhabited by its own
            // constructed member
            let mut agree = Verdict::Confirmed;
            match uniform_member(s, &translated, &env, ctx) {
                None => {
                    agree = Verdict::Inconclusive {
                        reason: "no member for the translation".to_string(),
                    }
                }
                Some(m2) => {
                    for (_, d) in probes.iter() {
                        let lhs = s.evaluate_modal(f, &env, d, probes).unwrap();
                        let rhs = s.evaluate_modal(&translated, &env, d, probes).unwrap();
                        let a = lhs.membership(ctx, &m);
                        let b = rhs.membership(ctx, &m2);
                        if a == Tri::No || b == Tri::No {
                            agree = Verdict::Refuted {
                                counterexample: m.clone(),
                                context: "constructed member rejected".to_string(),
                            };
                            break;
                        }
                        if a == Tri::Unknown || b == Tri::Unknown {
                            agree = Verdict::Inconclusive {
                                reason: "membership unknown at this fuel".to_string(),
                            };
                        }
                    }
                }
            }
            (stab, agree)
        } else {
            let Some(r) = uniform_refuter(s, f, &env, ctx) else {
                out.push(StabilityReport {
                    formula: f.to_string(),
                    env: format!("{env:?}"),
                    truth,
                    stability: Verdict::Inconclusive {
                        reason: "no refuter constructed".to_string(),
                    },
                    translation_agreement: Verdict::Inconclusive {
                        reason: "no refuter constructed".to_string(),
                    },
                });
                continue;
            };
            let (Element::Term(rt),) = (&r,) else { unreachable!() };
            // stability in the empty case: carry the cell to bot-pi and
            // re-root it under the box cell
            let g = bracket_open(
                &apps(
                    kit.d1.clone(),
                    &[kit.std.i.clone(), app(rt.clone(), var("c"))],
                ),
                &["c"],
            );
            let wit = ctx.inject(&g);
            let mut stab = Verdict::Confirmed;
            for (_, d) in probes.iter() {
                let lhs = s.evaluate_modal(f, &env, d, probes).unwrap();
                let rhs = s.evaluate_modal(&boxed, &env, d, probes).unwrap();
                let v = check_reduction(ctx, &wit, &lhs, &rhs);
                if !v.is_confirmed() {
                    stab = v;
                    break;
                }
            }
            // agreement: both sides refutable by the same construction
            let rt2 = uniform_refuter(s, &translated, &env, ctx);
            let agree = match rt2 {
                Some(_) => Verdict::Confirmed,
                None => Verdict::Inconclusive {
                    reason: "no refuter for the translation".to_string(),
                },
            };
            (stab, agree)
        };
        out.push(StabilityReport {
            formula: f.to_string(),
            env: format!("{env:?}"),
            truth,
            stability: stab,
            translation_agreement: agree,
        });
    }
    out
}

pub struct RefuterSweep {
    pub label: String,
    pub experiment: bool,
    pub records: Vec<(Term, Verdict)>,
}

/// The existence-predicate refutation: a uniform witness would pin
/// `e e' i` inside every singleton quantifier value at once.
pub fn existence_refuter(candidates: &[Term], ctx: &Ctx) -> RefuterSweep {
    let be = &ctx.backend;
    let std = be.std_elements();
    let d2 = ctx.inject(&ctx.kit.d2);
    let mut records = Vec::new();
    for cand in candidates {
        let e = be.inject(cand);
        let fuel2 = be.params.fuel.saturating_mul(2);
        let v = (|| {
            let s1 = be.apply_fuel(&e, &d2, fuel2).defined()?;
            be.apply_fuel(&s1, &std.i, fuel2).defined()
        })();
        let verdict = match v {
            None => Verdict::Refuted {
                counterexample: d2.clone(),
                context: "e e' i diverged at doubled fuel".to_string(),
            },
            Some(w) => {
                let n0 = be.numeral(0);
                let n1 = be.numeral(1);
                match (be.eq(&w, &n0), be.eq(&w, &n1)) {
                    (Tri::Yes, _) => Verdict::Refuted {
                        counterexample: w,
                        context: "lands in Q(0), so it misses Q(1)".to_string(),
                    },
                    (_, Tri::Yes) => Verdict::Refuted {
                        counterexample: w,
                        context: "lands in Q(1), so it misses Q(0)".to_string(),
                    },
                    (Tri::No, Tri::No) => Verdict::Refuted {
                        counterexample: w,
                        context: "lands in neither Q(0) nor Q(1)".to_string(),
                    },
                    _ => Verdict::Inconclusive {
                        reason: "equality fuel-limited".to_string(),
                    },
                }
            }
        };
        records.push((cand.clone(), verdict));
    }
    RefuterSweep {
        label: "existence-predicate".to_string(),
        experiment: false,
        records,
    }
}

/// The Barcan experiment with a decidable stand-in predicate: each
/// candidate would have to decide the predicate through its first
/// projection, tag k for membership and tag kbar against.
pub fn barcan_refuter(
    candidates: &[Term],
    predicate: &dyn Fn(u64) -> bool,
    bound: u64,
    ctx: &Ctx,
) -> RefuterSweep {
    let be = &ctx.backend;
    let std = be.std_elements();
    let mut records = Vec::new();
    for cand in candidates {
        let e = be.inject(cand);
        let fuel2 = be.params.fuel.saturating_mul(2);
        let mut verdict = None;
        for y in 0..bound {
            let num = be.numeral(y);
            let r = (|| {
                let ey = be.apply_fuel(&e, &num, fuel2).defined()?;
                be.apply_fuel(&std.p0, &ey, fuel2).defined()
            })();
            match r {
                None => {
                    verdict = Some(Verdict::Refuted {
                        counterexample: num,
                        context: format!("candidate diverged at input {y}"),
                    });
                    break;
                }
                Some(tag) => {
                    let want = if predicate(y) { &std.k } else { &std.kbar };
                    let anti = if predicate(y) { &std.kbar } else { &std.k };
                    match (be.eq(&tag, want), be.eq(&tag, anti)) {
                        (Tri::Yes, _) => continue,
                        (_, Tri::Yes) => {
                            verdict = Some(Verdict::Refuted {
                                counterexample: num,
                                context: format!(
                                    "candidate answers the predicate wrongly at {y}"
                                ),
                            });
                            break;
                        }
                        (Tri::No, Tri::No) => {
                            verdict = Some(Verdict::Refuted {
                                counterexample: num,
                                context: format!("candidate answer at {y} is not a tag"),
                            });
                            break;
                        }
                        _ => {
                            verdict = Some(Verdict::Inconclusive {
                                reason: "tag equality fuel-limited".to_string(),
                            });
                            break;
                        }
                    }
                }
            }
        }
        // a candidate that decides the stand-in on all tested inputs is not
        // thereby a Barcan witness; the sweep is an experiment and such a
        // candidate is recorded as inconclusive rather than confirmed
        let verdict = verdict.unwrap_or(Verdict::Inconclusive {
            reason: "decided the stand-in on every tested input".to_string(),
        });
        records.push((cand.clone(), verdict));
    }
    RefuterSweep {
        label: "barcan-standin".to_string(),
        experiment: true,
        records,
    }
}

/// Convenience formula builders used by corpora and tests.
pub fn fvar(v: &str) -> FTerm {
    FTerm::Var(v.to_string())
}

pub fn fnum(n: usize) -> FTerm {
    FTerm::Const(n.to_string())
}

pub fn fsucc(t: FTerm) -> FTerm {
    FTerm::App("S".to_string(), vec![t])
}

pub fn feq(a: FTerm, b: FTerm) -> Formula {
    Formula::Eq(a, b)
}

pub fn flt(a: FTerm, b: FTerm) -> Formula {
    Formula::Rel("lt".to_string(), vec![a, b])
}

pub fn numeral_of(ctx: &Ctx, n: u64) -> Term {
    numeral(n, &ctx.kit.std)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Backend;
    use crate::comb::closed_terms;

    fn setup() -> (Ctx, Structure, ProbeFamily) {
        let ctx = Ctx::new(Backend::term_model());
        let s = arith_structure(8, &ctx);
        let probes = ProbeFamily::default_family(&ctx);
        (ctx, s, probes)
    }

    #[test]
    fn registry_terms_compute() {
        let ctx = Ctx::new(Backend::term_model());
        let be = &ctx.backend;
        for r in registry(&ctx) {
            let e = ctx.inject(&r.term);
            for a in 0..5u64 {
                if r.arity == 1 {
                    let got = be.apply(&e, &be.numeral(a)).defined().unwrap();
                    let want = be.numeral((r.eval)(&[a]));
                    assert_eq!(be.eq(&got, &want), Tri::Yes, "{} at {a}", r.name);
                } else {
                    for b in 0..4u64 {
                        let got = be
                            .apply_all(&e, &[be.numeral(a), be.numeral(b)])
                            .defined()
                            .unwrap();
                        let want = be.numeral((r.eval)(&[a, b]));
                        assert_eq!(be.eq(&got, &want), Tri::Yes, "{} at {a},{b}", r.name);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_equals_zero_is_top() {
        let (ctx, s, _) = setup();
        let f = feq(fnum(0), fnum(0));
        let tv = s.evaluate(&f, &Env::new()).unwrap();
        assert_eq!(tv.membership(&ctx, &ctx.backend.numeral(3)), Tri::Yes);
    }

    #[test]
    fn exists_x_equals_one() {
        let (ctx, s, _) = setup();
        let f = Formula::Exists(
            "x".to_string(),
            0,
            Rc::new(feq(fvar("x"), fnum(1))),
        );
        let tv = s.evaluate(&f, &Env::new()).unwrap();
        // contains p 1~ (sample of top)
        let be = &ctx.backend;
        let std = be.std_elements();
        let w = be
            .apply_all(&std.p, &[be.numeral(1), std.i.clone()])
            .defined()
            .unwrap();
        assert_eq!(tv.membership(&ctx, &w), Tri::Yes);
    }

    #[test]
    fn succ_zero_not_zero_vacuous() {
        let (ctx, s, _) = setup();
        let f = Formula::neg(feq(fsucc(fnum(0)), fnum(0)));
        let tv = s.evaluate(&f, &Env::new()).unwrap();
        // any element realizes a vacuous implication
        let std = ctx.backend.std_elements();
        let kx = ctx.backend.apply(&std.k, &std.i).defined().unwrap();
        assert_ne!(tv.membership(&ctx, &kx), Tri::No);
    }

    #[test]
    fn induction_on_x_equals_x() {
        let (ctx, s, _) = setup();
        let f = feq(fvar("x"), fvar("x"));
        let be = &ctx.backend;
        let std = be.std_elements();
        // base: member of ||0=0|| = top; step: constant function returning a member
        let base = std.i.clone();
        let step = be.apply(&std.k, &std.k).defined().unwrap();
        let v = check_induction(&s, &f, "x", &base, &step, &ctx);
        assert!(v.is_confirmed(), "{v}");
    }

    #[test]
    fn ct_extraction_for_successor() {
        let (ctx, s, _) = setup();
        let be = &ctx.backend;
        // antecedent witness: n |-> p (S n) (d2-member of top)
        let kit = &ctx.kit;
        let succ = succ_term(&ctx);
        let w = bracket_open(
            &apps(
                kit.std.p.clone(),
                &[
                    app(succ, var("n")),
                    app(kit.d2.clone(), kit.std.i.clone()),
                ],
            ),
            &["n"],
        );
        let wit = ctx.inject(&w);
        let mut reg = TURegistry::default();
        let r = ct_instance_realizer(&s, "succ", &|n| n + 1, &wit, 10, &mut reg, &ctx);
        assert!(r.verdict.is_confirmed(), "{}", r.verdict);
        assert_eq!(r.verified_inputs.len(), 10);
        assert!(reg.t_holds(r.index, 3, 1000 * r.index as u64 + 3));
        assert!(reg.u_holds(1000 * r.index as u64 + 3, 4));
        let _ = be;
    }

    #[test]
    fn stability_of_simple_formulas() {
        let (ctx, s, probes) = setup();
        let cases = vec![
            feq(fnum(0), fnum(0)),
            Formula::Exists(
                "s".to_string(),
                0,
                Rc::new(feq(fvar("s"), fsucc(fnum(0)))),
            ),
            Formula::Forall(
                "x".to_string(),
                0,
                Rc::new(Formula::Imp(
                    Rc::new(flt(fvar("x"), fnum(2))),
                    Rc::new(feq(fvar("x"), fvar("x"))),
                )),
            ),
        ];
        for f in cases {
            for rep in sigma1_stability_check(&s, &f, &probes, &ctx) {
                assert!(
                    rep.stability.is_confirmed(),
                    "{} at {}: {}",
                    rep.formula,
                    rep.env,
                    rep.stability
                );
                assert!(
                    !rep.translation_agreement.is_refuted(),
                    "{} translation: {}",
                    rep.formula,
                    rep.translation_agreement
                );
            }
        }
    }

    #[test]
    fn existence_refuter_kills_candidates() {
        let (ctx, _, _) = setup();
        let cands = closed_terms(40);
        let sweep = existence_refuter(&cands, &ctx);
        let confirmed = sweep
            .records
            .iter()
            .filter(|(_, v)| v.is_confirmed())
            .count();
        assert_eq!(confirmed, 0);
        let refuted = sweep
            .records
            .iter()
            .filter(|(_, v)| v.is_refuted())
            .count();
        assert!(refuted >= 38, "only {refuted} of 40 refuted");
    }

    #[test]
    fn barcan_experiment_refutes_small_candidates() {
        let (ctx, _, _) = setup();
        let cands = closed_terms(40);
        let sweep = barcan_refuter(&cands, &|y| y % 2 == 0, 8, &ctx);
        assert!(sweep.experiment);
        let confirmed = sweep
            .records
            .iter()
            .filter(|(_, v)| v.is_confirmed())
            .count();
        assert_eq!(confirmed, 0);
    }
}
