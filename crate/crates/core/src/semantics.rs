//! Uniform powerset-valued first-order structures with a quantifier map, the
//! non-modal and modal valuation functions, the Goedel translation, change
//! of basis, the quantifier taxonomy, and the logic-axiom harness.
//!
//! Domains are finite or cutoff-bounded; every verdict derived from them
//! carries the cutoff and probe flags at the report layer.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::comb::{app, apps, bracket_open, var, Term, Tri};
use crate::heyting::{check_reduction, Ctx, TruthValue, Verdict};
use crate::modal::ProbeFamily;

pub type SortId = usize;

#[derive(Clone, Debug, Default)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub consts: Vec<(String, SortId)>,
    /// name, argument sorts, result sort
    pub funcs: Vec<(String, Vec<SortId>, SortId)>,
    /// name, argument sorts
    pub rels: Vec<(String, Vec<SortId>)>,
}

impl Signature {
    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s == name)
    }

    pub fn func(&self, name: &str) -> Option<(usize, &Vec<SortId>, SortId)> {
        self.funcs
            .iter()
            .enumerate()
            .find(|(_, (n, _, _))| n == name)
            .map(|(i, (_, args, res))| (i, args, *res))
    }

    pub fn rel(&self, name: &str) -> Option<(usize, &Vec<SortId>)> {
        self.rels
            .iter()
            .enumerate()
            .find(|(_, (n, _))| n == name)
            .map(|(i, (_, args))| (i, args))
    }
}

/// First-order terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FTerm {
    Var(String),
    Const(String),
    App(String, Vec<FTerm>),
}

impl FTerm {
    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            FTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            FTerm::Const(_) => {}
            FTerm::App(_, args) => args.iter().for_each(|a| a.free_vars(out)),
        }
    }
}

/// Modal first-order formulas. The non-modal subclass is exactly the
/// box-free fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Eq(FTerm, FTerm),
    Rel(String, Vec<FTerm>),
    False,
    And(Rc<Formula>, Rc<Formula>),
    Or(Rc<Formula>, Rc<Formula>),
    Imp(Rc<Formula>, Rc<Formula>),
    Exists(String, SortId, Rc<Formula>),
    Forall(String, SortId, Rc<Formula>),
    Box(Rc<Formula>),
}

impl Formula {
    pub fn is_modal(&self) -> bool {
        match self {
            Formula::Box(_) => true,
            Formula::Eq(..) | Formula::Rel(..) | Formula::False => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_modal() || b.is_modal()
            }
            Formula::Exists(_, _, f) | Formula::Forall(_, _, f) => f.is_modal(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::Imp(Rc::new(f), Rc::new(Formula::False))
    }

    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            Formula::Eq(t, s) => {
                t.free_vars(out);
                s.free_vars(out);
            }
            Formula::Rel(_, args) => args.iter().for_each(|a| a.free_vars(out)),
            Formula::False => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            Formula::Exists(v, _, f) | Formula::Forall(v, _, f) => {
                let mut inner = Vec::new();
                f.free_vars(&mut inner);
                for w in inner {
                    if &w != v && !out.contains(&w) {
                        out.push(w);
                    }
                }
            }
            Formula::Box(f) => f.free_vars(out),
        }
    }
}

/// Variable environment: name -> (sort, domain index).
pub type Env = BTreeMap<String, (SortId, usize)>;

/// Uniform witness pack for a structure (the equality, relation, and
/// function clauses each carry one pca element).
#[derive(Clone)]
pub struct WitnessPack {
    pub e_ref1: Term,
    pub e_ref2: Term,
    pub e_sym: Term,
    pub e_tran: Term,
    /// per relation symbol
    pub e_rel: BTreeMap<String, Term>,
    /// per function symbol
    pub e_fun: BTreeMap<String, Term>,
    /// term-friendliness witnesses per function symbol, when present
    pub e_term_friendly: BTreeMap<String, Term>,
}

pub type EqVal = Rc<dyn Fn(SortId, usize, usize) -> TruthValue>;
pub type RelVal = Rc<dyn Fn(&[usize]) -> TruthValue>;
pub type FunInterp = Rc<dyn Fn(&[usize]) -> usize>;
pub type QuantVal = Rc<dyn Fn(SortId, usize) -> TruthValue>;

/// A uniform powerset-valued structure over a finite (cutoff-bounded)
/// domain.
#[derive(Clone)]
pub struct Structure {
    pub name: String,
    pub sig: Signature,
    /// display names of the domain elements, per sort
    pub domains: Vec<Vec<String>>,
    pub consts: BTreeMap<String, (SortId, usize)>,
    pub funcs: BTreeMap<String, FunInterp>,
    pub eq_val: EqVal,
    pub rel_val: BTreeMap<String, RelVal>,
    pub quantifier: QuantVal,
    pub pack: WitnessPack,
    pub cutoff: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("sort mismatch at {0}")]
    SortMismatch(String),
    #[error("modal connective under a non-modal valuation")]
    ModalInNonModal,
}

impl Structure {
    pub fn domain_size(&self, sort: SortId) -> usize {
        self.domains[sort].len()
    }

    pub fn eval_term(&self, t: &FTerm, env: &Env) -> Result<(SortId, usize), EvalError> {
        match t {
            FTerm::Var(v) => env.get(v).copied().ok_or(EvalError::Unbound(v.clone())),
            FTerm::Const(c) => self
                .consts
                .get(c)
                .copied()
                .ok_or(EvalError::UnknownSymbol(c.clone())),
            FTerm::App(f, args) => {
                let (_, arg_sorts, res) = self
                    .sig
                    .func(f)
                    .ok_or(EvalError::UnknownSymbol(f.clone()))?;
                let arg_sorts = arg_sorts.clone();
                let interp = self
                    .funcs
                    .get(f)
                    .ok_or(EvalError::UnknownSymbol(f.clone()))?
                    .clone();
                let mut vals = Vec::new();
                for (a, want) in args.iter().zip(arg_sorts.iter()) {
                    let (s, v) = self.eval_term(a, env)?;
                    if s != *want {
                        return Err(EvalError::SortMismatch(f.clone()));
                    }
                    vals.push(v);
                }
                Ok((res, interp(&vals)))
            }
        }
    }

    /// The non-modal valuation.
    pub fn evaluate(&self, f: &Formula, env: &Env) -> Result<TruthValue, EvalError> {
        match f {
            Formula::Eq(t, s) => {
                let (st, a) = self.eval_term(t, env)?;
                let (ss, b) = self.eval_term(s, env)?;
                if st != ss {
                    return Err(EvalError::SortMismatch(format!("{t:?} = {s:?}")));
                }
                Ok((self.eq_val)(st, a, b))
            }
            Formula::Rel(r, args) => {
                let mut vals = Vec::new();
                for a in args {
                    vals.push(self.eval_term(a, env)?.1);
                }
                let rv = self
                    .rel_val
                    .get(r)
                    .ok_or(EvalError::UnknownSymbol(r.clone()))?;
                Ok(rv(&vals))
            }
            Formula::False => Ok(TruthValue::bot()),
            Formula::And(a, b) => Ok(TruthValue::meet(
                &self.evaluate(a, env)?,
                &self.evaluate(b, env)?,
            )),
            Formula::Or(a, b) => Ok(TruthValue::join(
                &self.evaluate(a, env)?,
                &self.evaluate(b, env)?,
            )),
            Formula::Imp(a, b) => Ok(TruthValue::imp(
                &self.evaluate(a, env)?,
                &self.evaluate(b, env)?,
            )),
            Formula::Exists(v, sort, body) => {
                let mut parts = Vec::new();
                for c in 0..self.domain_size(*sort) {
                    let mut env2 = env.clone();
                    env2.insert(v.clone(), (*sort, c));
                    parts.push(TruthValue::meet(
                        &(self.quantifier)(*sort, c),
                        &self.evaluate(body, &env2)?,
                    ));
                }
                Ok(TruthValue::big_join(parts))
            }
            Formula::Forall(v, sort, body) => {
                let mut parts = Vec::new();
                for c in 0..self.domain_size(*sort) {
                    let mut env2 = env.clone();
                    env2.insert(v.clone(), (*sort, c));
                    parts.push(TruthValue::imp(
                        &(self.quantifier)(*sort, c),
                        &self.evaluate(body, &env2)?,
                    ));
                }
                Ok(TruthValue::big_meet(parts))
            }
            Formula::Box(_) => Err(EvalError::ModalInNonModal),
        }
    }

    /// The modal valuation at one probe cell.
    pub fn evaluate_modal(
        &self,
        f: &Formula,
        env: &Env,
        d: &TruthValue,
        probes: &ProbeFamily,
    ) -> Result<TruthValue, EvalError> {
        match f {
            Formula::Eq(..) | Formula::Rel(..) => {
                Ok(TruthValue::ominus(d, &self.evaluate(f, env)?))
            }
            Formula::False => Ok(TruthValue::ominus(d, &TruthValue::bot())),
            Formula::And(a, b) => Ok(TruthValue::meet(
                &self.evaluate_modal(a, env, d, probes)?,
                &self.evaluate_modal(b, env, d, probes)?,
            )),
            Formula::Or(a, b) => Ok(TruthValue::ominus(
                d,
                &TruthValue::join(
                    &self.evaluate_modal(a, env, d, probes)?,
                    &self.evaluate_modal(b, env, d, probes)?,
                ),
            )),
            Formula::Imp(a, b) => Ok(TruthValue::imp(
                &self.evaluate_modal(a, env, d, probes)?,
                &self.evaluate_modal(b, env, d, probes)?,
            )),
            Formula::Exists(v, sort, body) => {
                let mut parts = Vec::new();
                for c in 0..self.domain_size(*sort) {
                    let mut env2 = env.clone();
                    env2.insert(v.clone(), (*sort, c));
                    parts.push(TruthValue::meet(
                        &(self.quantifier)(*sort, c),
                        &self.evaluate_modal(body, &env2, d, probes)?,
                    ));
                }
                Ok(TruthValue::ominus(d, &TruthValue::big_join(parts)))
            }
            Formula::Forall(v, sort, body) => {
                let mut parts = Vec::new();
                for c in 0..self.domain_size(*sort) {
                    let mut env2 = env.clone();
                    env2.insert(v.clone(), (*sort, c));
                    parts.push(TruthValue::imp(
                        &(self.quantifier)(*sort, c),
                        &self.evaluate_modal(body, &env2, d, probes)?,
                    ));
                }
                Ok(TruthValue::big_meet(parts))
            }
            Formula::Box(body) => {
                let mut cells = Vec::new();
                for (_, e) in probes.iter() {
                    cells.push(self.evaluate_modal(body, env, e, probes)?);
                }
                Ok(TruthValue::ominus(d, &TruthValue::big_meet(cells)))
            }
        }
    }

    /// The Boolean-membership certificate for a formula's modal valuation,
    /// assembled by structural recursion.
    pub fn modal_certificate(&self, f: &Formula, ctx: &Ctx) -> Term {
        let kit = &ctx.kit;
        match f {
            Formula::Eq(..) | Formula::Rel(..) | Formula::False | Formula::Or(..)
            | Formula::Exists(..) | Formula::Box(_) => kit.d3.clone(),
            Formula::And(a, b) => {
                let ca = self.modal_certificate(a, ctx);
                let cb = self.modal_certificate(b, ctx);
                // t |-> p (ca (p0 (d7 t))) (cb (p1 (d7 t)))
                bracket_open(
                    &apps(
                        kit.std.p.clone(),
                        &[
                            app(ca, app(kit.std.p0.clone(), app(kit.d7.clone(), var("t")))),
                            app(cb, app(kit.std.p1.clone(), app(kit.d7.clone(), var("t")))),
                        ],
                    ),
                    &["t"],
                )
            }
            Formula::Imp(_, b) => {
                let cb = self.modal_certificate(b, ctx);
                // t a |-> cb ((d5 t) (d2 a))
                bracket_open(
                    &app(
                        cb,
                        app(app(kit.d5.clone(), var("t")), app(kit.d2.clone(), var("a"))),
                    ),
                    &["t", "a"],
                )
            }
            Formula::Forall(_, _, body) => {
                let cb = self.modal_certificate(body, ctx);
                // t n |-> cb ((d5 (d1 i t)) (d2 n))
                bracket_open(
                    &app(
                        cb,
                        app(
                            app(
                                kit.d5.clone(),
                                apps(kit.d1.clone(), &[kit.std.i.clone(), var("t")]),
                            ),
                            app(kit.d2.clone(), var("n")),
                        ),
                    ),
                    &["t", "n"],
                )
            }
        }
    }

    /// Substitution witness for a formula with one designated free variable:
    /// `||a=b|| & ||phi(a)|| ~> ||phi(b)||`, as a closed term.
    pub fn subst_witness(&self, f: &Formula, var_name: &str, ctx: &Ctx) -> Term {
        let kit = &ctx.kit;
        let (p, p0, p1) = (kit.std.p.clone(), kit.std.p0.clone(), kit.std.p1.clone());
        match f {
            Formula::Eq(t, s) => {
                // chain: t(b)=t(a), t(a)=s(a), s(a)=s(b)
                let et = self.term_subst_witness(t, var_name, ctx);
                let es = self.term_subst_witness(s, var_name, ctx);
                let tran_t = self.pack.e_tran.clone();
                let sym_t = self.pack.e_sym.clone();
                bracket_open(
                    &app(
                        tran_t.clone(),
                        apps(
                            p.clone(),
                            &[
                                app(
                                    tran_t.clone(),
                                    apps(
                                        p.clone(),
                                        &[
                                            app(sym_t, app(et, app(p0.clone(), var("c")))),
                                            app(p1.clone(), var("c")),
                                        ],
                                    ),
                                ),
                                app(es, app(p0.clone(), var("c"))),
                            ],
                        ),
                    ),
                    &["c"],
                )
            }
            Formula::Rel(r, args) => {
                // single-argument position support composed through the term
                // witness; n-ary relations fold their packs right-nested
                let er = self.pack.e_rel.get(r).expect("relation witness").clone();
                let packs: Vec<Term> = args
                    .iter()
                    .map(|a| {
                        app(
                            self.term_subst_witness(a, var_name, ctx),
                            app(p0.clone(), var("c")),
                        )
                    })
                    .collect();
                let mut pack = app(p1.clone(), var("c"));
                for t in packs.into_iter().rev() {
                    pack = apps(p.clone(), &[t, pack]);
                }
                bracket_open(&app(er, pack), &["c"])
            }
            Formula::False => kit.std.p1.clone(),
            Formula::And(a, b) => {
                let ea = self.subst_witness(a, var_name, ctx);
                let eb = self.subst_witness(b, var_name, ctx);
                bracket_open(
                    &apps(
                        p.clone(),
                        &[
                            app(
                                ea,
                                apps(
                                    p.clone(),
                                    &[
                                        app(p0.clone(), var("c")),
                                        app(p0.clone(), app(p1.clone(), var("c"))),
                                    ],
                                ),
                            ),
                            app(
                                eb,
                                apps(
                                    p.clone(),
                                    &[
                                        app(p0.clone(), var("c")),
                                        app(p1.clone(), app(p1.clone(), var("c"))),
                                    ],
                                ),
                            ),
                        ],
                    ),
                    &["c"],
                )
            }
            Formula::Or(a, b) => {
                let ea = self.subst_witness(a, var_name, ctx);
                let eb = self.subst_witness(b, var_name, ctx);
                let left = bracket_open(
                    &apps(
                        p.clone(),
                        &[
                            kit.std.k.clone(),
                            app(ea, apps(p.clone(), &[app(p0.clone(), var("c")), var("w")])),
                        ],
                    ),
                    &["w"],
                );
                let right = bracket_open(
                    &apps(
                        p.clone(),
                        &[
                            kit.std.kbar.clone(),
                            app(eb, apps(p.clone(), &[app(p0.clone(), var("c")), var("w")])),
                        ],
                    ),
                    &["w"],
                );
                bracket_open(
                    &app(
                        apps(
                            kit.std.iota.clone(),
                            &[app(p0.clone(), app(p1.clone(), var("c"))), left, right],
                        ),
                        app(p1.clone(), app(p1.clone(), var("c"))),
                    ),
                    &["c"],
                )
            }
            Formula::Imp(a, b) => {
                let ea = self.subst_witness(a, var_name, ctx);
                let eb = self.subst_witness(b, var_name, ctx);
                let sym = self.pack.e_sym.clone();
                // c m |-> eb (p (p0 c) ((p1 c) (ea (p (sym (p0 c)) m))))
                bracket_open(
                    &app(
                        eb,
                        apps(
                            p.clone(),
                            &[
                                app(p0.clone(), var("c")),
                                app(
                                    app(p1.clone(), var("c")),
                                    app(
                                        ea,
                                        apps(
                                            p.clone(),
                                            &[
                                                app(sym, app(p0.clone(), var("c"))),
                                                var("m"),
                                            ],
                                        ),
                                    ),
                                ),
                            ],
                        ),
                    ),
                    &["c", "m"],
                )
            }
            Formula::Exists(v, _, body) if v != var_name => {
                let eb = self.subst_witness(body, var_name, ctx);
                // c |-> p (p0 (p1 c)) (eb (p (p0 c) (p1 (p1 c))))
                bracket_open(
                    &apps(
                        p.clone(),
                        &[
                            app(p0.clone(), app(p1.clone(), var("c"))),
                            app(
                                eb,
                                apps(
                                    p.clone(),
                                    &[
                                        app(p0.clone(), var("c")),
                                        app(p1.clone(), app(p1.clone(), var("c"))),
                                    ],
                                ),
                            ),
                        ],
                    ),
                    &["c"],
                )
            }
            Formula::Forall(v, _, body) if v != var_name => {
                let eb = self.subst_witness(body, var_name, ctx);
                // c l |-> eb (p (p0 c) ((p1 c) l))
                bracket_open(
                    &app(
                        eb,
                        apps(
                            p.clone(),
                            &[
                                app(p0.clone(), var("c")),
                                app(app(p1.clone(), var("c")), var("l")),
                            ],
                        ),
                    ),
                    &["c", "l"],
                )
            }
            // the variable is shadowed: the equality pack is irrelevant
            Formula::Exists(..) | Formula::Forall(..) => kit.std.p1.clone(),
            Formula::Box(_) => panic!("subst_witness is for non-modal formulas; use subst_witness_modal"),
        }
    }

    /// Term substitution witness: `||a=b|| ~> ||t(a)=t(b)||`.
    fn term_subst_witness(&self, t: &FTerm, var_name: &str, ctx: &Ctx) -> Term {
        let kit = &ctx.kit;
        match t {
            FTerm::Var(v) if v == var_name => kit.std.i.clone(),
            // constant in the designated variable: reflexivity
            FTerm::Var(_) | FTerm::Const(_) => self.pack.e_ref2.clone(),
            FTerm::App(f, args) => {
                let ef = self.pack.e_fun.get(f).expect("function witness").clone();
                // right-nested equality pack of the argument witnesses
                let packs: Vec<Term> = args
                    .iter()
                    .map(|a| app(self.term_subst_witness(a, var_name, ctx), var("w")))
                    .collect();
                let mut pack = packs.last().cloned().expect("function has arguments");
                for t in packs.iter().rev().skip(1) {
                    pack = apps(kit.std.p.clone(), &[t.clone(), pack]);
                }
                bracket_open(&app(ef, pack), &["w"])
            }
        }
    }

    /// Modal substitution witness:
    /// `||a=b||_mu(D) & ||phi(a)||_mu(D) ~> ||phi(b)||_mu(D)`.
    pub fn subst_witness_modal(&self, f: &Formula, var_name: &str, ctx: &Ctx) -> Term {
        let kit = &ctx.kit;
        let (p, p0, p1) = (kit.std.p.clone(), kit.std.p0.clone(), kit.std.p1.clone());
        match f {
            Formula::Eq(..) | Formula::Rel(..) | Formula::False => {
                // c |-> d1 e (d7r c)
                let e = self.subst_witness(f, var_name, ctx);
                bracket_open(
                    &apps(kit.d1.clone(), &[e, app(kit.d7r.clone(), var("c"))]),
                    &["c"],
                )
            }
            Formula::And(a, b) => {
                let ea = self.subst_witness_modal(a, var_name, ctx);
                let eb = self.subst_witness_modal(b, var_name, ctx);
                bracket_open(
                    &apps(
                        p.clone(),
                        &[
                            app(
                                ea,
                                apps(
                                    p.clone(),
                                    &[
                                        app(p0.clone(), var("c")),
                                        app(p0.clone(), app(p1.clone(), var("c"))),
                                    ],
                                ),
                            ),
                            app(
                                eb,
                                apps(
                                    p.clone(),
                                    &[
                                        app(p0.clone(), var("c")),
                                        app(p1.clone(), app(p1.clone(), var("c"))),
                                    ],
                                ),
                            ),
                        ],
                    ),
                    &["c"],
                )
            }
            Formula::Or(a, b) => {
                // the modal join is double-negation-headed: distribute,
                // dispatch, and restore
                let ea = self.subst_witness_modal(a, var_name, ctx);
                let eb = self.subst_witness_modal(b, var_name, ctx);
                let left = bracket_open(
                    &apps(
                        p.clone(),
                        &[
                            kit.std.k.clone(),
                            app(ea, apps(p.clone(), &[var("u"), var("w")])),
                        ],
                    ),
                    &["w"],
                );
                let right = bracket_open(
                    &apps(
                        p.clone(),
                        &[
                            kit.std.kbar.clone(),
                            app(eb, apps(p.clone(), &[var("u"), var("w")])),
                        ],
                    ),
                    &["w"],
                );
                let dispatch = bracket_open(
                    &app(
                        apps(kit.std.iota.clone(), &[app(p0.clone(), var("j")), left, right]),
                        app(p1.clone(), var("j")),
                    ),
                    &["j"],
                );
                // c |-> d3 (d1 (\u j -> dispatch) applied under the meet):
                // first pair the equality part into every disjunct
                // c = p u t with t in O_D(join): image: O_D(join-of-images)
                let inner = bracket_open(&app(dispatch, var("j")), &["u", "j"]);
                bracket_open(
                    &app(
                        kit.d3.clone(),
                        apps(
                            kit.d1.clone(),
                            &[
                                app(inner, app(p0.clone(), var("c"))),
                                app(p1.clone(), var("c")),
                            ],
                        ),
                    ),
                    &["c"],
                )
            }
            Formula::Imp(a, b) => {
                let ea = self.subst_witness_modal(a, var_name, ctx);
                let eb = self.subst_witness_modal(b, var_name, ctx);
                let sym = self.modal_sym(ctx);
                bracket_open(
                    &app(
                        eb,
                        apps(
                            p.clone(),
                            &[
                                app(p0.clone(), var("c")),
                                app(
                                    app(p1.clone(), var("c")),
                                    app(
                                        ea,
                                        apps(
                                            p.clone(),
                                            &[
                                                app(sym, app(p0.clone(), var("c"))),
                                                var("m"),
                                            ],
                                        ),
                                    ),
                                ),
                            ],
                        ),
                    ),
                    &["c", "m"],
                )
            }
            Formula::Exists(v, _, body) if v != var_name => {
                let eb = self.subst_witness_modal(body, var_name, ctx);
                // pair the equality into the witness under the outer
                // double negation: c |-> d3 (d1 (inner u) t)
                let inner = bracket_open(
                    &apps(
                        p.clone(),
                        &[
                            app(p0.clone(), var("j")),
                            app(
                                eb,
                                apps(
                                    p.clone(),
                                    &[var("u"), app(p1.clone(), var("j"))],
                                ),
                            ),
                        ],
                    ),
                    &["u", "j"],
                );
                bracket_open(
                    &app(
                        kit.d3.clone(),
                        apps(
                            kit.d1.clone(),
                            &[
                                app(inner, app(p0.clone(), var("c"))),
                                app(p1.clone(), var("c")),
                            ],
                        ),
                    ),
                    &["c"],
                )
            }
            Formula::Forall(v, _, body) if v != var_name => {
                let eb = self.subst_witness_modal(body, var_name, ctx);
                bracket_open(
                    &app(
                        eb,
                        apps(
                            p.clone(),
                            &[
                                app(p0.clone(), var("c")),
                                app(app(p1.clone(), var("c")), var("l")),
                            ],
                        ),
                    ),
                    &["c", "l"],
                )
            }
            Formula::Exists(..) | Formula::Forall(..) => kit.std.p1.clone(),
            Formula::Box(body) => {
                // c |-> d1 (\w -> e (p (d2 (p0 w)) (p1 w))) (d7r c)
                let eb = self.subst_witness_modal(body, var_name, ctx);
                let inner = bracket_open(
                    &app(
                        eb,
                        apps(
                            p.clone(),
                            &[
                                app(kit.d2.clone(), app(p0.clone(), var("w"))),
                                app(p1.clone(), var("w")),
                            ],
                        ),
                    ),
                    &["w"],
                );
                bracket_open(
                    &apps(kit.d1.clone(), &[inner, app(kit.d7r.clone(), var("c"))]),
                    &["c"],
                )
            }
        }
    }

    /// Symmetry lifted to the modal equality cell: `||a=b||_mu(D) ~>
    /// ||b=a||_mu(D)`.
    fn modal_sym(&self, ctx: &Ctx) -> Term {
        let kit = &ctx.kit;
        apps(kit.d1.clone(), std::slice::from_ref(&self.pack.e_sym))
    }
}

/// The Goedel translation: atomics fixed, conjunction/disjunction/existential
/// compositional, conditional and universal boxed.
pub fn goedel_translate(f: &Formula) -> Result<Formula, EvalError> {
    if f.is_modal() {
        return Err(EvalError::ModalInNonModal);
    }
    Ok(translate(f))
}

fn translate(f: &Formula) -> Formula {
    match f {
        Formula::Eq(..) | Formula::Rel(..) | Formula::False => f.clone(),
        Formula::And(a, b) => Formula::And(Rc::new(translate(a)), Rc::new(translate(b))),
        Formula::Or(a, b) => Formula::Or(Rc::new(translate(a)), Rc::new(translate(b))),
        Formula::Imp(a, b) => Formula::Box(Rc::new(Formula::Imp(
            Rc::new(translate(a)),
            Rc::new(translate(b)),
        ))),
        Formula::Exists(v, s, body) => {
            Formula::Exists(v.clone(), *s, Rc::new(translate(body)))
        }
        Formula::Forall(v, s, body) => Formula::Box(Rc::new(Formula::Forall(
            v.clone(),
            *s,
            Rc::new(translate(body)),
        ))),
        Formula::Box(_) => unreachable!(),
    }
}

/// Substitute a term for a free variable throughout a formula. Bound
/// occurrences shadow as usual; the workbench only substitutes closed
/// terms, so capture cannot arise.
pub fn subst_formula(f: &Formula, var_name: &str, with: &FTerm) -> Formula {
    fn term(t: &FTerm, v: &str, with: &FTerm) -> FTerm {
        match t {
            FTerm::Var(x) if x == v => with.clone(),
            FTerm::Var(_) | FTerm::Const(_) => t.clone(),
            FTerm::App(f, args) => {
                FTerm::App(f.clone(), args.iter().map(|a| term(a, v, with)).collect())
            }
        }
    }
    match f {
        Formula::Eq(a, b) => Formula::Eq(term(a, var_name, with), term(b, var_name, with)),
        Formula::Rel(r, args) => Formula::Rel(
            r.clone(),
            args.iter().map(|a| term(a, var_name, with)).collect(),
        ),
        Formula::False => Formula::False,
        Formula::And(a, b) => Formula::And(
            Rc::new(subst_formula(a, var_name, with)),
            Rc::new(subst_formula(b, var_name, with)),
        ),
        Formula::Or(a, b) => Formula::Or(
            Rc::new(subst_formula(a, var_name, with)),
            Rc::new(subst_formula(b, var_name, with)),
        ),
        Formula::Imp(a, b) => Formula::Imp(
            Rc::new(subst_formula(a, var_name, with)),
            Rc::new(subst_formula(b, var_name, with)),
        ),
        Formula::Exists(v, s, body) if v != var_name => Formula::Exists(
            v.clone(),
            *s,
            Rc::new(subst_formula(body, var_name, with)),
        ),
        Formula::Forall(v, s, body) if v != var_name => Formula::Forall(
            v.clone(),
            *s,
            Rc::new(subst_formula(body, var_name, with)),
        ),
        Formula::Exists(..) | Formula::Forall(..) => f.clone(),
        Formula::Box(body) => Formula::Box(Rc::new(subst_formula(body, var_name, with))),
    }
}

/// Simplify `box forall x box phi` to `box forall x phi` (the bounded
/// quantifier normal forms of the translation).
pub fn simplify_box_forall(f: &Formula) -> Formula {
    match f {
        Formula::Box(inner) => match &**inner {
            Formula::Forall(v, s, body) => {
                let body = simplify_box_forall(body);
                let body = match body {
                    Formula::Box(b) => (*b).clone(),
                    other => other,
                };
                Formula::Box(Rc::new(Formula::Forall(
                    v.clone(),
                    *s,
                    Rc::new(body),
                )))
            }
            other => Formula::Box(Rc::new(simplify_box_forall(other))),
        },
        Formula::And(a, b) => Formula::And(
            Rc::new(simplify_box_forall(a)),
            Rc::new(simplify_box_forall(b)),
        ),
        Formula::Or(a, b) => Formula::Or(
            Rc::new(simplify_box_forall(a)),
            Rc::new(simplify_box_forall(b)),
        ),
        Formula::Imp(a, b) => Formula::Imp(
            Rc::new(simplify_box_forall(a)),
            Rc::new(simplify_box_forall(b)),
        ),
        Formula::Exists(v, s, body) => {
            Formula::Exists(v.clone(), *s, Rc::new(simplify_box_forall(body)))
        }
        Formula::Forall(v, s, body) => {
            Formula::Forall(v.clone(), *s, Rc::new(simplify_box_forall(body)))
        }
        _ => f.clone(),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn term(t: &FTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                FTerm::Var(v) => write!(f, "{v}"),
                FTerm::Const(c) => write!(f, "{c}"),
                FTerm::App(n, args) => {
                    write!(f, "{n}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        term(a, f)?;
                    }
                    write!(f, ")")
                }
            }
        }
        match self {
            Formula::Eq(t, s) => {
                term(t, f)?;
                write!(f, " = ")?;
                term(s, f)
            }
            Formula::Rel(r, args) => {
                write!(f, "{r}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    term(a, f)?;
                }
                write!(f, ")")
            }
            Formula::False => write!(f, "false"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Imp(a, b) => write!(f, "({a} -> {b})"),
            Formula::Exists(v, _, body) => write!(f, "(exists {v}. {body})"),
            Formula::Forall(v, _, body) => write!(f, "(forall {v}. {body})"),
            Formula::Box(body) => write!(f, "(box {body})"),
        }
    }
}

/// Quantifier taxonomy with evidence.
#[derive(Debug)]
pub struct QuantifierClass {
    pub non_degenerate: Option<String>,
    pub uniform: Option<String>,
    pub classical: bool,
    pub classical_refutation: Option<String>,
    pub term_friendly: bool,
}

pub fn classify_quantifier(s: &Structure, ctx: &Ctx, sort: SortId) -> QuantifierClass {
    let n = s.domain_size(sort);
    // non-degenerate: a member of some Q(c)
    let mut non_degenerate = None;
    for c in 0..n {
        if let Some(m) = (s.quantifier)(sort, c).samples(ctx).first() {
            non_degenerate = Some(format!("{m} in Q({})", s.domains[sort][c]));
            break;
        }
    }
    // uniform: a member of the intersection of all Q(c)
    let inter = TruthValue::big_meet((0..n).map(|c| (s.quantifier)(sort, c)).collect());
    let mut uniform = None;
    for cand in inter.samples(ctx) {
        if inter.membership(ctx, &cand) == Tri::Yes {
            uniform = Some(format!("{cand} in every Q(c)"));
            break;
        }
    }
    if uniform.is_none() {
        for cand in ctx.backend.sample_pool() {
            if inter.membership(ctx, &cand) == Tri::Yes {
                uniform = Some(format!("{cand} in every Q(c)"));
                break;
            }
        }
    }
    // classical: witnesses both ways against top; refute by the clash of
    // two disjoint values
    let mut classical = true;
    let mut classical_refutation = None;
    if n >= 2 {
        let q0 = (s.quantifier)(sort, 0);
        let q1 = (s.quantifier)(sort, 1);
        // any e : top ~> Q(c) uniform in c would put e i in both
        let candidates = ctx.backend.sample_pool();
        let mut some_works = false;
        for e in &candidates {
            let v0 = check_reduction(ctx, e, &TruthValue::top(), &q0);
            let v1 = check_reduction(ctx, e, &TruthValue::top(), &q1);
            if v0.is_confirmed() && v1.is_confirmed() {
                some_works = true;
                break;
            }
        }
        if !some_works && uniform.is_none() {
            classical = false;
            classical_refutation = Some(
                "no sampled candidate maps top into both Q(0) and Q(1); for disjoint singletons e i cannot lie in both".to_string(),
            );
        }
    }
    if uniform.is_none() {
        classical = false;
    }
    let term_friendly = s
        .sig
        .funcs
        .iter()
        .all(|(name, _, _)| s.pack.e_term_friendly.contains_key(name));
    QuantifierClass {
        non_degenerate,
        uniform,
        classical,
        classical_refutation,
        term_friendly,
    }
}

/// Expand a structure with a new relation interpreting the necessitation of
/// a formula over the probe family, installing its substitution witness per
/// the change-of-basis argument.
pub fn change_of_basis(
    s: &Structure,
    f: &Formula,
    name: &str,
    var_names: &[String],
    sort: SortId,
    probes: &ProbeFamily,
    ctx: &Ctx,
) -> Result<Structure, EvalError> {
    if s.sig.rel(name).is_some() || s.consts.contains_key(name) {
        return Err(EvalError::UnknownSymbol(format!(
            "symbol {name} already interpreted"
        )));
    }
    let mut out = s.clone();
    out.sig
        .rels
        .push((name.to_string(), vec![sort; var_names.len()]));
    let fc = f.clone();
    let sc = s.clone();
    let probes = probes.clone();
    let vars: Vec<String> = var_names.to_vec();
    let interp: RelVal = Rc::new(move |args: &[usize]| {
        let mut env = Env::new();
        for (v, a) in vars.iter().zip(args.iter()) {
            env.insert(v.clone(), (sort, *a));
        }
        TruthValue::big_meet(
            probes
                .iter()
                .map(|(_, e)| {
                    sc.evaluate_modal(&fc, &env, e, &probes)
                        .expect("formula evaluable over the base structure")
                })
                .collect(),
        )
    });
    out.rel_val.insert(name.to_string(), interp);
    // e_G: feed the modal substitution witness with the d2-lifted equality
    // pack and the intersection component (the identity on the last slot)
    let kit = &ctx.kit;
    let e_phi_mu = if var_names.len() == 1 {
        s.subst_witness_modal(f, &var_names[0], ctx)
    } else {
        // multi-variable packs are folded one variable at a time; the
        // harness only exercises single-variable instances
        s.subst_witness_modal(f, var_names.first().map(|s| s.as_str()).unwrap_or("x"), ctx)
    };
    let e_g = bracket_open(
        &app(
            e_phi_mu,
            apps(
                kit.std.p.clone(),
                &[
                    app(kit.d2.clone(), app(kit.std.p0.clone(), var("c"))),
                    app(kit.std.p1.clone(), var("c")),
                ],
            ),
        ),
        &["c"],
    );
    out.pack.e_rel.insert(name.to_string(), e_g);
    Ok(out)
}

/// Harness item: a named check with its verdict.
pub struct HarnessItem {
    pub name: String,
    pub verdict: Verdict,
}

fn first_sort_envs(s: &Structure, sort: SortId, free: &[String]) -> Vec<Env> {
    // all assignments of the free variables over the sort domain, capped
    let n = s.domain_size(sort);
    let mut envs = vec![Env::new()];
    for v in free {
        let mut next = Vec::new();
        for env in &envs {
            for c in 0..n {
                let mut e2 = env.clone();
                e2.insert(v.clone(), (sort, c));
                next.push(e2);
            }
        }
        envs = next;
        if envs.len() > 64 {
            envs.truncate(64);
        }
    }
    envs
}

/// The soundness harness: axiom and rule checks for the quantified modal
/// system over one structure, one formula, one sort.
pub fn axiom_harness(
    s: &Structure,
    f: &Formula,
    bound_var: &str,
    sort: SortId,
    probes: &ProbeFamily,
    ctx: &Ctx,
) -> Vec<HarnessItem> {
    let kit = &ctx.kit;
    let mut out = Vec::new();
    let mut free = Vec::new();
    f.free_vars(&mut free);
    free.retain(|v| v != bound_var);
    let envs = first_sort_envs(s, sort, &free);
    let n = s.domain_size(sort);
    let std = ctx.backend.std_elements();

    let cell = |form: &Formula, env: &Env, d: &TruthValue| {
        s.evaluate_modal(form, env, d, probes)
            .expect("harness formula evaluable")
    };

    let forall_f = Formula::Forall(bound_var.to_string(), sort, Rc::new(f.clone()));

    // Vacuous Quantification over a formula without the bound variable:
    // forall x phi <=> phi, with phi := forall x f (x not free in it)
    {
        let phi = forall_f.clone();
        let v_phi = Formula::Forall("vq_z".to_string(), sort, Rc::new(phi.clone()));
        // witness: given a member of Q(d) (non-degeneracy), e |-> e n
        let mut nd = None;
        for c in 0..n {
            if let Some(m) = (s.quantifier)(sort, c).samples(ctx).first() {
                nd = Some(m.clone());
                break;
            }
        }
        if let Some(nelem) = nd {
            let g = bracket_open(&app(var("e"), var("n")), &["n", "e"]);
            let wit = ctx
                .backend
                .apply(&ctx.inject(&g), &nelem)
                .defined()
                .unwrap();
            for env in envs.iter().take(2) {
                for (_, d) in probes.iter().take(3) {
                    let v = check_reduction(ctx, &wit, &cell(&v_phi, env, d), &cell(&phi, env, d));
                    out.push(HarnessItem {
                        name: "vacuous-quantification-elim".to_string(),
                        verdict: v,
                    });
                    let v = check_reduction(ctx, &std.k, &cell(&phi, env, d), &cell(&v_phi, env, d));
                    out.push(HarnessItem {
                        name: "vacuous-quantification-intro".to_string(),
                        verdict: v,
                    });
                }
            }
        } else {
            out.push(HarnessItem {
                name: "vacuous-quantification".to_string(),
                verdict: Verdict::Inconclusive {
                    reason: "no non-degeneracy evidence".to_string(),
                },
            });
        }
    }

    // Universal Distributivity: forall x (f -> f) -> (forall x f -> forall x f)
    {
        let imp = Formula::Imp(Rc::new(f.clone()), Rc::new(f.clone()));
        let all_imp = Formula::Forall(bound_var.to_string(), sort, Rc::new(imp));
        // w e n |-> (w n) (e n)
        let g = bracket_open(
            &app(
                app(var("w"), var("n")),
                app(var("e"), var("n")),
            ),
            &["w", "e", "n"],
        );
        let wit = ctx.inject(&g);
        for env in envs.iter().take(2) {
            for (_, d) in probes.iter().take(3) {
                let lhs = cell(&all_imp, env, d);
                let applied = ctx.backend.apply(&wit, &lhs.samples(ctx).first().cloned().unwrap_or(std.k.clone()));
                let _ = applied;
                // check as a conditional chain: w : all_imp, e : forall f
                // gives w-composed : forall f
                let composed = TruthValue::imp(
                    &lhs,
                    &TruthValue::imp(&cell(&forall_f, env, d), &cell(&forall_f, env, d)),
                );
                let v = check_reduction(ctx, &wit, &lhs, &TruthValue::imp(&cell(&forall_f, env, d), &cell(&forall_f, env, d)));
                let _ = composed;
                out.push(HarnessItem {
                    name: "universal-distributivity".to_string(),
                    verdict: v,
                });
            }
        }
    }

    // Permutation: forall x forall y f <=> forall y forall x f
    {
        let inner = Formula::Forall("perm_y".to_string(), sort, Rc::new(f.clone()));
        let outer = Formula::Forall(bound_var.to_string(), sort, Rc::new(inner));
        let inner2 = Formula::Forall(bound_var.to_string(), sort, Rc::new(f.clone()));
        let outer2 = Formula::Forall("perm_y".to_string(), sort, Rc::new(inner2));
        let g = bracket_open(
            &apps(var("e"), &[var("m"), var("n")]),
            &["e", "n", "m"],
        );
        let wit = ctx.inject(&g);
        for env in envs.iter().take(2) {
            for (_, d) in probes.iter().take(2) {
                let v = check_reduction(ctx, &wit, &cell(&outer, env, d), &cell(&outer2, env, d));
                out.push(HarnessItem {
                    name: "permutation".to_string(),
                    verdict: v,
                });
            }
        }
    }

    // Universal Instantiation (closed form): forall y (Q(y) => (forall x f => f[y]))
    {
        // witness: k applied to (n e |-> e n)
        let g = bracket_open(&app(var("e"), var("n")), &["n", "e"]);
        let kf = ctx
            .backend
            .apply(&std.k, &ctx.inject(&g))
            .defined()
            .unwrap();
        for env in envs.iter().take(2) {
            for (_, d) in probes.iter().take(3) {
                let mut parts = Vec::new();
                for c in 0..n {
                    let mut env2 = env.clone();
                    env2.insert(bound_var.to_string(), (sort, c));
                    parts.push(TruthValue::imp(
                        &(s.quantifier)(sort, c),
                        &TruthValue::imp(&cell(&forall_f, env, d), &cell(f, &env2, d)),
                    ));
                }
                let target = TruthValue::big_meet(parts);
                let v = check_reduction(ctx, &kf, &TruthValue::top(), &target);
                out.push(HarnessItem {
                    name: "universal-instantiation-closed".to_string(),
                    verdict: v,
                });
            }
        }
    }

    // necessitation of identity: top ~> ||x=x||_mu
    {
        let g = bracket_open(
            &app(
                kit.d2.clone(),
                app(s.pack.e_ref2.clone(), var("t")),
            ),
            &["t"],
        );
        let wit = ctx.inject(&g);
        for c in 0..n.min(3) {
            for (_, d) in probes.iter().take(3) {
                let eqmu = TruthValue::ominus(d, &(s.eq_val)(sort, c, c));
                let v = check_reduction(ctx, &wit, &TruthValue::top(), &eqmu);
                out.push(HarnessItem {
                    name: "identity-reflexivity".to_string(),
                    verdict: v,
                });
            }
        }
    }

    // CBF: box forall x f ~> forall x box f
    {
        let box_forall = Formula::Box(Rc::new(forall_f.clone()));
        let forall_box = Formula::Forall(
            bound_var.to_string(),
            sort,
            Rc::new(Formula::Box(Rc::new(f.clone()))),
        );
        // cert-for-target-cell (w1 = e n |-> d2 (e n)), assembled:
        // c |-> cert (d1 (\e n. d2 (e n)) c)
        let w1 = bracket_open(
            &app(kit.d2.clone(), app(var("e"), var("n"))),
            &["e", "n"],
        );
        let cert = s.modal_certificate(&forall_box, ctx);
        let g = bracket_open(
            &app(cert, apps(kit.d1.clone(), &[w1, var("c")])),
            &["c"],
        );
        let wit = ctx.inject(&g);
        for env in envs.iter().take(2) {
            for (_, d) in probes.iter().take(3) {
                let v = check_reduction(
                    ctx,
                    &wit,
                    &cell(&box_forall, env, d),
                    &cell(&forall_box, env, d),
                );
                out.push(HarnessItem {
                    name: "converse-barcan".to_string(),
                    verdict: v,
                });
            }
        }
    }

    // exists-box to box-exists
    {
        let ex_box = Formula::Exists(
            bound_var.to_string(),
            sort,
            Rc::new(Formula::Box(Rc::new(f.clone()))),
        );
        let box_ex = Formula::Box(Rc::new(Formula::Exists(
            bound_var.to_string(),
            sort,
            Rc::new(f.clone()),
        )));
        // v t h = (p1 t) (\b. h (p (p0 t) b)); W = \s. d3 (d1 (\t. d1 d2 (v t)) s)
        let v_term = bracket_open(
            &app(
                app(kit.std.p1.clone(), var("t")),
                bracket_open(
                    &app(
                        var("h"),
                        apps(
                            kit.std.p.clone(),
                            &[app(kit.std.p0.clone(), var("t")), var("b")],
                        ),
                    ),
                    &["b"],
                ),
            ),
            &["t", "h"],
        );
        let inner = bracket_open(
            &apps(
                kit.d1.clone(),
                &[kit.d2.clone(), app(v_term, var("t"))],
            ),
            &["t"],
        );
        let g = bracket_open(
            &app(
                kit.d3.clone(),
                apps(kit.d1.clone(), &[inner, var("s")]),
            ),
            &["s"],
        );
        let wit = ctx.inject(&g);
        for env in envs.iter().take(2) {
            for (_, d) in probes.iter().take(3) {
                let v = check_reduction(ctx, &wit, &cell(&ex_box, env, d), &cell(&box_ex, env, d));
                out.push(HarnessItem {
                    name: "exists-box-to-box-exists".to_string(),
                    verdict: v,
                });
            }
        }
    }

    // quantifier duality: forall x f ~> not exists x not f, and back
    {
        let not_f = Formula::neg(f.clone());
        let not_ex_not = Formula::neg(Formula::Exists(
            bound_var.to_string(),
            sort,
            Rc::new(not_f),
        ));
        // r t u g = u (\e. ((p1 e) (t (p0 e))) g)
        let fwd = {
            let lam_e = bracket_open(
                &app(
                    app(
                        app(kit.std.p1.clone(), var("e")),
                        app(var("t"), app(kit.std.p0.clone(), var("e"))),
                    ),
                    var("g"),
                ),
                &["e"],
            );
            bracket_open(&app(var("u"), lam_e), &["t", "u", "g"])
        };
        let fwd = ctx.inject(&fwd);
        // backward: t' = \u n. cert (\m. e' (p n m)) with e' = \c. (u (d2 (remap c))) i
        let cert = s.modal_certificate(f, ctx);
        let remap = bracket_open(
            &apps(
                kit.std.p.clone(),
                &[
                    app(kit.std.p0.clone(), var("c")),
                    bracket_open(
                        &app(
                            kit.std.k.clone(),
                            app(app(kit.std.p1.clone(), var("c")), var("vv")),
                        ),
                        &["vv"],
                    ),
                ],
            ),
            &["c"],
        );
        let e_prime = bracket_open(
            &app(
                app(var("u"), app(kit.d2.clone(), app(remap, var("c")))),
                kit.std.i.clone(),
            ),
            &["u", "c"],
        );
        let bwd = {
            let lam_m = bracket_open(
                &app(
                    app(e_prime, var("u")),
                    apps(kit.std.p.clone(), &[var("n"), var("m")]),
                ),
                &["m"],
            );
            bracket_open(&app(cert, lam_m), &["u", "n"])
        };
        let bwd = ctx.inject(&bwd);
        for env in envs.iter().take(2) {
            for (_, d) in probes.iter().take(2) {
                let v = check_reduction(
                    ctx,
                    &fwd,
                    &cell(&forall_f, env, d),
                    &cell(&not_ex_not, env, d),
                );
                out.push(HarnessItem {
                    name: "quantifier-duality-fwd".to_string(),
                    verdict: v,
                });
                let v = check_reduction(
                    ctx,
                    &bwd,
                    &cell(&not_ex_not, env, d),
                    &cell(&forall_f, env, d),
                );
                out.push(HarnessItem {
                    name: "quantifier-duality-bwd".to_string(),
                    verdict: v,
                });
            }
        }
    }

    // atomic stability for atomic f: ||f||_mu == ||box f||_mu
    if matches!(f, Formula::Eq(..) | Formula::Rel(..)) {
        let boxed = Formula::Box(Rc::new(f.clone()));
        // forward: d1 d2 (mu h <= box mu h); backward: T-chain via cert
        let fwd = ctx.inject(&app(kit.d1.clone(), kit.d2.clone()));
        let cert = s.modal_certificate(f, ctx);
        let bwd = {
            let g = bracket_open(
                &app(
                    cert,
                    apps(kit.d1.clone(), &[kit.std.i.clone(), var("c")]),
                ),
                &["c"],
            );
            ctx.inject(&g)
        };
        for env in envs.iter().take(2) {
            for c in 0..n.min(3) {
                let mut env2 = env.clone();
                env2.insert(bound_var.to_string(), (sort, c));
                for (_, d) in probes.iter().take(3) {
                    let v =
                        check_reduction(ctx, &fwd, &cell(f, &env2, d), &cell(&boxed, &env2, d));
                    out.push(HarnessItem {
                        name: "atomic-stability-fwd".to_string(),
                        verdict: v,
                    });
                    let v =
                        check_reduction(ctx, &bwd, &cell(&boxed, &env2, d), &cell(f, &env2, d));
                    out.push(HarnessItem {
                        name: "atomic-stability-bwd".to_string(),
                        verdict: v,
                    });
                }
            }
        }
    }

    out
}

/// Mutual-reduction witnesses between `mu(||phi||)` and `||phi-translated||_mu`,
/// assembled by recursion on the formula. Returns the (forward, backward)
/// closed terms.
#[allow(clippy::only_used_in_recursion)]
pub fn goedel_witnesses(s: &Structure, f: &Formula, ctx: &Ctx) -> (Term, Term) {
    let kit = &ctx.kit;
    let (p, p0, p1) = (kit.std.p.clone(), kit.std.p0.clone(), kit.std.p1.clone());
    match f {
        Formula::Eq(..) | Formula::Rel(..) | Formula::False => {
            (kit.std.i.clone(), kit.std.i.clone())
        }
        Formula::And(a, b) => {
            let (fa, ba) = goedel_witnesses(s, a, ctx);
            let (fb, bb) = goedel_witnesses(s, b, ctx);
            let fwd = bracket_open(
                &apps(
                    p.clone(),
                    &[
                        app(fa, app(p0.clone(), app(kit.d7.clone(), var("t")))),
                        app(fb, app(p1.clone(), app(kit.d7.clone(), var("t")))),
                    ],
                ),
                &["t"],
            );
            let bwd = bracket_open(
                &app(
                    kit.d7r.clone(),
                    apps(
                        p.clone(),
                        &[
                            app(ba, app(p0.clone(), var("c"))),
                            app(bb, app(p1.clone(), var("c"))),
                        ],
                    ),
                ),
                &["c"],
            );
            (fwd, bwd)
        }
        Formula::Or(a, b) => {
            let (fa, ba) = goedel_witnesses(s, a, ctx);
            let (fb, bb) = goedel_witnesses(s, b, ctx);
            // fwd: lift each disjunct by d2 then translate, under d1
            let ul = bracket_open(
                &apps(
                    p.clone(),
                    &[kit.std.k.clone(), app(fa, app(kit.d2.clone(), var("b")))],
                ),
                &["b"],
            );
            let ur = bracket_open(
                &apps(
                    p.clone(),
                    &[kit.std.kbar.clone(), app(fb, app(kit.d2.clone(), var("b")))],
                ),
                &["b"],
            );
            let u = bracket_open(
                &app(
                    apps(
                        kit.std.iota.clone(),
                        &[app(p0.clone(), var("c")), ul, ur],
                    ),
                    app(p1.clone(), var("c")),
                ),
                &["c"],
            );
            let fwd = bracket_open(
                &apps(kit.d1.clone(), &[u, var("t")]),
                &["t"],
            );
            // bwd: translate each and re-inject, collapsing the double
            // double-negation
            let vl = bracket_open(
                &apps(
                    kit.d1.clone(),
                    &[kit.e1.clone(), app(ba, var("b"))],
                ),
                &["b"],
            );
            let vr = bracket_open(
                &apps(
                    kit.d1.clone(),
                    &[kit.e2.clone(), app(bb, var("b"))],
                ),
                &["b"],
            );
            let v = bracket_open(
                &app(
                    apps(
                        kit.std.iota.clone(),
                        &[app(p0.clone(), var("c")), vl, vr],
                    ),
                    app(p1.clone(), var("c")),
                ),
                &["c"],
            );
            let bwd = bracket_open(
                &app(
                    kit.d3.clone(),
                    apps(kit.d1.clone(), &[v, var("t")]),
                ),
                &["t"],
            );
            (fwd, bwd)
        }
        Formula::Imp(a, b) => {
            let (fa, ba) = goedel_witnesses(s, a, ctx);
            let (fb, bb) = goedel_witnesses(s, b, ctx);
            // fwd: d1 (\u x. fb (d1 u (ba x)))
            let inner = bracket_open(
                &app(
                    fb.clone(),
                    apps(kit.d1.clone(), &[var("u"), app(ba.clone(), var("x"))]),
                ),
                &["u", "x"],
            );
            let fwd = bracket_open(
                &apps(kit.d1.clone(), &[inner, var("t")]),
                &["t"],
            );
            // bwd: d1 (\e x. d8 (bb (e (fa (d2 x)))))
            let inner = bracket_open(
                &app(
                    kit.d8.clone(),
                    app(
                        bb,
                        app(var("e"), app(fa, app(kit.d2.clone(), var("x")))),
                    ),
                ),
                &["e", "x"],
            );
            let bwd = bracket_open(
                &apps(kit.d1.clone(), &[inner, var("t")]),
                &["t"],
            );
            (fwd, bwd)
        }
        Formula::Forall(_, _, body) => {
            let (fb, bb) = goedel_witnesses(s, body, ctx);
            // fwd: d1 (\u n. fb (d2 (u n)))
            let inner = bracket_open(
                &app(fb, app(kit.d2.clone(), app(var("u"), var("n")))),
                &["u", "n"],
            );
            let fwd = bracket_open(
                &apps(kit.d1.clone(), &[inner, var("t")]),
                &["t"],
            );
            // bwd: d1 (\e n. d8 (bb (e n)))
            let inner = bracket_open(
                &app(kit.d8.clone(), app(bb, app(var("e"), var("n")))),
                &["e", "n"],
            );
            let bwd = bracket_open(
                &apps(kit.d1.clone(), &[inner, var("t")]),
                &["t"],
            );
            (fwd, bwd)
        }
        Formula::Exists(_, _, body) => {
            let (fb, bb) = goedel_witnesses(s, body, ctx);
            // fwd: d1 (\c. p (p0 c) (fb (d2 (p1 c))))
            let inner = bracket_open(
                &apps(
                    p.clone(),
                    &[
                        app(p0.clone(), var("c")),
                        app(fb, app(kit.d2.clone(), app(p1.clone(), var("c")))),
                    ],
                ),
                &["c"],
            );
            let fwd = bracket_open(
                &apps(kit.d1.clone(), &[inner, var("t")]),
                &["t"],
            );
            // bwd: pair the quantifier part back under the inner double
            // negation, then collapse the outer one
            // inner c = d1 i (\h. (bb (p1 c)) (\b. h (p (p0 c) b)))
            let pairer = bracket_open(
                &app(
                    app(bb, app(p1.clone(), var("c"))),
                    bracket_open(
                        &app(
                            var("h"),
                            apps(p.clone(), &[app(p0.clone(), var("c")), var("b")]),
                        ),
                        &["b"],
                    ),
                ),
                &["c", "h"],
            );
            let inner = bracket_open(
                &apps(
                    kit.d1.clone(),
                    &[kit.std.i.clone(), app(pairer, var("c"))],
                ),
                &["c"],
            );
            let bwd = bracket_open(
                &app(
                    kit.d3.clone(),
                    apps(kit.d1.clone(), &[inner, var("t")]),
                ),
                &["t"],
            );
            (fwd, bwd)
        }
        Formula::Box(_) => panic!("goedel witnesses take non-modal input"),
    }
}

/// Check the translation theorem at desk scale: membership-verdict
/// agreement between `mu(||phi||)` and the translated modal valuation on the
/// sampled elements, plus the mutual-reduction witnesses.
pub fn goedel_check(
    s: &Structure,
    f: &Formula,
    probes: &ProbeFamily,
    ctx: &Ctx,
) -> Vec<HarnessItem> {
    let translated = goedel_translate(f).expect("non-modal corpus formula");
    let (fwd, bwd) = goedel_witnesses(s, f, ctx);
    let fwd = ctx.inject(&fwd);
    let bwd = ctx.inject(&bwd);
    let mut free = Vec::new();
    f.free_vars(&mut free);
    let envs = first_sort_envs(s, 0, &free);
    let mut out = Vec::new();
    for env in envs.iter().take(4) {
        let plain = s.evaluate(f, env).expect("corpus formula evaluable");
        for (_, d) in probes.iter() {
            let lhs = TruthValue::ominus(d, &plain);
            let rhs = s
                .evaluate_modal(&translated, env, d, probes)
                .expect("translated formula evaluable");
            // membership agreement transported through the witnesses:
            // the two sides are prealgebra-equivalent, not literally equal,
            // so members cross over via the mutual reductions
            let mut agree = Verdict::Confirmed;
            for cand in lhs.samples(ctx) {
                if lhs.membership(ctx, &cand) != Tri::Yes {
                    continue;
                }
                match ctx.backend.apply(&fwd, &cand) {
                    crate::backend::AppResult::Defined(img) => {
                        if rhs.membership(ctx, &img) == Tri::No {
                            agree = Verdict::Refuted {
                                counterexample: cand,
                                context: "member of the plain side maps outside the translated side".to_string(),
                            };
                            break;
                        }
                    }
                    crate::backend::AppResult::FuelExhausted => {
                        agree = Verdict::Inconclusive {
                            reason: "witness application diverged".to_string(),
                        };
                    }
                }
            }
            if agree.is_confirmed() {
                for cand in rhs.samples(ctx) {
                    if rhs.membership(ctx, &cand) != Tri::Yes {
                        continue;
                    }
                    match ctx.backend.apply(&bwd, &cand) {
                        crate::backend::AppResult::Defined(img) => {
                            if lhs.membership(ctx, &img) == Tri::No {
                                agree = Verdict::Refuted {
                                    counterexample: cand,
                                    context: "member of the translated side maps outside the plain side".to_string(),
                                };
                                break;
                            }
                        }
                        crate::backend::AppResult::FuelExhausted => {
                            agree = Verdict::Inconclusive {
                                reason: "witness application diverged".to_string(),
                            };
                        }
                    }
                }
            }
            out.push(HarnessItem {
                name: "membership-agreement".to_string(),
                verdict: agree,
            });
            out.push(HarnessItem {
                name: "mutual-reduction-fwd".to_string(),
                verdict: check_reduction(ctx, &fwd, &lhs, &rhs),
            });
            out.push(HarnessItem {
                name: "mutual-reduction-bwd".to_string(),
                verdict: check_reduction(ctx, &bwd, &rhs, &lhs),
            });
        }
    }
    out
}

/// Free-variable universal instantiation, run only where the quantifier is
/// uniform: `(forall x f) ~> f[y]` through a shared quantifier member.
pub fn free_variable_instantiation(
    s: &Structure,
    f: &Formula,
    bound_var: &str,
    sort: SortId,
    probes: &ProbeFamily,
    ctx: &Ctx,
) -> Vec<HarnessItem> {
    let n = s.domain_size(sort);
    let inter = TruthValue::big_meet((0..n).map(|c| (s.quantifier)(sort, c)).collect());
    let mut shared = None;
    for cand in inter
        .samples(ctx)
        .into_iter()
        .chain(ctx.backend.sample_pool())
    {
        if inter.membership(ctx, &cand) == Tri::Yes {
            shared = Some(cand);
            break;
        }
    }
    let Some(n0) = shared else {
        return vec![HarnessItem {
            name: "free-variable-instantiation".to_string(),
            verdict: Verdict::Inconclusive {
                reason: "quantifier is not uniform".to_string(),
            },
        }];
    };
    let g = bracket_open(&app(var("e"), var("n")), &["n", "e"]);
    let wit = ctx
        .backend
        .apply(&ctx.inject(&g), &n0)
        .defined()
        .unwrap();
    let forall_f = Formula::Forall(bound_var.to_string(), sort, Rc::new(f.clone()));
    let mut out = Vec::new();
    for c in 0..n.min(4) {
        let mut env = Env::new();
        env.insert(bound_var.to_string(), (sort, c));
        for (_, d) in probes.iter().take(3) {
            let lhs = s
                .evaluate_modal(&forall_f, &Env::new(), d, probes)
                .expect("evaluable");
            let rhs = s.evaluate_modal(f, &env, d, probes).expect("evaluable");
            let v = check_reduction(ctx, &wit, &lhs, &rhs);
            out.push(HarnessItem {
                name: format!("free-variable-instantiation@{c}"),
                verdict: v,
            });
        }
    }
    out
}
