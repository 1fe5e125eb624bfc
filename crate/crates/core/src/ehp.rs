//! The elementary theory of Heyting prealgebras: quantifier-free formulas
//! over prealgebra terms, natural-deduction derivations with a structural
//! validator, and extraction of one combinatory realizer per derivation.
//!
//! Extraction interprets a derivation under hypotheses `G` as a closed term
//! expecting the left-nested pair pack of realizers for `G`; conjunction
//! introduction pairs, disjunction eliminates through the dispatcher
//! `iota x y z = x y z`, and the conditional curries the pack.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::comb::{app, apps, bracket_open, var, CombTerm, Term};
use crate::heyting::TruthValue;
use crate::wit::WitnessKit;

/// Terms of the Heyting prealgebra signature. `neg x` is sugar for
/// `x => bot` and `ominus d x` for `(x => d) => d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HTerm {
    Var(String),
    Top,
    Bot,
    Meet(Rc<HTerm>, Rc<HTerm>),
    Join(Rc<HTerm>, Rc<HTerm>),
    Imp(Rc<HTerm>, Rc<HTerm>),
}

pub fn hvar(n: &str) -> HTerm {
    HTerm::Var(n.to_string())
}

pub fn hmeet(a: HTerm, b: HTerm) -> HTerm {
    HTerm::Meet(Rc::new(a), Rc::new(b))
}

pub fn hjoin(a: HTerm, b: HTerm) -> HTerm {
    HTerm::Join(Rc::new(a), Rc::new(b))
}

pub fn himp(a: HTerm, b: HTerm) -> HTerm {
    HTerm::Imp(Rc::new(a), Rc::new(b))
}

pub fn hominus(d: HTerm, x: HTerm) -> HTerm {
    himp(himp(x, d.clone()), d)
}

impl HTerm {
    pub fn subst(&self, s: &Subst) -> HTerm {
        match self {
            HTerm::Var(v) => s.0.get(v).cloned().unwrap_or_else(|| self.clone()),
            HTerm::Top => HTerm::Top,
            HTerm::Bot => HTerm::Bot,
            HTerm::Meet(a, b) => hmeet(a.subst(s), b.subst(s)),
            HTerm::Join(a, b) => hjoin(a.subst(s), b.subst(s)),
            HTerm::Imp(a, b) => himp(a.subst(s), b.subst(s)),
        }
    }

    /// Interpret under an assignment of truth values to variables.
    pub fn eval(&self, env: &BTreeMap<String, TruthValue>) -> TruthValue {
        match self {
            HTerm::Var(v) => env
                .get(v)
                .cloned()
                .unwrap_or_else(|| panic!("unassigned prealgebra variable {v}")),
            HTerm::Top => TruthValue::top(),
            HTerm::Bot => TruthValue::bot(),
            HTerm::Meet(a, b) => TruthValue::meet(&a.eval(env), &b.eval(env)),
            HTerm::Join(a, b) => TruthValue::join(&a.eval(env), &b.eval(env)),
            HTerm::Imp(a, b) => TruthValue::imp(&a.eval(env), &b.eval(env)),
        }
    }
}

/// Quantifier-free formulas over reductions `t <= s`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EhpFormula {
    Le(HTerm, HTerm),
    And(Rc<EhpFormula>, Rc<EhpFormula>),
    Or(Rc<EhpFormula>, Rc<EhpFormula>),
    Implies(Rc<EhpFormula>, Rc<EhpFormula>),
    False,
}

pub fn fle(t: HTerm, s: HTerm) -> EhpFormula {
    EhpFormula::Le(t, s)
}

pub fn fand(a: EhpFormula, b: EhpFormula) -> EhpFormula {
    EhpFormula::And(Rc::new(a), Rc::new(b))
}

pub fn fimplies(a: EhpFormula, b: EhpFormula) -> EhpFormula {
    EhpFormula::Implies(Rc::new(a), Rc::new(b))
}

impl EhpFormula {
    pub fn subst(&self, s: &Subst) -> EhpFormula {
        match self {
            EhpFormula::Le(t, u) => EhpFormula::Le(t.subst(s), u.subst(s)),
            EhpFormula::And(a, b) => fand(a.subst(s), b.subst(s)),
            EhpFormula::Or(a, b) => EhpFormula::Or(Rc::new(a.subst(s)), Rc::new(b.subst(s))),
            EhpFormula::Implies(a, b) => fimplies(a.subst(s), b.subst(s)),
            EhpFormula::False => EhpFormula::False,
        }
    }
}

/// Substitution of prealgebra terms for variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst(pub BTreeMap<String, HTerm>);

impl Subst {
    pub fn one(v: &str, t: HTerm) -> Subst {
        let mut m = BTreeMap::new();
        m.insert(v.to_string(), t);
        Subst(m)
    }

    pub fn of(pairs: &[(&str, HTerm)]) -> Subst {
        Subst(
            pairs
                .iter()
                .map(|(v, t)| (v.to_string(), t.clone()))
                .collect(),
        )
    }
}

/// The axiom schemas of elementary Heyting prealgebras, stated over the
/// metavariables `x`, `y`, `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    MeetElimL,
    MeetElimR,
    JoinIntroL,
    JoinIntroR,
    TopIntro,
    BotElim,
    Refl,
    /// (x & y <= z) => (y <= x => z)
    ResidIn,
    /// (y <= x => z) => (x & y <= z)
    ResidOut,
    /// (x <= y) & (y <= z) => (x <= z)
    Trans,
    /// (x <= z) & (y <= z) => (x | y <= z)
    JoinElim,
    /// (z <= x) & (z <= y) => (z <= x & y)
    MeetIntro,
}

impl Axiom {
    pub fn template(self) -> EhpFormula {
        let (x, y, z) = (hvar("x"), hvar("y"), hvar("z"));
        match self {
            Axiom::MeetElimL => fle(hmeet(x.clone(), y), x),
            Axiom::MeetElimR => fle(hmeet(x, y.clone()), y),
            Axiom::JoinIntroL => fle(x.clone(), hjoin(x, y)),
            Axiom::JoinIntroR => fle(y.clone(), hjoin(x, y)),
            Axiom::TopIntro => fle(x, HTerm::Top),
            Axiom::BotElim => fle(HTerm::Bot, x),
            Axiom::Refl => fle(x.clone(), x),
            Axiom::ResidIn => fimplies(
                fle(hmeet(x.clone(), y.clone()), z.clone()),
                fle(y, himp(x, z)),
            ),
            Axiom::ResidOut => fimplies(
                fle(y.clone(), himp(x.clone(), z.clone())),
                fle(hmeet(x, y), z),
            ),
            Axiom::Trans => fimplies(
                fand(fle(x.clone(), y.clone()), fle(y, z.clone())),
                fle(x, z),
            ),
            Axiom::JoinElim => fimplies(
                fand(fle(x.clone(), z.clone()), fle(y.clone(), z.clone())),
                fle(hjoin(x, y), z),
            ),
            Axiom::MeetIntro => fimplies(
                fand(fle(z.clone(), x.clone()), fle(z.clone(), y.clone())),
                fle(z, hmeet(x, y)),
            ),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axiom::MeetElimL => "meet-elim-l",
            Axiom::MeetElimR => "meet-elim-r",
            Axiom::JoinIntroL => "join-intro-l",
            Axiom::JoinIntroR => "join-intro-r",
            Axiom::TopIntro => "top-intro",
            Axiom::BotElim => "bot-elim",
            Axiom::Refl => "refl",
            Axiom::ResidIn => "resid-in",
            Axiom::ResidOut => "resid-out",
            Axiom::Trans => "trans",
            Axiom::JoinElim => "join-elim",
            Axiom::MeetIntro => "meet-intro",
        }
    }

    pub fn by_name(s: &str) -> Option<Axiom> {
        use Axiom::*;
        Some(match s {
            "meet-elim-l" => MeetElimL,
            "meet-elim-r" => MeetElimR,
            "join-intro-l" => JoinIntroL,
            "join-intro-r" => JoinIntroR,
            "top-intro" => TopIntro,
            "bot-elim" => BotElim,
            "refl" => Refl,
            "resid-in" => ResidIn,
            "resid-out" => ResidOut,
            "trans" => Trans,
            "join-elim" => JoinElim,
            "meet-intro" => MeetIntro,
            _ => return None,
        })
    }

    /// The uniform realizer of each axiom schema, from the witness kit.
    fn realizer(self, kit: &WitnessKit) -> Term {
        match self {
            Axiom::MeetElimL => kit.e5.clone(),
            Axiom::MeetElimR => kit.e6.clone(),
            Axiom::JoinIntroL => kit.e1.clone(),
            Axiom::JoinIntroR => kit.e2.clone(),
            Axiom::TopIntro => kit.e7.clone(),
            Axiom::BotElim => kit.e8.clone(),
            Axiom::Refl => kit.e9.clone(),
            Axiom::ResidIn => kit.e11.clone(),
            Axiom::ResidOut => kit.e12.clone(),
            Axiom::Trans => kit.e10.clone(),
            Axiom::JoinElim => kit.e3.clone(),
            Axiom::MeetIntro => kit.e4.clone(),
        }
    }
}

/// Natural-deduction derivations. Hypotheses are de Bruijn indexed: 0 is
/// the innermost (most recent) hypothesis.
#[derive(Clone, Debug, PartialEq)]
pub enum Derivation {
    Hyp(usize),
    Ax(Axiom, Subst),
    AndIntro(Rc<Derivation>, Rc<Derivation>),
    AndElimL(Rc<Derivation>),
    AndElimR(Rc<Derivation>),
    OrIntroL(Rc<Derivation>, EhpFormula),
    OrIntroR(EhpFormula, Rc<Derivation>),
    OrElim {
        or: Rc<Derivation>,
        left: Rc<Derivation>,
        right: Rc<Derivation>,
    },
    ImpIntro {
        hyp: EhpFormula,
        body: Rc<Derivation>,
    },
    ImpElim {
        imp: Rc<Derivation>,
        arg: Rc<Derivation>,
    },
    ExFalso(Rc<Derivation>, EhpFormula),
    /// Term-for-variable substitution applied to a closed derivation.
    Subst(Rc<Derivation>, Subst),
}

#[derive(Debug, Error, PartialEq)]
pub enum RuleError {
    #[error("hypothesis index {0} out of range (context has {1})")]
    BadHyp(usize, usize),
    #[error("and-elimination applied to non-conjunction {0}")]
    NotAnd(String),
    #[error("or-elimination on a non-disjunction {0}")]
    NotOr(String),
    #[error("or-elimination branches conclude {0} vs {1}")]
    BranchMismatch(String, String),
    #[error("implication elimination: {0} does not expect {1}")]
    BadModusPonens(String, String),
    #[error("ex falso applied to {0}, not falsum")]
    NotFalse(String),
    #[error("substitution node over a derivation with open hypotheses")]
    SubstOpenContext,
}

fn show(f: &EhpFormula) -> String {
    format!("{f:?}")
}

impl Derivation {
    /// Structural validation: compute the conclusion under a context or
    /// report the offending node.
    pub fn validate(&self, ctx: &[EhpFormula]) -> Result<EhpFormula, RuleError> {
        match self {
            Derivation::Hyp(i) => ctx
                .len()
                .checked_sub(1 + *i)
                .and_then(|j| ctx.get(j).cloned())
                .ok_or(RuleError::BadHyp(*i, ctx.len())),
            Derivation::Ax(ax, s) => Ok(ax.template().subst(s)),
            Derivation::AndIntro(a, b) => {
                Ok(fand(a.validate(ctx)?, b.validate(ctx)?))
            }
            Derivation::AndElimL(d) => match d.validate(ctx)? {
                EhpFormula::And(a, _) => Ok((*a).clone()),
                other => Err(RuleError::NotAnd(show(&other))),
            },
            Derivation::AndElimR(d) => match d.validate(ctx)? {
                EhpFormula::And(_, b) => Ok((*b).clone()),
                other => Err(RuleError::NotAnd(show(&other))),
            },
            Derivation::OrIntroL(d, rhs) => {
                Ok(EhpFormula::Or(Rc::new(d.validate(ctx)?), Rc::new(rhs.clone())))
            }
            Derivation::OrIntroR(lhs, d) => {
                Ok(EhpFormula::Or(Rc::new(lhs.clone()), Rc::new(d.validate(ctx)?)))
            }
            Derivation::OrElim { or, left, right } => {
                let EhpFormula::Or(a, b) = or.validate(ctx)? else {
                    return Err(RuleError::NotOr(show(&or.validate(ctx)?)));
                };
                let mut cl = ctx.to_vec();
                cl.push((*a).clone());
                let lc = left.validate(&cl)?;
                let mut cr = ctx.to_vec();
                cr.push((*b).clone());
                let rc = right.validate(&cr)?;
                if lc != rc {
                    return Err(RuleError::BranchMismatch(show(&lc), show(&rc)));
                }
                Ok(lc)
            }
            Derivation::ImpIntro { hyp, body } => {
                let mut c = ctx.to_vec();
                c.push(hyp.clone());
                Ok(fimplies(hyp.clone(), body.validate(&c)?))
            }
            Derivation::ImpElim { imp, arg } => {
                let fi = imp.validate(ctx)?;
                let fa = arg.validate(ctx)?;
                match fi {
                    EhpFormula::Implies(p, q) if *p == fa => Ok((*q).clone()),
                    other => Err(RuleError::BadModusPonens(show(&other), show(&fa))),
                }
            }
            Derivation::ExFalso(d, target) => match d.validate(ctx)? {
                EhpFormula::False => Ok(target.clone()),
                other => Err(RuleError::NotFalse(show(&other))),
            },
            Derivation::Subst(d, s) => {
                if !ctx.is_empty() {
                    return Err(RuleError::SubstOpenContext);
                }
                Ok(d.validate(&[])?.subst(s))
            }
        }
    }

    /// Extract the realizer as an open term over the context-pack variable.
    fn extract_open(&self, kit: &WitnessKit, depth: usize) -> Term {
        let env = || var("g");
        let std = &kit.std;
        match self {
            Derivation::Hyp(i) => {
                // left-nested pack: the newest hypothesis is p1, older ones
                // sit under iterated p0
                let _ = depth;
                let mut t = env();
                for _ in 0..*i {
                    t = app(std.p0.clone(), t);
                }
                app(std.p1.clone(), t)
            }
            Derivation::Ax(ax, _) => ax.realizer(kit),
            Derivation::AndIntro(a, b) => apps(
                std.p.clone(),
                &[a.extract_open(kit, depth), b.extract_open(kit, depth)],
            ),
            Derivation::AndElimL(d) => app(std.p0.clone(), d.extract_open(kit, depth)),
            Derivation::AndElimR(d) => app(std.p1.clone(), d.extract_open(kit, depth)),
            Derivation::OrIntroL(d, _) => apps(
                std.p.clone(),
                &[std.k.clone(), d.extract_open(kit, depth)],
            ),
            Derivation::OrIntroR(_, d) => apps(
                std.p.clone(),
                &[std.kbar.clone(), d.extract_open(kit, depth)],
            ),
            Derivation::OrElim { or, left, right } => {
                // (iota tag WL WR) (p g payload), where WL/WR abstract the
                // extended pack
                let e_or = or.extract_open(kit, depth);
                let wl = bracket_open(&left.extract_open(kit, depth + 1), &["g"]);
                let wr = bracket_open(&right.extract_open(kit, depth + 1), &["g"]);
                let tag = app(std.p0.clone(), e_or.clone());
                let payload = app(std.p1.clone(), e_or);
                app(
                    apps(std.iota.clone(), &[tag, wl, wr]),
                    apps(std.p.clone(), &[env(), payload]),
                )
            }
            Derivation::ImpIntro { body, .. } => {
                // h |-> ([g] body) (p g h)
                let w = bracket_open(&body.extract_open(kit, depth + 1), &["g"]);
                bracket_open(
                    &app(w, apps(std.p.clone(), &[env(), var("h")])),
                    &["h"],
                )
            }
            Derivation::ImpElim { imp, arg } => app(
                imp.extract_open(kit, depth),
                arg.extract_open(kit, depth),
            ),
            // any term realizes a conclusion reached from falsum
            Derivation::ExFalso(d, _) => d.extract_open(kit, depth),
            Derivation::Subst(d, _) => d.extract_open(kit, depth),
        }
    }

    /// Extract a closed combinatory realizer for a closed-context
    /// derivation. The same term is injected into every backend.
    pub fn extract(&self, kit: &WitnessKit) -> Term {
        let open = self.extract_open(kit, 0);
        // the pack variable is irrelevant for an empty context
        let t = subst_var(&open, "g", &kit.std.i);
        assert!(t.is_closed(), "extraction produced an open term");
        t
    }
}

fn subst_var(t: &Term, name: &str, with: &Term) -> Term {
    match &**t {
        CombTerm::Var(v) if v == name => with.clone(),
        CombTerm::App(f, a) => app(subst_var(f, name, with), subst_var(a, name, with)),
        _ => t.clone(),
    }
}

/// Interpret a reduction formula's two sides under an assignment.
pub fn le_sides(
    f: &EhpFormula,
    env: &BTreeMap<String, TruthValue>,
) -> Option<(TruthValue, TruthValue)> {
    match f {
        EhpFormula::Le(t, s) => Some((t.eval(env), s.eval(env))),
        _ => None,
    }
}

impl fmt::Display for HTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HTerm::Var(v) => write!(f, "{v}"),
            HTerm::Top => write!(f, "top"),
            HTerm::Bot => write!(f, "bot"),
            HTerm::Meet(a, b) => write!(f, "(meet {a} {b})"),
            HTerm::Join(a, b) => write!(f, "(join {a} {b})"),
            HTerm::Imp(a, b) => write!(f, "(imp {a} {b})"),
        }
    }
}

impl fmt::Display for EhpFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EhpFormula::Le(t, s) => write!(f, "(le {t} {s})"),
            EhpFormula::And(a, b) => write!(f, "(and {a} {b})"),
            EhpFormula::Or(a, b) => write!(f, "(or {a} {b})"),
            EhpFormula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            EhpFormula::False => write!(f, "false"),
        }
    }
}

pub mod canned;
pub mod sexp;

pub use canned::{canned_library, CannedLaw};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Backend;
    use crate::heyting::{check_reduction, Ctx};

    fn kit() -> WitnessKit {
        WitnessKit::new()
    }

    #[test]
    fn axiom_leaf_validates() {
        let d = Derivation::Ax(Axiom::ResidIn, Subst::default());
        assert!(d.validate(&[]).is_ok());
    }

    #[test]
    fn elim_on_wrong_shape_rejected() {
        // and-elimination applied to a disjunction-shaped conclusion
        let or = Derivation::OrIntroL(
            Rc::new(Derivation::Ax(Axiom::Refl, Subst::default())),
            fle(hvar("y"), hvar("y")),
        );
        let d = Derivation::AndElimL(Rc::new(or));
        assert!(matches!(d.validate(&[]), Err(RuleError::NotAnd(_))));
    }

    #[test]
    fn hypothesis_out_of_range() {
        let d = Derivation::Hyp(0);
        assert_eq!(d.validate(&[]), Err(RuleError::BadHyp(0, 0)));
    }

    #[test]
    fn refl_extracts_to_identity_behavior() {
        let kit = kit();
        let d = Derivation::Ax(Axiom::Refl, Subst::default());
        let t = d.extract(&kit);
        let ctx = Ctx::new(Backend::term_model());
        let e = ctx.inject(&t);
        let x = TruthValue::singleton(ctx.backend.numeral(2));
        assert!(check_reduction(&ctx, &e, &x, &x).is_confirmed());
    }

    #[test]
    fn imp_intro_elim_roundtrip() {
        // derivation of (x <= x) => (x <= x) applied to refl
        let hyp = fle(hvar("x"), hvar("x"));
        let d = Derivation::ImpElim {
            imp: Rc::new(Derivation::ImpIntro {
                hyp: hyp.clone(),
                body: Rc::new(Derivation::Hyp(0)),
            }),
            arg: Rc::new(Derivation::Ax(Axiom::Refl, Subst::default())),
        };
        assert_eq!(d.validate(&[]).unwrap(), hyp);
        let kit = kit();
        let t = d.extract(&kit);
        assert!(t.is_closed());
    }
}
