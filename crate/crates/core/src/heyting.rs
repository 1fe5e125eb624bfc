//! Truth values over a pca backend with Heyting-prealgebra structure.
//!
//! A truth value is an intensional subset of the pca: it carries a
//! deterministic sampler and a tri-state membership checker. Conjunction
//! members are pairs probed through the projections, disjunction members are
//! tagged pairs, and implication membership is tested against the antecedent's
//! samples. The generalized double negation `ominus(d, x) = (x=>d)=>d` gets
//! its own node so its samplers and display stay informative.

use std::fmt;
use std::rc::Rc;

use crate::backend::{AppResult, Backend, Element};
use crate::comb::Tri;
use crate::wit::WitnessKit;

/// Evaluation context: the backend plus sampling and recursion budgets.
#[derive(Clone)]
pub struct Ctx {
    pub backend: Rc<Backend>,
    pub kit: Rc<WitnessKit>,
    /// Cap on the number of samples drawn from any one truth value.
    pub samples: usize,
    /// Nesting budget for implication membership tests.
    pub depth: u32,
}

impl Ctx {
    pub fn new(backend: Rc<Backend>) -> Ctx {
        Ctx {
            backend,
            kit: Rc::new(WitnessKit::new()),
            samples: 8,
            depth: 3,
        }
    }

    pub fn with_samples(&self, samples: usize) -> Ctx {
        let mut c = self.clone();
        c.samples = samples;
        c
    }

    fn descend(&self) -> Ctx {
        let mut c = self.clone();
        c.depth = self.depth.saturating_sub(1);
        c
    }

    pub fn inject(&self, t: &crate::comb::Term) -> Element {
        self.backend.inject(t)
    }
}

/// Custom truth values (set-model membership/equality, quantifier sets).
pub trait TvCustom {
    fn membership(&self, ctx: &Ctx, e: &Element) -> Tri;
    fn samples(&self, ctx: &Ctx) -> Vec<Element>;
    fn label(&self) -> String;
}

#[derive(Clone)]
pub struct TruthValue(Rc<TvNode>);

enum TvNode {
    Top,
    Bot,
    Explicit(Vec<Element>),
    Meet(TruthValue, TruthValue),
    Join(TruthValue, TruthValue),
    Imp(TruthValue, TruthValue),
    BigMeet(Vec<TruthValue>),
    BigJoin(Vec<TruthValue>),
    Ominus { d: TruthValue, x: TruthValue },
    Custom(Rc<dyn TvCustom>),
}

impl TruthValue {
    pub fn top() -> TruthValue {
        TruthValue(Rc::new(TvNode::Top))
    }

    pub fn bot() -> TruthValue {
        TruthValue(Rc::new(TvNode::Bot))
    }

    pub fn explicit(items: Vec<Element>) -> TruthValue {
        TruthValue(Rc::new(TvNode::Explicit(items)))
    }

    pub fn singleton(e: Element) -> TruthValue {
        TruthValue::explicit(vec![e])
    }

    pub fn meet(x: &TruthValue, y: &TruthValue) -> TruthValue {
        TruthValue(Rc::new(TvNode::Meet(x.clone(), y.clone())))
    }

    pub fn join(x: &TruthValue, y: &TruthValue) -> TruthValue {
        TruthValue(Rc::new(TvNode::Join(x.clone(), y.clone())))
    }

    pub fn imp(x: &TruthValue, y: &TruthValue) -> TruthValue {
        TruthValue(Rc::new(TvNode::Imp(x.clone(), y.clone())))
    }

    pub fn custom(c: Rc<dyn TvCustom>) -> TruthValue {
        TruthValue(Rc::new(TvNode::Custom(c)))
    }

    /// The generalized double negation `(x => d) => d`.
    pub fn ominus(d: &TruthValue, x: &TruthValue) -> TruthValue {
        TruthValue(Rc::new(TvNode::Ominus {
            d: d.clone(),
            x: x.clone(),
        }))
    }

    /// Pointwise intersection of a nonempty family.
    pub fn big_meet(fs: Vec<TruthValue>) -> TruthValue {
        assert!(!fs.is_empty(), "big_meet of an empty family");
        TruthValue(Rc::new(TvNode::BigMeet(fs)))
    }

    /// Pointwise union of a nonempty family.
    pub fn big_join(fs: Vec<TruthValue>) -> TruthValue {
        assert!(!fs.is_empty(), "big_join of an empty family");
        TruthValue(Rc::new(TvNode::BigJoin(fs)))
    }

    /// Negation sugar.
    pub fn neg(x: &TruthValue) -> TruthValue {
        TruthValue::imp(x, &TruthValue::bot())
    }

    pub fn is_bot(&self) -> bool {
        matches!(&*self.0, TvNode::Bot)
    }

    pub fn is_top(&self) -> bool {
        matches!(&*self.0, TvNode::Top)
    }

    /// Structural fingerprint used for probe-family deduplication.
    pub fn fingerprint(&self) -> String {
        format!("{self}")
    }

    /// Tri-state membership.
    pub fn membership(&self, ctx: &Ctx, e: &Element) -> Tri {
        let be = &ctx.backend;
        match &*self.0 {
            TvNode::Top => Tri::Yes,
            TvNode::Bot => Tri::No,
            TvNode::Explicit(items) => {
                let mut out = Tri::No;
                for it in items {
                    match be.eq(e, it) {
                        Tri::Yes => return Tri::Yes,
                        Tri::No => {}
                        Tri::Unknown => out = Tri::Unknown,
                    }
                }
                out
            }
            TvNode::Meet(x, y) => {
                let std = be.std_elements();
                let l = match be.apply(&std.p0, e) {
                    AppResult::Defined(v) => x.membership(ctx, &v),
                    AppResult::FuelExhausted => Tri::Unknown,
                };
                if l == Tri::No {
                    return Tri::No;
                }
                let r = match be.apply(&std.p1, e) {
                    AppResult::Defined(v) => y.membership(ctx, &v),
                    AppResult::FuelExhausted => Tri::Unknown,
                };
                l.and(r)
            }
            TvNode::Join(x, y) => {
                let std = be.std_elements();
                let tag = match be.apply(&std.p0, e) {
                    AppResult::Defined(v) => v,
                    AppResult::FuelExhausted => return Tri::Unknown,
                };
                let payload = match be.apply(&std.p1, e) {
                    AppResult::Defined(v) => v,
                    AppResult::FuelExhausted => return Tri::Unknown,
                };
                match be.eq(&tag, &std.k) {
                    Tri::Yes => x.membership(ctx, &payload),
                    Tri::Unknown => Tri::Unknown,
                    Tri::No => match be.eq(&tag, &std.kbar) {
                        Tri::Yes => y.membership(ctx, &payload),
                        Tri::Unknown => Tri::Unknown,
                        Tri::No => Tri::No,
                    },
                }
            }
            TvNode::Imp(x, y) => imp_membership(ctx, e, x, y),
            TvNode::Ominus { d, x } => {
                let inner = TruthValue::imp(x, d);
                imp_membership(ctx, e, &inner, d)
            }
            TvNode::BigMeet(fs) => {
                let mut out = Tri::Yes;
                for f in fs {
                    match f.membership(ctx, e) {
                        Tri::No => return Tri::No,
                        Tri::Unknown => out = Tri::Unknown,
                        Tri::Yes => {}
                    }
                }
                out
            }
            TvNode::BigJoin(fs) => {
                let mut out = Tri::No;
                for f in fs {
                    match f.membership(ctx, e) {
                        Tri::Yes => return Tri::Yes,
                        Tri::Unknown => out = Tri::Unknown,
                        Tri::No => {}
                    }
                }
                out
            }
            TvNode::Custom(c) => c.membership(ctx, e),
        }
    }

    /// Deterministic sample set, capped by the context budget. Samples are
    /// never membership-Out of their own truth value.
    pub fn samples(&self, ctx: &Ctx) -> Vec<Element> {
        let be = &ctx.backend;
        let cap = ctx.samples;
        match &*self.0 {
            TvNode::Top => be.sample_pool().into_iter().take(cap).collect(),
            TvNode::Bot => Vec::new(),
            TvNode::Explicit(items) => items.iter().take(cap).cloned().collect(),
            TvNode::Meet(x, y) => {
                let std = be.std_elements();
                let xs = x.samples(ctx);
                let ys = y.samples(ctx);
                let mut out = Vec::new();
                'outer: for a in &xs {
                    for b in &ys {
                        if out.len() >= cap {
                            break 'outer;
                        }
                        if let AppResult::Defined(pab) =
                            be.apply_all(&std.p, &[a.clone(), b.clone()])
                        {
                            out.push(pab);
                        }
                    }
                }
                out
            }
            TvNode::Join(x, y) => {
                let std = be.std_elements();
                let mut out = Vec::new();
                for a in x.samples(ctx) {
                    if out.len() >= cap {
                        break;
                    }
                    if let AppResult::Defined(t) =
                        be.apply_all(&std.p, &[std.k.clone(), a])
                    {
                        out.push(t);
                    }
                }
                for b in y.samples(ctx) {
                    if out.len() >= cap {
                        break;
                    }
                    if let AppResult::Defined(t) =
                        be.apply_all(&std.p, &[std.kbar.clone(), b])
                    {
                        out.push(t);
                    }
                }
                out
            }
            TvNode::Imp(x, y) => {
                // constant functions into the consequent, plus the identity
                // when both sides coincide; a non-constant probe keeps
                // membership tests for O_Z Z honest
                let std = be.std_elements();
                let mut out = Vec::new();
                if x.fingerprint() == y.fingerprint() {
                    out.push(std.i.clone());
                }
                for b in y.samples(ctx) {
                    if out.len() >= cap {
                        break;
                    }
                    if let AppResult::Defined(t) = be.apply(&std.k, &b) {
                        out.push(t);
                    }
                }
                out
            }
            TvNode::Ominus { d, x } => {
                let mut out = Vec::new();
                // image of x under the law-(14) witness a |-> (h |-> h a)
                let d2 = ctx.inject(&ctx.kit.d2);
                for a in x.samples(ctx) {
                    if out.len() >= cap {
                        break;
                    }
                    if let AppResult::Defined(t) = be.apply(&d2, &a) {
                        out.push(t);
                    }
                }
                // constants into d (the law-(21) direction)
                let std = be.std_elements();
                for b in d.samples(ctx) {
                    if out.len() >= cap {
                        break;
                    }
                    if let AppResult::Defined(t) = be.apply(&std.k, &b) {
                        out.push(t);
                    }
                }
                out
            }
            TvNode::BigMeet(fs) => {
                // union of member samples, filtered by not-Out everywhere
                let inner = ctx.descend();
                let mut out = Vec::new();
                for f in fs {
                    for cand in f.samples(&inner) {
                        if out.len() >= cap {
                            return out;
                        }
                        let ok = fs
                            .iter()
                            .all(|g| g.membership(&inner, &cand) != Tri::No);
                        if ok {
                            out.push(cand);
                        }
                    }
                }
                out
            }
            TvNode::BigJoin(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    for cand in f.samples(ctx) {
                        if out.len() >= cap {
                            return out;
                        }
                        out.push(cand);
                    }
                }
                out
            }
            TvNode::Custom(c) => c.samples(ctx).into_iter().take(cap).collect(),
        }
    }
}

/// Implication membership: test `e a` against the consequent for every
/// sampled `a`. A definite failure refutes; surviving every sampled test
/// counts as membership at this budget; anything else is unknown.
fn imp_membership(ctx: &Ctx, e: &Element, x: &TruthValue, y: &TruthValue) -> Tri {
    if ctx.depth == 0 {
        return Tri::Unknown;
    }
    let inner = ctx.descend();
    let samples = x.samples(&inner);
    let mut out = Tri::Yes;
    for a in samples {
        match ctx.backend.apply(e, &a) {
            AppResult::Defined(r) => match y.membership(&inner, &r) {
                Tri::No => return Tri::No,
                Tri::Unknown => out = Tri::Unknown,
                Tri::Yes => {}
            },
            AppResult::FuelExhausted => out = Tri::Unknown,
        }
    }
    out
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            TvNode::Top => write!(f, "T"),
            TvNode::Bot => write!(f, "F"),
            TvNode::Explicit(items) => {
                write!(f, "{{")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{it}")?;
                }
                write!(f, "}}")
            }
            TvNode::Meet(x, y) => write!(f, "({x} & {y})"),
            TvNode::Join(x, y) => write!(f, "({x} | {y})"),
            TvNode::Imp(x, y) => write!(f, "({x} => {y})"),
            TvNode::Ominus { d, x } => write!(f, "O[{d}]({x})"),
            TvNode::BigMeet(fs) => {
                write!(f, "Meet[")?;
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, "]")
            }
            TvNode::BigJoin(fs) => {
                write!(f, "Join[")?;
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, "]")
            }
            TvNode::Custom(c) => write!(f, "{}", c.label()),
        }
    }
}

impl fmt::Debug for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Outcome of a witness check. `Refuted` always carries the replayable
/// counterexample element.
#[derive(Clone)]
pub enum Verdict {
    Confirmed,
    Refuted { counterexample: Element, context: String },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, Verdict::Confirmed)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Confirmed => "confirmed",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Confirmed => write!(f, "confirmed"),
            Verdict::Refuted { counterexample, context } => {
                write!(f, "refuted (at {counterexample}; {context})")
            }
            Verdict::Inconclusive { reason } => write!(f, "inconclusive ({reason})"),
        }
    }
}

/// Check `e : X ~> Y`: apply `e` to every sample of `X` and test membership
/// in `Y`. Divergence at the consensus fuel refutes; a surviving unknown
/// keeps the verdict inconclusive.
pub fn check_reduction(ctx: &Ctx, e: &Element, x: &TruthValue, y: &TruthValue) -> Verdict {
    let samples = x.samples(ctx);
    let mut unknown = None;
    for a in samples {
        match ctx.backend.apply(e, &a) {
            AppResult::Defined(r) => match y.membership(ctx, &r) {
                Tri::No => {
                    return Verdict::Refuted {
                        counterexample: a,
                        context: format!("image {r} lands outside {y}"),
                    }
                }
                Tri::Unknown => {
                    unknown = Some(format!("membership of image of {a} unknown"));
                }
                Tri::Yes => {}
            },
            AppResult::FuelExhausted => {
                return Verdict::Refuted {
                    counterexample: a,
                    context: "application diverged at consensus fuel".to_string(),
                }
            }
        }
    }
    match unknown {
        None => Verdict::Confirmed,
        Some(reason) => Verdict::Inconclusive { reason },
    }
}

/// The named witness library: e1..e12, help1..help3, d1..d10 (with reverse
/// directions where the law is an equivalence), all injected into the
/// backend.
pub struct WitnessLibrary {
    pub entries: Vec<(String, Element)>,
}

impl WitnessLibrary {
    pub fn get(&self, name: &str) -> Option<&Element> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _)| n.as_str()).collect()
    }
}

/// Build the uniform witness library for a backend. The same closed terms
/// are used for every backend.
pub fn uniform_witnesses(ctx: &Ctx) -> WitnessLibrary {
    let entries = ctx
        .kit
        .named()
        .into_iter()
        .map(|(name, t)| (name.to_string(), ctx.inject(&t)))
        .collect();
    WitnessLibrary { entries }
}

/// The standard sample family of truth values over which laws are
/// instantiated: top, bottom, numeral singletons, and a few composites.
pub fn standard_family(ctx: &Ctx) -> Vec<TruthValue> {
    let mut out = vec![TruthValue::top(), TruthValue::bot()];
    for n in 0..=5 {
        out.push(TruthValue::singleton(ctx.backend.numeral(n)));
    }
    let n1 = TruthValue::singleton(ctx.backend.numeral(1));
    let n2 = TruthValue::singleton(ctx.backend.numeral(2));
    out.push(TruthValue::meet(&n1, &n2));
    out.push(TruthValue::join(&n1, &n2));
    out.push(TruthValue::imp(&n1, &n2));
    out.push(TruthValue::explicit(vec![
        ctx.backend.numeral(0),
        ctx.backend.numeral(3),
    ]));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Backend;

    fn ctx() -> Ctx {
        Ctx::new(Backend::term_model())
    }

    #[test]
    fn top_bot_membership() {
        let ctx = ctx();
        let e = ctx.backend.numeral(3);
        assert_eq!(TruthValue::top().membership(&ctx, &e), Tri::Yes);
        assert_eq!(TruthValue::bot().membership(&ctx, &e), Tri::No);
    }

    #[test]
    fn meet_membership_via_projections() {
        let ctx = ctx();
        let std = ctx.backend.std_elements();
        let pii = ctx
            .backend
            .apply_all(&std.p, &[std.i.clone(), std.i.clone()])
            .defined()
            .unwrap();
        let tt = TruthValue::meet(&TruthValue::top(), &TruthValue::top());
        assert_eq!(tt.membership(&ctx, &pii), Tri::Yes);
        // p i i is not in {2} & T
        let two = TruthValue::singleton(ctx.backend.numeral(2));
        let m = TruthValue::meet(&two, &TruthValue::top());
        assert_eq!(m.membership(&ctx, &pii), Tri::No);
    }

    #[test]
    fn join_routing() {
        let ctx = ctx();
        let std = ctx.backend.std_elements();
        let a = ctx.backend.numeral(1);
        let x = TruthValue::singleton(a.clone());
        let j = TruthValue::join(&x, &TruthValue::bot());
        let left = ctx
            .backend
            .apply_all(&std.p, &[std.k.clone(), a.clone()])
            .defined()
            .unwrap();
        assert_eq!(j.membership(&ctx, &left), Tri::Yes);
        // right injection into bottom is out
        let right = ctx
            .backend
            .apply_all(&std.p, &[std.kbar.clone(), a])
            .defined()
            .unwrap();
        assert_eq!(j.membership(&ctx, &right), Tri::No);
    }

    #[test]
    fn imp_vacuous_and_refuted() {
        let ctx = ctx();
        let x = TruthValue::singleton(ctx.backend.numeral(1));
        // k a : X ~> anything containing a; k a refuted against X => Bot
        let std = ctx.backend.std_elements();
        let ka = ctx.backend.apply(&std.k, &ctx.backend.numeral(5)).defined().unwrap();
        let imp = TruthValue::imp(&x, &TruthValue::bot());
        assert_eq!(imp.membership(&ctx, &ka), Tri::No);
        // vacuous antecedent is never refuted
        let imp2 = TruthValue::imp(&TruthValue::bot(), &x);
        assert_eq!(imp2.membership(&ctx, &ka), Tri::Yes);
    }

    #[test]
    fn check_reduction_identity() {
        let ctx = ctx();
        let std = ctx.backend.std_elements();
        for x in standard_family(&ctx) {
            let v = check_reduction(&ctx, &std.i, &x, &x);
            assert!(
                !v.is_refuted(),
                "identity refuted on {x}: {v}"
            );
        }
    }

    #[test]
    fn check_reduction_k_into_bot_refuted() {
        let ctx = ctx();
        let std = ctx.backend.std_elements();
        let a = ctx.backend.numeral(2);
        let ka = ctx.backend.apply(&std.k, &a).defined().unwrap();
        let x = TruthValue::singleton(ctx.backend.numeral(1));
        let v = check_reduction(&ctx, &ka, &x, &TruthValue::bot());
        assert!(v.is_refuted());
    }

    #[test]
    fn sampler_soundness() {
        let ctx = ctx();
        for x in standard_family(&ctx) {
            for s in x.samples(&ctx) {
                assert_ne!(
                    x.membership(&ctx, &s),
                    Tri::No,
                    "sample {s} of {x} is membership-Out"
                );
            }
        }
    }

    #[test]
    fn ominus_laws_spotcheck() {
        let ctx = ctx();
        let lib = uniform_witnesses(&ctx);
        let fam = standard_family(&ctx);
        // d2: x <= O_d x for a few (d, x)
        let d2 = lib.get("d2").unwrap();
        for d in fam.iter().take(4) {
            for x in fam.iter().take(4) {
                let v = check_reduction(&ctx, d2, x, &TruthValue::ominus(d, x));
                assert!(!v.is_refuted(), "d2 refuted at d={d} x={x}: {v}");
            }
        }
        // d8: O_d d <= d
        let d8 = lib.get("d8").unwrap();
        for d in fam.iter().take(4) {
            let v = check_reduction(&ctx, d8, &TruthValue::ominus(d, d), d);
            assert!(!v.is_refuted(), "d8 refuted at d={d}: {v}");
        }
    }
}
