//! Backend contract shared by the three pca implementations: the closed
//! SK-term model (standing in for Kleene's first model), Scott's graph model,
//! and Kleene's second model.

pub mod k2;
pub mod scott;

use std::fmt;
use std::rc::Rc;

use crate::comb::{self, Fuel, StdTerms, Term, Tri};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BackendKind {
    Term,
    Scott,
    K2,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Term => "term",
            BackendKind::Scott => "scott",
            BackendKind::K2 => "k2",
        }
    }

    pub fn parse(s: &str) -> Option<BackendKind> {
        match s {
            "term" => Some(BackendKind::Term),
            "scott" => Some(BackendKind::Scott),
            "k2" => Some(BackendKind::K2),
            _ => None,
        }
    }
}

/// Opaque pca element. Which variant is populated depends on the backend.
#[derive(Clone)]
pub enum Element {
    Term(Term),
    Scott(scott::GraphElement),
    Baire(k2::BaireElement),
}

impl Element {
    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Element::Term(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Term(t) => write!(f, "{t}"),
            Element::Scott(g) => write!(f, "{g}"),
            Element::Baire(b) => write!(f, "{b}"),
        }
    }
}

/// Outcome of a fuel-bounded application.
#[derive(Clone)]
pub enum AppResult {
    Defined(Element),
    FuelExhausted,
}

impl AppResult {
    pub fn defined(self) -> Option<Element> {
        match self {
            AppResult::Defined(e) => Some(e),
            AppResult::FuelExhausted => None,
        }
    }
}

/// Approximation parameters stamped into every verdict that used them.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct EvalParams {
    /// Step budget for weak reduction / oracle searches.
    pub fuel: u64,
    /// Scott truncation bound.
    pub truncation: u64,
    /// Scott observation bound for extensional comparisons.
    pub obs: u64,
    /// K2 prefix length for extensional comparisons.
    pub prefix: usize,
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams {
            fuel: Fuel::DEFAULT.get(),
            truncation: 1 << 10,
            obs: 16,
            prefix: 8,
        }
    }
}

pub struct StdElements {
    pub k: Element,
    pub s: Element,
    pub i: Element,
    pub p: Element,
    pub p0: Element,
    pub p1: Element,
    pub kbar: Element,
}

/// A pca backend: application, injection of closed combinatory terms, and
/// canonical equality, all bounded by the parameters.
pub struct Backend {
    pub kind: BackendKind,
    pub params: EvalParams,
    pub std: StdTerms,
}

impl Backend {
    pub fn new(kind: BackendKind, params: EvalParams) -> Rc<Backend> {
        Rc::new(Backend {
            kind,
            params,
            std: StdTerms::new(),
        })
    }

    pub fn term_model() -> Rc<Backend> {
        Backend::new(BackendKind::Term, EvalParams::default())
    }

    pub fn scott_model() -> Rc<Backend> {
        Backend::new(BackendKind::Scott, EvalParams::default())
    }

    pub fn k2_model() -> Rc<Backend> {
        Backend::new(BackendKind::K2, EvalParams::default())
    }

    pub fn scott_ctx(&self) -> scott::ScottCtx {
        scott::ScottCtx {
            truncation: self.params.truncation,
            steps: self.params.fuel.saturating_mul(20),
        }
    }

    /// Interpret a closed combinatory term as an element.
    pub fn inject(&self, t: &Term) -> Element {
        match self.kind {
            BackendKind::Term => {
                let mut fuel = self.params.fuel;
                match comb::whnf(t.clone(), &mut fuel) {
                    Ok(nf) => Element::Term(nf),
                    Err(_) => Element::Term(t.clone()),
                }
            }
            BackendKind::Scott => Element::Scott(scott::GraphElement::from_term(t)),
            BackendKind::K2 => Element::Baire(k2::BaireElement::from_term(t)),
        }
    }

    pub fn apply(&self, a: &Element, b: &Element) -> AppResult {
        self.apply_fuel(a, b, self.params.fuel)
    }

    pub fn apply_fuel(&self, a: &Element, b: &Element, fuel: u64) -> AppResult {
        match (a, b) {
            (Element::Term(f), Element::Term(x)) => {
                let mut fuel = fuel;
                match comb::whnf(comb::app(f.clone(), x.clone()), &mut fuel) {
                    Ok(t) => AppResult::Defined(Element::Term(t)),
                    Err(_) => AppResult::FuelExhausted,
                }
            }
            (Element::Scott(f), Element::Scott(x)) => {
                AppResult::Defined(Element::Scott(scott::scott_apply(f, x)))
            }
            (Element::Baire(f), Element::Baire(x)) => {
                AppResult::Defined(Element::Baire(k2::k2_apply_element(f, x)))
            }
            _ => panic!("elements from different backends applied"),
        }
    }

    /// Left-associated application chain.
    pub fn apply_all(&self, f: &Element, args: &[Element]) -> AppResult {
        let mut cur = f.clone();
        for a in args {
            match self.apply(&cur, a) {
                AppResult::Defined(e) => cur = e,
                AppResult::FuelExhausted => return AppResult::FuelExhausted,
            }
        }
        AppResult::Defined(cur)
    }

    /// Canonical equality. Term model: lockstep comparison of weak normal
    /// forms. Scott: membership agreement below the observation bound at the
    /// truncation. K2: prefix agreement.
    pub fn eq(&self, a: &Element, b: &Element) -> Tri {
        match (a, b) {
            (Element::Term(x), Element::Term(y)) => {
                let mut fuel = self.params.fuel;
                comb::canon_eq(x, y, &mut fuel)
            }
            (Element::Scott(x), Element::Scott(y)) => {
                scott::eq_at(x, y, self.params.obs, &self.scott_ctx())
            }
            (Element::Baire(x), Element::Baire(y)) => {
                let mut fuel = self.params.fuel;
                k2::canon_eq_k2(x, y, self.params.prefix, &mut fuel)
            }
            _ => Tri::No,
        }
    }

    pub fn numeral(&self, n: u64) -> Element {
        self.inject(&comb::numeral(n, &self.std))
    }

    /// Standard pca elements, injected.
    pub fn std_elements(&self) -> StdElements {
        StdElements {
            k: self.inject(&self.std.k),
            s: self.inject(&self.std.s),
            i: self.inject(&self.std.i),
            p: self.inject(&self.std.p),
            p0: self.inject(&self.std.p0),
            p1: self.inject(&self.std.p1),
            kbar: self.inject(&self.std.kbar),
        }
    }

    /// Deterministic pool of sample elements used when a truth value has no
    /// better sampler (the members of top).
    pub fn sample_pool(&self) -> Vec<Element> {
        let mut out = vec![
            self.inject(&self.std.i),
            self.inject(&self.std.k),
            self.inject(&self.std.kbar),
            self.inject(&self.std.p),
        ];
        for n in 0..4 {
            out.push(self.numeral(n));
        }
        match self.kind {
            BackendKind::Term => {}
            BackendKind::Scott => {
                out.push(Element::Scott(scott::GraphElement::empty()));
                out.push(Element::Scott(scott::GraphElement::finite([1, 4])));
                out.push(Element::Scott(scott::GraphElement::all_nats()));
            }
            BackendKind::K2 => {
                out.push(Element::Baire(k2::BaireElement::constant(1)));
                out.push(Element::Baire(k2::graph_of_constant(2)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::apps;

    fn backends() -> Vec<Rc<Backend>> {
        vec![Backend::term_model(), Backend::scott_model(), Backend::k2_model()]
    }

    #[test]
    fn pca_laws_all_backends() {
        for be in backends() {
            let std = be.std_elements();
            let pool = be.sample_pool();
            for a in pool.iter().take(4) {
                for b in pool.iter().take(4) {
                    let kab = be
                        .apply_all(&std.k, &[a.clone(), b.clone()])
                        .defined()
                        .expect("k a b defined");
                    assert_eq!(be.eq(&kab, a), Tri::Yes, "{} backend", be.kind.name());
                }
            }
        }
    }

    #[test]
    fn identity_everywhere() {
        for be in backends() {
            let std = be.std_elements();
            for a in be.sample_pool().into_iter().take(5) {
                let ia = be.apply(&std.i, &a).defined().unwrap();
                assert_eq!(be.eq(&ia, &a), Tri::Yes, "{} backend", be.kind.name());
            }
        }
    }

    #[test]
    fn projections_everywhere() {
        for be in backends() {
            let std = be.std_elements();
            let a = be.numeral(2);
            let b = be.numeral(3);
            let pab = be.apply_all(&std.p, &[a.clone(), b.clone()]).defined().unwrap();
            let p0 = be.apply(&std.p0, &pab).defined().unwrap();
            let p1 = be.apply(&std.p1, &pab).defined().unwrap();
            assert_eq!(be.eq(&p0, &a), Tri::Yes, "{} p0", be.kind.name());
            assert_eq!(be.eq(&p1, &b), Tri::Yes, "{} p1", be.kind.name());
        }
    }

    #[test]
    fn skk_numeral_identity() {
        let be = Backend::term_model();
        // s k (s k) applied to numeral 3 gives numeral 3
        let t = apps(
            comb::s(),
            &[comb::k(), comb::app(comb::s(), comb::k())],
        );
        let e = be.inject(&t);
        let three = be.numeral(3);
        let r = be.apply(&e, &three).defined().unwrap();
        assert_eq!(be.eq(&r, &three), Tri::Yes);
    }
}
