//! Combinatory term language: weak reduction with a fuel budget, bracket
//! abstraction, Curry numerals, and a guarded fixed-point combinator.
//!
//! Closed terms in weak head normal form double as the elements of the
//! term-model backend, which stands in for Kleene's first model.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

/// Applicative term over the constants `K` and `S`.
///
/// Closed terms contain no `Var` nodes. The only reduction rules are
/// `K a b -> a` and `S a b c -> a c (b c)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum CombTerm {
    Var(String),
    K,
    S,
    App(Rc<CombTerm>, Rc<CombTerm>),
}

pub type Term = Rc<CombTerm>;

/// Step budget for weak reduction. Always strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel(u64);

impl Fuel {
    pub const DEFAULT: Fuel = Fuel(100_000);

    pub fn new(steps: u64) -> Fuel {
        assert!(steps > 0, "fuel must be strictly positive");
        Fuel(steps)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn doubled(self) -> Fuel {
        Fuel(self.0.saturating_mul(2))
    }
}

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel::DEFAULT
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("fuel exhausted during weak reduction")]
pub struct FuelExhausted;

/// Tri-state answer for questions that are only semi-decidable under a
/// fuel or truncation bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn and(self, other: Tri) -> Tri {
        use Tri::*;
        match (self, other) {
            (No, _) | (_, No) => No,
            (Yes, Yes) => Yes,
            _ => Unknown,
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }
}

pub fn app(f: Term, a: Term) -> Term {
    Rc::new(CombTerm::App(f, a))
}

pub fn k() -> Term {
    Rc::new(CombTerm::K)
}

pub fn s() -> Term {
    Rc::new(CombTerm::S)
}

pub fn var(name: &str) -> Term {
    Rc::new(CombTerm::Var(name.to_string()))
}

/// Left-associated application `f a1 ... an`.
pub fn apps(f: Term, args: &[Term]) -> Term {
    let mut t = f;
    for a in args {
        t = app(t, a.clone());
    }
    t
}

impl CombTerm {
    pub fn is_closed(&self) -> bool {
        match self {
            CombTerm::Var(_) => false,
            CombTerm::K | CombTerm::S => true,
            CombTerm::App(f, a) => f.is_closed() && a.is_closed(),
        }
    }

    pub fn has_free(&self, name: &str) -> bool {
        match self {
            CombTerm::Var(v) => v == name,
            CombTerm::K | CombTerm::S => false,
            CombTerm::App(f, a) => f.has_free(name) || a.has_free(name),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            CombTerm::App(f, a) => 1 + f.size() + a.size(),
            _ => 1,
        }
    }
}

/// Reduce to weak head normal form, spending at most the given fuel.
///
/// The result is either the head-normal term (`K`/`S`/`Var` applied to too few
/// arguments to fire) or an error when the budget runs out. Fuel is consumed
/// once per contraction, so a `Defined` answer at fuel `n` is reproduced
/// verbatim at any fuel `m >= n`.
pub fn whnf(term: Term, fuel: &mut u64) -> Result<Term, FuelExhausted> {
    let mut head = term;
    // Arguments of the spine; the innermost (first) argument is last.
    let mut spine: Vec<Term> = Vec::new();
    loop {
        match &*head {
            CombTerm::App(f, a) => {
                spine.push(a.clone());
                head = f.clone();
            }
            CombTerm::K if spine.len() >= 2 => {
                if *fuel == 0 {
                    return Err(FuelExhausted);
                }
                *fuel -= 1;
                let x = spine.pop().unwrap();
                spine.pop();
                head = x;
            }
            CombTerm::S if spine.len() >= 3 => {
                if *fuel == 0 {
                    return Err(FuelExhausted);
                }
                *fuel -= 1;
                let a = spine.pop().unwrap();
                let b = spine.pop().unwrap();
                let c = spine.pop().unwrap();
                // Contract `skk x -> x` on the fly. This keeps the argument
                // copies made by S syntactically stable, so unfoldings of a
                // fixed point stay comparable by the short-circuit in
                // `canon_eq` instead of regressing forever.
                head = smart_app(smart_app(a, c.clone()), smart_app(b, c));
            }
            _ => {
                let mut t = head;
                while let Some(a) = spine.pop() {
                    t = app(t, a);
                }
                return Ok(t);
            }
        }
    }
}

/// Fully normalize under weak reduction: head-normalize, then normalize the
/// residual spine arguments. Diverging terms exhaust the fuel.
pub fn normalize(term: Term, fuel: &mut u64) -> Result<Term, FuelExhausted> {
    let t = whnf(term, fuel)?;
    let (head, args) = decompose(&t);
    if args.is_empty() {
        return Ok(t);
    }
    let mut out = head;
    for a in args {
        out = app(out, normalize(a, fuel)?);
    }
    Ok(out)
}

fn is_identity(t: &CombTerm) -> bool {
    // Structurally (S K K).
    if let CombTerm::App(f, a) = t {
        if **a != CombTerm::K {
            return false;
        }
        if let CombTerm::App(s, k) = &**f {
            return **s == CombTerm::S && **k == CombTerm::K;
        }
    }
    false
}

fn smart_app(f: Term, a: Term) -> Term {
    if is_identity(&f) {
        return a;
    }
    // (K x) a -> x
    if let CombTerm::App(g, x) = &*f {
        if **g == CombTerm::K {
            return x.clone();
        }
    }
    app(f, a)
}

/// Split a term into its head and the argument list, outermost last.
pub fn decompose(term: &Term) -> (Term, Vec<Term>) {
    let mut args = Vec::new();
    let mut head = term.clone();
    while let CombTerm::App(f, a) = &*head {
        args.push(a.clone());
        head = f.clone();
    }
    args.reverse();
    (head, args)
}

/// Canonical equality of closed terms: lockstep comparison of weak normal
/// forms. Syntactically identical subterms short-circuit, which lets terms
/// without a finite normal form (fixed points) still compare equal to their
/// own unfoldings.
pub fn canon_eq(a: &Term, b: &Term, fuel: &mut u64) -> Tri {
    let mut work = vec![(a.clone(), b.clone())];
    while let Some((a, b)) = work.pop() {
        if Rc::ptr_eq(&a, &b) || a == b {
            continue;
        }
        let a = match whnf(a, fuel) {
            Ok(t) => t,
            Err(_) => return Tri::Unknown,
        };
        let b = match whnf(b, fuel) {
            Ok(t) => t,
            Err(_) => return Tri::Unknown,
        };
        if a == b {
            continue;
        }
        let (ha, aa) = decompose(&a);
        let (hb, ab) = decompose(&b);
        if ha != hb || aa.len() != ab.len() {
            return Tri::No;
        }
        for pair in aa.into_iter().zip(ab) {
            work.push(pair);
        }
    }
    Tri::Yes
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompileError {
    #[error("free variable `{0}` is not listed in the abstraction")]
    UnlistedVariable(String),
}

/// Bracket abstraction over an ordered variable list (K/S algorithm, no eta).
///
/// The compiled element `f` satisfies `f a1 ... an = t[a1,...,an]` whenever the
/// right-hand side is defined, and every partial application `f a1 ... a_{n-1}`
/// is defined outright because under-applied `K`/`S` spines are normal forms.
pub fn compile_abstraction(t: &Term, vars: &[&str]) -> Result<Term, CompileError> {
    let mut free = collect_vars(t);
    for v in vars {
        free.retain(|f| f != v);
    }
    if let Some(v) = free.first() {
        return Err(CompileError::UnlistedVariable(v.clone()));
    }
    let mut out = t.clone();
    for v in vars.iter().rev() {
        out = abstract_var(v, &out);
    }
    Ok(out)
}

/// Bracket abstraction that tolerates free variables in the body; used to
/// build nested abstractions inside-out.
pub fn bracket_open(t: &Term, vars: &[&str]) -> Term {
    let mut out = t.clone();
    for v in vars.iter().rev() {
        out = abstract_var(v, &out);
    }
    out
}

fn collect_vars(t: &Term) -> Vec<String> {
    let mut out = Vec::new();
    let mut stack = vec![t.clone()];
    while let Some(t) = stack.pop() {
        match &*t {
            CombTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            CombTerm::App(f, a) => {
                stack.push(f.clone());
                stack.push(a.clone());
            }
            _ => {}
        }
    }
    out
}

fn abstract_var(v: &str, t: &Term) -> Term {
    if !t.has_free(v) {
        return app(k(), t.clone());
    }
    match &**t {
        CombTerm::Var(_) => ski_i(),
        CombTerm::App(f, a) => apps(s(), &[abstract_var(v, f), abstract_var(v, a)]),
        // K and S have no free variables, handled above.
        _ => unreachable!(),
    }
}

/// `skk`, the identity element.
pub fn ski_i() -> Term {
    apps(s(), &[k(), k()])
}

/// The standard derived elements of any pca, all compiled from brackets.
#[derive(Clone)]
pub struct StdTerms {
    pub k: Term,
    pub s: Term,
    pub i: Term,
    pub p: Term,
    pub p0: Term,
    pub p1: Term,
    pub kbar: Term,
    /// Case dispatcher: `iota x y z = x y z`, so `iota k a b = a` and
    /// `iota kbar a b = b`.
    pub iota: Term,
}

impl StdTerms {
    pub fn new() -> StdTerms {
        let pair = compile_abstraction(
            &apps(var("z"), &[var("x"), var("y")]),
            &["x", "y", "z"],
        )
        .unwrap();
        let kbar = compile_abstraction(&var("b"), &["a", "b"]).unwrap();
        let p0 = compile_abstraction(&app(var("t"), k()), &["t"]).unwrap();
        let p1 = compile_abstraction(&app(var("t"), kbar.clone()), &["t"]).unwrap();
        let iota = compile_abstraction(
            &apps(var("x"), &[var("y"), var("z")]),
            &["x", "y", "z"],
        )
        .unwrap();
        StdTerms {
            k: k(),
            s: s(),
            i: ski_i(),
            p: pair,
            p0,
            p1,
            kbar,
            iota,
        }
    }

    /// `p a b` as a term.
    pub fn pair(&self, a: Term, b: Term) -> Term {
        apps(self.p.clone(), &[a, b])
    }

    pub fn proj0(&self, t: Term) -> Term {
        app(self.p0.clone(), t)
    }

    pub fn proj1(&self, t: Term) -> Term {
        app(self.p1.clone(), t)
    }
}

impl Default for StdTerms {
    fn default() -> Self {
        StdTerms::new()
    }
}

/// Curry numeral: `num(0) = skk`, `num(n+1) = p kbar num(n)`.
pub fn numeral(n: u64, std: &StdTerms) -> Term {
    let mut t = ski_i();
    for _ in 0..n {
        t = std.pair(std.kbar.clone(), t);
    }
    t
}

/// Decode a normalized Curry numeral back to a natural, if it is one.
pub fn numeral_value(t: &Term, std: &StdTerms, fuel: &mut u64) -> Option<u64> {
    let mut n = 0u64;
    let mut t = t.clone();
    loop {
        // p0 of a numeral is kbar for successors and k for zero, because
        // skk k reduces to k.
        let tag = whnf(app(std.p0.clone(), t.clone()), fuel).ok()?;
        if canon_eq(&tag, &k(), fuel) == Tri::Yes {
            return Some(n);
        }
        if canon_eq(&tag, &std.kbar, fuel) != Tri::Yes {
            return None;
        }
        n += 1;
        t = whnf(app(std.p1.clone(), t), fuel).ok()?;
    }
}

/// Guarded fixed point in the term model (Turing's combinator).
///
/// For `f` of arity >= 2 the result `z` is a weak head normal form with
/// `z a1 ... an` unfolding to `f z' a1 ... an` where `z'` reduces back to `z`.
pub fn fixpoint(f: &Term, fuel: &mut u64) -> Result<Term, FuelExhausted> {
    let a = compile_abstraction(
        &app(var("y"), apps(var("x"), &[var("x"), var("y")])),
        &["x", "y"],
    )
    .unwrap();
    whnf(apps(a.clone(), &[a, f.clone()]), fuel)
}

/// Enumerate all closed SK terms by size, then lexicographically with
/// `K < S < App` and with the function part ordered before the argument part.
/// Deterministic, so refutation sweeps are replayable.
pub fn closed_terms(count: usize) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(), vec![k(), s()]];
    let mut out: Vec<Term> = Vec::new();
    let mut size = 1usize;
    while out.len() < count {
        while by_size.len() <= size {
            let n = by_size.len();
            let mut terms = Vec::new();
            for left in 1..n.saturating_sub(1) {
                let right = n - 1 - left;
                for f in by_size[left].clone() {
                    for a in by_size[right].clone() {
                        terms.push(app(f.clone(), a.clone()));
                    }
                }
            }
            by_size.push(terms);
        }
        for t in &by_size[size] {
            if out.len() >= count {
                break;
            }
            out.push(t.clone());
        }
        size += 2; // terms over a two-constant signature have odd size
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected end of input at byte {0}")]
    UnexpectedEnd(usize),
    #[error("unexpected character `{1}` at byte {0}")]
    UnexpectedChar(usize, char),
    #[error("empty application list at byte {0}")]
    EmptyList(usize),
    #[error("nesting deeper than {0} levels")]
    TooDeep(usize),
    #[error("trailing input at byte {0}")]
    TrailingInput(usize),
}

const MAX_DEPTH: usize = 512;

/// Parse the textual S-expression syntax for terms, e.g. `(S (K S) K)`.
/// Lists of length >= 2 associate to the left; lowercase identifiers are
/// variables.
pub fn parse_term(input: &str) -> Result<Term, ParseError> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let term = parse_at(bytes, &mut pos, 0)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(ParseError::TrailingInput(pos));
    }
    Ok(term)
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && (bytes[*pos] as char).is_whitespace() {
        *pos += 1;
    }
}

fn parse_at(bytes: &[u8], pos: &mut usize, depth: usize) -> Result<Term, ParseError> {
    if depth > MAX_DEPTH {
        return Err(ParseError::TooDeep(MAX_DEPTH));
    }
    skip_ws(bytes, pos);
    if *pos >= bytes.len() {
        return Err(ParseError::UnexpectedEnd(*pos));
    }
    let c = bytes[*pos] as char;
    if c == '(' {
        *pos += 1;
        let mut items = Vec::new();
        loop {
            skip_ws(bytes, pos);
            if *pos >= bytes.len() {
                return Err(ParseError::UnexpectedEnd(*pos));
            }
            if bytes[*pos] == b')' {
                *pos += 1;
                break;
            }
            items.push(parse_at(bytes, pos, depth + 1)?);
        }
        let mut it = items.into_iter();
        let first = it.next().ok_or(ParseError::EmptyList(*pos))?;
        Ok(it.fold(first, app))
    } else if c == 'K' {
        *pos += 1;
        Ok(k())
    } else if c == 'S' {
        *pos += 1;
        Ok(s())
    } else if c.is_ascii_lowercase() {
        let start = *pos;
        while *pos < bytes.len() {
            let c = bytes[*pos] as char;
            if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                *pos += 1;
            } else {
                break;
            }
        }
        Ok(var(&input_slice(bytes, start, *pos)))
    } else {
        Err(ParseError::UnexpectedChar(*pos, c))
    }
}

fn input_slice(bytes: &[u8], start: usize, end: usize) -> String {
    String::from_utf8_lossy(&bytes[start..end]).into_owned()
}

impl fmt::Display for CombTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CombTerm::Var(v) => write!(f, "{v}"),
            CombTerm::K => write!(f, "K"),
            CombTerm::S => write!(f, "S"),
            CombTerm::App(..) => {
                let term = Rc::new(self.clone());
                let (head, args) = decompose(&term);
                write!(f, "({head}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for CombTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
