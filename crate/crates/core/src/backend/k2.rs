//! Kleene's second model: a pca on Baire space, with application defined by
//! the search `(ab)(n) = m` when the least `l` has `a(<(n) ^ b> restricted to
//! l)` equal to `m+1` and earlier prefixes map to `0`.
//!
//! Elements are lazy streams. Graph codes for continuous functions follow the
//! least-determining-prefix construction: the code maps `(n)^sigma` to `m+1`
//! exactly when `sigma` is the shortest prefix that settles output `m` at
//! position `n`, and to `0` otherwise.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigUint;

use crate::comb::{CombTerm, FuelExhausted, Term, Tri};

pub type Nat = BigUint;

pub fn nat(n: u64) -> Nat {
    BigUint::from(n)
}

/// Encode a finite string of naturals injectively: a leading 1 bit, then for
/// each value its binary digits doubled followed by the separator `01`.
pub fn encode_string(items: &[Nat]) -> Nat {
    let mut bits: Vec<bool> = vec![true];
    for v in items {
        let n_bits = v.bits();
        for i in (0..n_bits).rev() {
            let b = v.bit(i);
            bits.push(b);
            bits.push(b);
        }
        bits.push(false);
        bits.push(true);
    }
    // pack into big-endian bytes
    let total = bits.len();
    let nbytes = total.div_ceil(8);
    let mut bytes = vec![0u8; nbytes];
    let pad = nbytes * 8 - total;
    for (i, b) in bits.into_iter().enumerate() {
        if b {
            let pos = i + pad;
            bytes[pos / 8] |= 0x80 >> (pos % 8);
        }
    }
    Nat::from_bytes_be(&bytes)
}

/// Searches abandon the march once the argument string grows past this
/// length; treated as fuel exhaustion.
const MARCH_CAP: usize = 1024;

/// Decode a string code; `None` when the number is not a code.
pub fn decode_string(code: &Nat) -> Option<Vec<Nat>> {
    if *code == Nat::from(0u32) {
        return None;
    }
    let total = code.bits();
    // skip the leading marker bit
    let mut pos = (0..total - 1).rev();
    let mut out = Vec::new();
    let mut cur = Nat::from(0u32);
    loop {
        let Some(i) = pos.next() else {
            // input ended mid-value unless we are between values
            if cur == Nat::from(0u32) && out.is_empty() || cur == Nat::from(0u32) {
                // only valid if no value is in progress; we track that via
                // the `started` flag below instead
            }
            break;
        };
        let b1 = code.bit(i);
        let j = pos.next()?;
        let b2 = code.bit(j);
        match (b1, b2) {
            (false, true) => {
                out.push(cur.clone());
                cur = Nat::from(0u32);
            }
            (true, true) => {
                cur = (cur << 1) | Nat::from(1u32);
            }
            (false, false) => {
                cur <<= 1;
            }
            (true, false) => return None,
        }
    }
    if cur != Nat::from(0u32) {
        return None; // dangling value without terminator
    }
    Some(out)
}

/// A lazy element of Baire space. Position queries are memoized so repeated
/// observations are consistent.
#[derive(Clone)]
pub struct BaireElement(Rc<BaireNode>);

struct BaireNode {
    gen: BaireGen,
    cache: RefCell<HashMap<Nat, Nat>>,
}

enum BaireGen {
    /// Total stream given by a named generator.
    Stream(String, Rc<dyn Fn(&Nat) -> Nat>),
    /// Graph code evaluated through the least-prefix discipline.
    Code(String, Rc<dyn K2Code>),
    /// Result of applying one element to another; positions computed by the
    /// oracle search on demand.
    Apply(BaireElement, BaireElement),
    /// `k alpha`: the code of the constant-alpha function, with alpha random
    /// access. `(k alpha)(code (n)) = alpha(n) + 1`, zero elsewhere.
    KPartial(BaireElement),
    /// `s alpha` with random-access oracle alpha. The prefix-marching search
    /// would need prefixes as long as the inner string codes, so the partial
    /// applications of s are represented as oracle computations instead.
    SPartial1(BaireElement),
    /// `s alpha beta`, both oracles random access.
    SPartial2(BaireElement, BaireElement),
    /// Symbolic combinatory spine over ground streams.
    Mixed(Rc<Mixed>),
}

/// A continuous functional presented by its action on an explicit oracle
/// prefix. `eval` must be monotone: once `Some(m)` is returned for a prefix,
/// every extension returns the same `Some(m)`.
pub trait K2Code {
    fn eval(&self, pos: &Nat, prefix: &[Nat], fuel: &mut u64) -> Result<Option<Nat>, FuelExhausted>;
}

impl BaireElement {
    pub fn from_stream(name: &str, f: Rc<dyn Fn(&Nat) -> Nat>) -> BaireElement {
        BaireElement(Rc::new(BaireNode {
            gen: BaireGen::Stream(name.to_string(), f),
            cache: RefCell::new(HashMap::new()),
        }))
    }

    pub fn constant(c: u64) -> BaireElement {
        BaireElement::from_stream(&format!("const {c}"), Rc::new(move |_| nat(c)))
    }

    pub fn identity_stream() -> BaireElement {
        BaireElement::from_stream("id", Rc::new(|n| n.clone()))
    }

    pub fn shift_stream() -> BaireElement {
        BaireElement::from_stream("shift", Rc::new(|n| n + 1u32))
    }

    pub fn from_code(name: &str, code: Rc<dyn K2Code>) -> BaireElement {
        BaireElement(Rc::new(BaireNode {
            gen: BaireGen::Code(name.to_string(), code),
            cache: RefCell::new(HashMap::new()),
        }))
    }

    pub fn name(&self) -> String {
        match &self.0.gen {
            BaireGen::Stream(n, _) => n.clone(),
            BaireGen::Code(n, _) => n.clone(),
            BaireGen::Apply(f, a) => format!("({} {})", f.name(), a.name()),
            BaireGen::KPartial(a) => format!("(k2:k {})", a.name()),
            BaireGen::SPartial1(a) => format!("(k2:s {})", a.name()),
            BaireGen::SPartial2(a, b) => format!("(k2:s {} {})", a.name(), b.name()),
            BaireGen::Mixed(m) => mixed_name(m),
        }
    }

    /// Query one position; fuel bounds all searches triggered underneath.
    pub fn value(&self, pos: &Nat, fuel: &mut u64) -> Result<Nat, FuelExhausted> {
        if let Some(v) = self.0.cache.borrow().get(pos) {
            return Ok(v.clone());
        }
        let v = match &self.0.gen {
            BaireGen::Stream(_, f) => f(pos),
            BaireGen::Code(_, code) => code_value(code.as_ref(), pos, fuel)?,
            BaireGen::Apply(f, a) => {
                match apply_value(f, a, pos, fuel)? {
                    Some(v) => v,
                    None => return Err(FuelExhausted),
                }
            }
            BaireGen::KPartial(alpha) => {
                match decode_string(pos) {
                    Some(items) if items.len() == 1 => alpha.value(&items[0], fuel)? + 1u32,
                    _ => nat(0),
                }
            }
            BaireGen::SPartial1(alpha) => s_partial1_value(alpha, pos, fuel)?,
            BaireGen::SPartial2(alpha, beta) => s_partial2_value(alpha, beta, pos, fuel)?,
            BaireGen::Mixed(m) => {
                let ground = materialize(m, fuel)?;
                ground.value(pos, fuel)?
            }
        };
        self.0.cache.borrow_mut().insert(pos.clone(), v.clone());
        Ok(v)
    }

    pub fn value_at(&self, pos: u64, fuel: &mut u64) -> Result<Nat, FuelExhausted> {
        self.value(&nat(pos), fuel)
    }

    pub fn prefix(&self, len: usize, fuel: &mut u64) -> Result<Vec<Nat>, FuelExhausted> {
        (0..len).map(|i| self.value(&nat(i as u64), fuel)).collect()
    }

    /// Build an element from a closed combinatory term. Compiled terms are
    /// carried symbolically and reduced by the SK rules when applied; the
    /// raw k and s graph codes stay available for the stream-level law
    /// checks.
    pub fn from_term(t: &Term) -> BaireElement {
        assert!(t.is_closed(), "open term injected into K2");
        BaireElement::mixed(Rc::new(Mixed::T(t.clone())))
    }

    fn mixed(m: Rc<Mixed>) -> BaireElement {
        BaireElement(Rc::new(BaireNode {
            gen: BaireGen::Mixed(m),
            cache: RefCell::new(HashMap::new()),
        }))
    }

    /// The symbolic view of this element, if it carries one.
    fn as_mixed(&self) -> Rc<Mixed> {
        match &self.0.gen {
            BaireGen::Mixed(m) => m.clone(),
            _ => Rc::new(Mixed::E(self.clone())),
        }
    }
}

/// A combinatory spine over ground streams. Compiled witnesses act on
/// elements through the SK contraction rules; only when a ground stream ends
/// up in head position does the oracle search run.
pub enum Mixed {
    T(Term),
    E(BaireElement),
    App(Rc<Mixed>, Rc<Mixed>),
}

fn mixed_whnf(m: Rc<Mixed>, fuel: &mut u64) -> Result<Rc<Mixed>, FuelExhausted> {
    let mut head = m;
    let mut spine: Vec<Rc<Mixed>> = Vec::new();
    loop {
        match &*head {
            Mixed::App(f, a) => {
                spine.push(a.clone());
                head = f.clone();
            }
            Mixed::T(t) => match &**t {
                CombTerm::App(f, a) => {
                    spine.push(Rc::new(Mixed::T(a.clone())));
                    head = Rc::new(Mixed::T(f.clone()));
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
                    head = Rc::new(Mixed::App(
                        Rc::new(Mixed::App(a, c.clone())),
                        Rc::new(Mixed::App(b, c)),
                    ));
                }
                _ => break,
            },
            Mixed::E(_) => break,
        }
    }
    let mut t = head;
    while let Some(a) = spine.pop() {
        t = Rc::new(Mixed::App(t, a));
    }
    Ok(t)
}

/// Rebuild a pure term from a mixed node if no stream occurs in it.
fn mixed_as_term(m: &Mixed) -> Option<Term> {
    match m {
        Mixed::T(t) => Some(t.clone()),
        Mixed::E(_) => None,
        Mixed::App(f, a) => Some(crate::comb::app(mixed_as_term(f)?, mixed_as_term(a)?)),
    }
}

/// Turn a head-normal mixed node into a ground element.
fn materialize(m: &Rc<Mixed>, fuel: &mut u64) -> Result<BaireElement, FuelExhausted> {
    let m = mixed_whnf(m.clone(), fuel)?;
    if let Some(t) = mixed_as_term(&m) {
        return Ok(raw_from_term(&t));
    }
    // decompose the spine
    let mut head = m;
    let mut args: Vec<Rc<Mixed>> = Vec::new();
    while let Mixed::App(f, a) = &*head {
        args.push(a.clone());
        head = f.clone();
    }
    args.reverse();
    let mut cur = match &*head {
        Mixed::E(e) => e.clone(),
        Mixed::T(t) => raw_from_term(t),
        Mixed::App(..) => unreachable!(),
    };
    for a in args {
        let ae = materialize(&a, fuel)?;
        cur = ground_apply(&cur, &ae);
    }
    Ok(cur)
}

/// Injection that uses only the graph codes and their oracle-computation
/// partial applications, with no symbolic reduction.
fn raw_from_term(t: &Term) -> BaireElement {
    match &**t {
        CombTerm::K => k_element(),
        CombTerm::S => s_element(),
        CombTerm::App(f, a) => {
            ground_apply(&raw_from_term(f), &raw_from_term(a))
        }
        CombTerm::Var(v) => panic!("open term in K2 injection: {v}"),
    }
}

impl fmt::Display for BaireElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Application of ground elements. Applications of the s code route to the
/// random-access representation of its partial applications: the marching
/// search would need a prefix as long as the inner string codes before the
/// value settles, which no desk-scale budget reaches. The final application
/// of `s a b` still runs the search of the application formula.
fn ground_apply(a: &BaireElement, b: &BaireElement) -> BaireElement {
    let gen = match &a.0.gen {
        BaireGen::Code(name, _) if name == "k2:s" => BaireGen::SPartial1(b.clone()),
        BaireGen::Code(name, _) if name == "k2:k" => BaireGen::KPartial(b.clone()),
        BaireGen::SPartial1(alpha) => BaireGen::SPartial2(alpha.clone(), b.clone()),
        _ => BaireGen::Apply(a.clone(), b.clone()),
    };
    BaireElement(Rc::new(BaireNode {
        gen,
        cache: RefCell::new(HashMap::new()),
    }))
}

/// Application. Symbolic elements contract by the SK rules; ground streams
/// apply through the oracle search.
pub fn k2_apply_element(a: &BaireElement, b: &BaireElement) -> BaireElement {
    match (&a.0.gen, &b.0.gen) {
        (BaireGen::Mixed(_), _) | (_, BaireGen::Mixed(_)) => {
            let m = Rc::new(Mixed::App(a.as_mixed(), b.as_mixed()));
            BaireElement::mixed(m)
        }
        _ => ground_apply(a, b),
    }
}

/// The application search at one position: least `l <= fuel` with
/// `a(((n) ^ b) restricted to l)` nonzero.
pub fn k2_apply(a: &BaireElement, b: &BaireElement, n: u64, fuel: &mut u64) -> Result<Nat, FuelExhausted> {
    match apply_value(a, b, &nat(n), fuel)? {
        Some(v) => Ok(v),
        None => Err(FuelExhausted),
    }
}

fn apply_value(a: &BaireElement, b: &BaireElement, n: &Nat, fuel: &mut u64) -> Result<Option<Nat>, FuelExhausted> {
    let mut string = vec![n.clone()];
    loop {
        if *fuel == 0 || string.len() > MARCH_CAP {
            return Err(FuelExhausted);
        }
        *fuel -= 1;
        let code = encode_string(&string);
        let v = a.value(&code, fuel)?;
        if v != nat(0) {
            return Ok(Some(v - 1u32));
        }
        let next = b.value(&nat((string.len() - 1) as u64), fuel)?;
        string.push(next);
    }
}

/// Evaluate a graph code at a raw position: decode into `(n) ^ sigma` and
/// apply the least-prefix discipline.
fn code_value(code: &dyn K2Code, raw_pos: &Nat, fuel: &mut u64) -> Result<Nat, FuelExhausted> {
    let Some(items) = decode_string(raw_pos) else {
        return Ok(nat(0));
    };
    if items.is_empty() {
        return Ok(nat(0));
    }
    let pos = &items[0];
    let sigma = &items[1..];
    let full = code.eval(pos, sigma, fuel)?;
    match full {
        None => Ok(nat(0)),
        Some(m) => {
            if sigma.is_empty() {
                return Ok(m + 1u32);
            }
            match code.eval(pos, &sigma[..sigma.len() - 1], fuel)? {
                None => Ok(m + 1u32),
                Some(_) => Ok(nat(0)),
            }
        }
    }
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum K2Error {
    #[error("only unary total continuous functions are supported (got arity {0})")]
    UnsupportedArity(usize),
}

/// A total continuous `G: Baire -> Baire` with an explicit modulus: output
/// position `n` is determined by the first `modulus(n)` inputs.
pub type Modulus = Rc<dyn Fn(&Nat) -> Option<usize>>;
pub type StreamFn = Rc<dyn Fn(&[Nat], &Nat) -> Nat>;

pub struct ContinuousFn {
    pub name: String,
    pub arity: usize,
    pub modulus: Modulus,
    pub apply: StreamFn,
}

struct ModulusCode {
    f: ContinuousFn,
}

impl K2Code for ModulusCode {
    fn eval(&self, pos: &Nat, prefix: &[Nat], fuel: &mut u64) -> Result<Option<Nat>, FuelExhausted> {
        if *fuel == 0 {
            return Err(FuelExhausted);
        }
        *fuel -= 1;
        let Some(need) = (self.f.modulus)(pos) else {
            return Ok(None);
        };
        if prefix.len() >= need {
            Ok(Some((self.f.apply)(&prefix[..need], pos)))
        } else {
            Ok(None)
        }
    }
}

/// Build the graph code of a continuous function (the n = 1 construction).
pub fn k2_graph_from_continuous(f: ContinuousFn) -> Result<BaireElement, K2Error> {
    if f.arity != 1 {
        return Err(K2Error::UnsupportedArity(f.arity));
    }
    let name = format!("graph:{}", f.name);
    Ok(BaireElement::from_code(&name, Rc::new(ModulusCode { f })))
}

pub fn graph_of_identity() -> BaireElement {
    k2_graph_from_continuous(ContinuousFn {
        name: "id".to_string(),
        arity: 1,
        modulus: Rc::new(|n| usize::try_from(n.clone()).ok().map(|v| v + 1)),
        apply: Rc::new(|prefix, _n| prefix[prefix.len() - 1].clone()),
    })
    .unwrap()
}

pub fn graph_of_shift() -> BaireElement {
    k2_graph_from_continuous(ContinuousFn {
        name: "shift".to_string(),
        arity: 1,
        modulus: Rc::new(|n| usize::try_from(n.clone()).ok().map(|v| v + 2)),
        apply: Rc::new(|prefix, _n| prefix[prefix.len() - 1].clone()),
    })
    .unwrap()
}

/// Graph of `beta |-> (n |-> beta(n mod period))`. Unlike the identity graph
/// its modulus is bounded, so it stays cheap when queried at string-code
/// positions; used as the data-flowing sample in law checks.
pub fn graph_of_cyclic(period: u64) -> BaireElement {
    let p = nat(period);
    let p2 = p.clone();
    k2_graph_from_continuous(ContinuousFn {
        name: format!("cyclic{period}"),
        arity: 1,
        modulus: Rc::new(move |n| {
            let r = n % &p;
            usize::try_from(r).ok().map(|v| v + 1)
        }),
        apply: Rc::new(move |prefix, n| {
            let r = usize::try_from(n % &p2).unwrap();
            prefix[r].clone()
        }),
    })
    .unwrap()
}

pub fn graph_of_constant(c: u64) -> BaireElement {
    k2_graph_from_continuous(ContinuousFn {
        name: format!("const {c}"),
        arity: 1,
        modulus: Rc::new(|_| Some(0)),
        apply: Rc::new(move |_prefix, _n| nat(c)),
    })
    .unwrap()
}

/// The k element: the graph of `alpha |-> (code of the constant-alpha
/// function)`. Its defining clause: the code of the constant function needs
/// `alpha(j)` at length-1 positions `(j)` and nothing anywhere else.
struct KCode;

impl K2Code for KCode {
    fn eval(&self, pos: &Nat, prefix: &[Nat], fuel: &mut u64) -> Result<Option<Nat>, FuelExhausted> {
        if *fuel == 0 {
            return Err(FuelExhausted);
        }
        *fuel -= 1;
        let Some(items) = decode_string(pos) else {
            return Ok(Some(nat(0)));
        };
        if items.len() != 1 {
            return Ok(Some(nat(0)));
        }
        let Ok(j) = usize::try_from(items[0].clone()) else {
            return Ok(None);
        };
        if prefix.len() > j {
            Ok(Some(&prefix[j] + 1u32))
        } else {
            Ok(None)
        }
    }
}

pub fn k_element() -> BaireElement {
    BaireElement::from_code("k2:k", Rc::new(KCode))
}

/// Verdict of a partial evaluation against two oracles that may both run dry.
enum Res2 {
    Val(Nat),
    NeedA,
    NeedB,
}

#[derive(Default, Clone, Copy)]
struct Flags {
    a: bool,
    b: bool,
    g: bool,
}

type Ps<'a> = &'a dyn Fn(&Nat, &mut Flags, &mut u64) -> Result<Option<Nat>, FuelExhausted>;

fn prefix_stream<'a>(prefix: &'a [Nat], mark: fn(&mut Flags)) -> impl Fn(&Nat, &mut Flags, &mut u64) -> Result<Option<Nat>, FuelExhausted> + 'a {
    move |pos, flags, _fuel| {
        match usize::try_from(pos.clone()) {
            Ok(i) if i < prefix.len() => Ok(Some(prefix[i].clone())),
            _ => {
                mark(flags);
                Ok(None)
            }
        }
    }
}

/// The oracle application search over partial streams.
fn search(code: Ps, arg: Ps, n: &Nat, flags: &mut Flags, fuel: &mut u64) -> Result<Option<Nat>, FuelExhausted> {
    let mut string = vec![n.clone()];
    loop {
        if *fuel == 0 || string.len() > MARCH_CAP {
            return Err(FuelExhausted);
        }
        *fuel -= 1;
        let c = encode_string(&string);
        match code(&c, flags, fuel)? {
            None => return Ok(None),
            Some(v) if v != nat(0) => return Ok(Some(v - 1u32)),
            Some(_) => match arg(&nat((string.len() - 1) as u64), flags, fuel)? {
                None => return Ok(None),
                Some(x) => string.push(x),
            },
        }
    }
}

/// `((alpha gamma)(beta gamma))(n)` with alpha, beta given as partial or
/// random-access oracles and gamma as a prefix.
fn s3(
    n: &Nat,
    a_ps: Ps,
    b_ps: Ps,
    sg: &[Nat],
    fuel: &mut u64,
) -> Result<(Option<Nat>, Flags), FuelExhausted> {
    let mut flags = Flags::default();
    let g_ps = prefix_stream(sg, |f| f.g = true);
    let x_ps = |c: &Nat, fl: &mut Flags, fu: &mut u64| search(a_ps, &g_ps, c, fl, fu);
    let y_ps = |c: &Nat, fl: &mut Flags, fu: &mut u64| search(b_ps, &g_ps, c, fl, fu);
    let r = search(&x_ps, &y_ps, n, &mut flags, fuel)?;
    Ok((r, flags))
}

/// `(s alpha beta)(c2)`; the gamma prefix is part of the position `c2`.
fn s2(c2: &Nat, a_ps: Ps, b_ps: Ps, fuel: &mut u64) -> Result<Res2, FuelExhausted> {
    let Some(items) = decode_string(c2) else {
        return Ok(Res2::Val(nat(0)));
    };
    if items.is_empty() {
        return Ok(Res2::Val(nat(0)));
    }
    let n = &items[0];
    let sg = &items[1..];
    let (r, flags) = s3(n, a_ps, b_ps, sg, fuel)?;
    if flags.a {
        return Ok(Res2::NeedA);
    }
    if flags.b {
        return Ok(Res2::NeedB);
    }
    let Some(v) = r else {
        // only the gamma prefix ran dry: the value is settled and it is 0
        return Ok(Res2::Val(nat(0)));
    };
    if sg.is_empty() {
        return Ok(Res2::Val(v + 1u32));
    }
    let (r2, f2) = s3(n, a_ps, b_ps, &sg[..sg.len() - 1], fuel)?;
    if f2.a {
        return Ok(Res2::NeedA);
    }
    if f2.b {
        return Ok(Res2::NeedB);
    }
    match r2 {
        Some(_) => Ok(Res2::Val(nat(0))),
        None => Ok(Res2::Val(v + 1u32)),
    }
}

fn element_stream(e: &BaireElement) -> impl Fn(&Nat, &mut Flags, &mut u64) -> Result<Option<Nat>, FuelExhausted> + '_ {
    move |pos, _flags, fuel| e.value(pos, fuel).map(Some)
}

/// `(s alpha)(pos)` with alpha random access.
fn s_partial1_value(alpha: &BaireElement, pos: &Nat, fuel: &mut u64) -> Result<Nat, FuelExhausted> {
    let Some(items) = decode_string(pos) else {
        return Ok(nat(0));
    };
    if items.is_empty() {
        return Ok(nat(0));
    }
    let c2 = &items[0];
    let sb = &items[1..];
    let a_ps = element_stream(alpha);
    let b_ps = prefix_stream(sb, |f| f.b = true);
    match s2(c2, &a_ps, &b_ps, fuel)? {
        Res2::NeedA => Err(FuelExhausted),
        Res2::NeedB => Ok(nat(0)),
        Res2::Val(v) => {
            if sb.is_empty() {
                return Ok(v + 1u32);
            }
            let b_short = prefix_stream(&sb[..sb.len() - 1], |f| f.b = true);
            match s2(c2, &a_ps, &b_short, fuel)? {
                Res2::NeedA => Err(FuelExhausted),
                Res2::NeedB => Ok(v + 1u32),
                Res2::Val(_) => Ok(nat(0)),
            }
        }
    }
}

/// `(s alpha beta)(pos)` with both oracles random access.
fn s_partial2_value(alpha: &BaireElement, beta: &BaireElement, pos: &Nat, fuel: &mut u64) -> Result<Nat, FuelExhausted> {
    let Some(items) = decode_string(pos) else {
        return Ok(nat(0));
    };
    if items.is_empty() {
        return Ok(nat(0));
    }
    let n = &items[0];
    let sg = &items[1..];
    let a_ps = element_stream(alpha);
    let b_ps = element_stream(beta);
    let (r, _flags) = s3(n, &a_ps, &b_ps, sg, fuel)?;
    let Some(v) = r else {
        return Ok(nat(0));
    };
    if sg.is_empty() {
        return Ok(v + 1u32);
    }
    let (r2, _f2) = s3(n, &a_ps, &b_ps, &sg[..sg.len() - 1], fuel)?;
    match r2 {
        Some(_) => Ok(nat(0)),
        None => Ok(v + 1u32),
    }
}

/// The s element as a graph code: `(s alpha)` is the code of
/// `beta |-> (code of gamma |-> (alpha gamma)(beta gamma))`.
struct SCode;

impl K2Code for SCode {
    fn eval(&self, pos: &Nat, prefix: &[Nat], fuel: &mut u64) -> Result<Option<Nat>, FuelExhausted> {
        if *fuel == 0 {
            return Err(FuelExhausted);
        }
        *fuel -= 1;
        let Some(items) = decode_string(pos) else {
            return Ok(Some(nat(0)));
        };
        if items.is_empty() {
            return Ok(Some(nat(0)));
        }
        let c2 = &items[0];
        let sb = &items[1..];
        let a_ps = prefix_stream(prefix, |f| f.a = true);
        let b_ps = prefix_stream(sb, |f| f.b = true);
        match s2(c2, &a_ps, &b_ps, fuel)? {
            Res2::NeedA => Ok(None),
            Res2::NeedB => Ok(Some(nat(0))),
            Res2::Val(v) => {
                if sb.is_empty() {
                    return Ok(Some(v + 1u32));
                }
                let b_short = prefix_stream(&sb[..sb.len() - 1], |f| f.b = true);
                match s2(c2, &a_ps, &b_short, fuel)? {
                    Res2::NeedA => Ok(None),
                    Res2::NeedB => Ok(Some(v + 1u32)),
                    Res2::Val(_) => Ok(Some(nat(0))),
                }
            }
        }
    }
}

pub fn s_element() -> BaireElement {
    BaireElement::from_code("k2:s", Rc::new(SCode))
}

fn mixed_name(m: &Mixed) -> String {
    match m {
        Mixed::T(t) => format!("{t}"),
        Mixed::E(e) => e.name(),
        Mixed::App(f, a) => format!("({} {})", mixed_name(f), mixed_name(a)),
    }
}

/// Canonical equality: symbolic elements compare as terms of the SK model,
/// ground streams compare by prefix.
pub fn canon_eq_k2(a: &BaireElement, b: &BaireElement, len: usize, fuel: &mut u64) -> Tri {
    if let (BaireGen::Mixed(ma), BaireGen::Mixed(mb)) = (&a.0.gen, &b.0.gen) {
        let ra = mixed_whnf(ma.clone(), fuel);
        let rb = mixed_whnf(mb.clone(), fuel);
        if let (Ok(ra), Ok(rb)) = (ra, rb) {
            if let (Some(ta), Some(tb)) = (mixed_as_term(&ra), mixed_as_term(&rb)) {
                return crate::comb::canon_eq(&ta, &tb, fuel);
            }
        }
    }
    eq_prefix(a, b, len, fuel)
}

/// Prefix equality up to `len`, Unknown on fuel exhaustion.
pub fn eq_prefix(a: &BaireElement, b: &BaireElement, len: usize, fuel: &mut u64) -> Tri {
    for i in 0..len {
        let va = a.value(&nat(i as u64), fuel);
        let vb = b.value(&nat(i as u64), fuel);
        match (va, vb) {
            (Ok(x), Ok(y)) => {
                if x != y {
                    return Tri::No;
                }
            }
            _ => return Tri::Unknown,
        }
    }
    Tri::Yes
}

/// Fixed registry of named sample streams for corpus files and suites.
pub fn registry_stream(name: &str) -> Option<BaireElement> {
    if let Some(rest) = name.strip_prefix("const ") {
        let c: u64 = rest.trim().parse().ok()?;
        return Some(BaireElement::constant(c));
    }
    match name {
        "id" => Some(BaireElement::identity_stream()),
        "shift" => Some(BaireElement::shift_stream()),
        "graph:id" => Some(graph_of_identity()),
        "graph:shift" => Some(graph_of_shift()),
        "graph:cyclic8" => Some(graph_of_cyclic(8)),
        "k" => Some(k_element()),
        "s" => Some(s_element()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FUEL: u64 = 2_000_000;

    #[test]
    fn string_coding_roundtrip() {
        for items in [
            vec![],
            vec![nat(0)],
            vec![nat(5)],
            vec![nat(3), nat(0), nat(7)],
            vec![nat(100), nat(2)],
        ] {
            let c = encode_string(&items);
            assert_eq!(decode_string(&c), Some(items));
        }
        assert_eq!(decode_string(&nat(0)), None);
    }

    #[test]
    fn coding_is_injective_on_samples() {
        let mut seen = std::collections::HashSet::new();
        for a in 0..6u64 {
            for b in 0..6u64 {
                let c = encode_string(&[nat(a), nat(b)]);
                assert!(seen.insert(c));
            }
        }
    }

    #[test]
    fn constant_one_code_applies_to_zero() {
        // constant-1 stream read as a code: nonzero at l = 0 with m = 0
        let a = BaireElement::constant(1);
        let b = BaireElement::shift_stream();
        let mut fuel = FUEL;
        for n in 0..5 {
            assert_eq!(k2_apply(&a, &b, n, &mut fuel).unwrap(), nat(0));
        }
    }

    #[test]
    fn constant_zero_code_diverges() {
        let a = BaireElement::constant(0);
        let b = BaireElement::constant(7);
        let mut fuel = 10_000;
        assert_eq!(k2_apply(&a, &b, 0, &mut fuel), Err(FuelExhausted));
    }

    #[test]
    fn identity_graph_applies() {
        let g = graph_of_identity();
        let mut fuel = FUEL;
        for b in [BaireElement::identity_stream(), BaireElement::shift_stream(), BaireElement::constant(4)] {
            for n in 0..8u64 {
                let want = b.value(&nat(n), &mut fuel).unwrap();
                let got = k2_apply(&g, &b, n, &mut fuel).unwrap();
                assert_eq!(got, want, "stream {} at {n}", b.name());
            }
        }
    }

    #[test]
    fn shift_graph_applies() {
        let g = graph_of_shift();
        let mut fuel = FUEL;
        for b in [BaireElement::identity_stream(), BaireElement::constant(9)] {
            for n in 0..8u64 {
                let want = b.value(&nat(n + 1), &mut fuel).unwrap();
                let got = k2_apply(&g, &b, n, &mut fuel).unwrap();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn constant_graph_applies() {
        let g = graph_of_constant(0);
        let mut fuel = FUEL;
        let b = BaireElement::identity_stream();
        for n in 0..6u64 {
            assert_eq!(k2_apply(&g, &b, n, &mut fuel).unwrap(), nat(0));
        }
    }

    #[test]
    fn k_law_on_streams() {
        let k = k_element();
        let mut fuel = FUEL;
        let streams = [
            BaireElement::identity_stream(),
            BaireElement::shift_stream(),
            BaireElement::constant(3),
        ];
        for a in &streams {
            for b in &streams {
                let ka = k2_apply_element(&k, a);
                let kab = k2_apply_element(&ka, b);
                assert_eq!(eq_prefix(&kab, a, 8, &mut fuel), Tri::Yes, "k {} {}", a.name(), b.name());
            }
        }
    }

    #[test]
    fn s_law_on_streams() {
        let s = s_element();
        let mut fuel = 60_000_000;
        // function positions: graph codes with bounded moduli; argument
        // position: streams whose values keep the searches converging
        let funs = [graph_of_cyclic(8), graph_of_constant(2), graph_of_constant(1)];
        let args = [
            BaireElement::shift_stream(),
            BaireElement::constant(1),
            BaireElement::constant(3),
        ];
        for a in &funs {
            for b in &funs {
                for c in &args {
                    let sab = k2_apply_element(&k2_apply_element(&s, a), b);
                    let sabc = k2_apply_element(&sab, c);
                    let direct = k2_apply_element(
                        &k2_apply_element(a, c),
                        &k2_apply_element(b, c),
                    );
                    let verdict = eq_prefix(&sabc, &direct, 4, &mut fuel);
                    assert_eq!(verdict, Tri::Yes, "s {} {} {}", a.name(), b.name(), c.name());
                }
            }
        }
    }

    #[test]
    fn arity_two_rejected() {
        let r = k2_graph_from_continuous(ContinuousFn {
            name: "binary".into(),
            arity: 2,
            modulus: Rc::new(|_| Some(0)),
            apply: Rc::new(|_, _| nat(0)),
        });
        assert!(matches!(r, Err(K2Error::UnsupportedArity(2))));
    }

    #[test]
    fn registry_lookup() {
        assert!(registry_stream("const 5").is_some());
        assert!(registry_stream("id").is_some());
        assert!(registry_stream("nope").is_none());
    }
}
