//! Scott's graph model: a total pca on lazily described subsets of omega.
//!
//! Application is `ab = {m : exists n (<n,m> in a and d_n subset b)}` with
//! Cantor pairing for `<.,.>` and `d_n = {i : bit i of n is 1}`. Membership
//! tests are truncation-bounded and tri-state: `In`/`Out` answers are stable
//! as the truncation grows, `Unknown` may resolve.

use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

use crate::comb::{CombTerm, Term, Tri};

/// Cantor pairing, first component is the finite-set code.
pub fn pair(n: u64, m: u64) -> u64 {
    let s = n + m;
    s * (s + 1) / 2 + m
}

pub fn unpair(c: u64) -> (u64, u64) {
    // largest s with s(s+1)/2 <= c
    let mut s = ((((8 * c + 1) as f64).sqrt() as u64).saturating_sub(1)) / 2;
    while (s + 1) * (s + 2) / 2 <= c {
        s += 1;
    }
    while s * (s + 1) / 2 > c {
        s -= 1;
    }
    let m = c - s * (s + 1) / 2;
    (s - m, m)
}

/// The finite set `d_n` coded by the bits of `n`.
pub fn dset(n: u64) -> BTreeSet<u64> {
    (0..64).filter(|i| n >> i & 1 == 1).collect()
}

pub fn dcode(s: &BTreeSet<u64>) -> Option<u64> {
    let mut n: u64 = 0;
    for &i in s {
        if i >= 64 {
            return None;
        }
        n |= 1 << i;
    }
    Some(n)
}

/// Exact application of two concrete finite sets.
pub fn app_fin(a: &BTreeSet<u64>, b: &BTreeSet<u64>) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for &c in a {
        let (n, m) = unpair(c);
        if dset(n).is_subset(b) {
            out.insert(m);
        }
    }
    out
}

/// Monotone function given by a finite table of finite sets.
#[derive(Clone, Debug)]
pub struct MonotoneTable {
    entries: Vec<(BTreeSet<u64>, BTreeSet<u64>)>,
}

#[derive(Debug, PartialEq, Eq)]
pub struct NotMonotone {
    pub smaller: BTreeSet<u64>,
    pub larger: BTreeSet<u64>,
}

impl MonotoneTable {
    pub fn new(entries: Vec<(BTreeSet<u64>, BTreeSet<u64>)>) -> Result<Self, NotMonotone> {
        for (i1, o1) in &entries {
            for (i2, o2) in &entries {
                if i1.is_subset(i2) && !o1.is_subset(o2) {
                    return Err(NotMonotone {
                        smaller: i1.clone(),
                        larger: i2.clone(),
                    });
                }
            }
        }
        Ok(MonotoneTable { entries })
    }

    /// Continuous completion: union of outputs over table inputs below `x`.
    pub fn at(&self, x: &BTreeSet<u64>) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for (i, o) in &self.entries {
            if i.is_subset(x) {
                out.extend(o.iter().copied());
            }
        }
        out
    }

    pub fn entries(&self) -> &[(BTreeSet<u64>, BTreeSet<u64>)] {
        &self.entries
    }
}

/// A subset of omega, possibly given by a lazy description.
#[derive(Clone)]
pub struct GraphElement(Rc<GraphNode>);

enum GraphNode {
    Finite(BTreeSet<u64>),
    /// Complement of a finite set.
    Cofinite(BTreeSet<u64>),
    /// Graph of a monotone finite-table function: `{<n,m> : m in f(d_n)}`.
    Table(MonotoneTable),
    /// The pca constant k as a graph.
    K,
    /// The pca constant s as a graph.
    S,
    /// `k a`: the set `{<n,m> : m in a}`.
    PairsOf(GraphElement),
    /// `s a`: `{<n2,<n3,m>> : m in (a d_n3)(d_n2 d_n3)}`.
    S1(GraphElement),
    /// `s a b`: `{<n3,m> : m in (a d_n3)(b d_n3)}`.
    S2(GraphElement, GraphElement),
    /// `graph(fun(a))`, the action of `1 = s(k(skk))`.
    FunGraph(GraphElement),
    /// The paradoxical combinator: `{<n,m> : m in lfp(fun(d_n))}`.
    Fix,
    /// The element g with `g c = graph(fun(c))`.
    GraphOp,
    /// Unevaluated application.
    Apply(GraphElement, GraphElement),
}

/// Budget for one membership/equality query. Truncation bounds witness
/// searches; steps bound overall work so deep chains degrade to `Unknown`
/// rather than running away.
#[derive(Clone, Copy, Debug)]
pub struct ScottCtx {
    pub truncation: u64,
    pub steps: u64,
}

impl Default for ScottCtx {
    fn default() -> Self {
        ScottCtx {
            truncation: 1 << 10,
            steps: 2_000_000,
        }
    }
}

struct Budget {
    steps: u64,
}

impl Budget {
    fn tick(&mut self) -> bool {
        if self.steps == 0 {
            return false;
        }
        self.steps -= 1;
        true
    }
}

impl GraphElement {
    pub fn finite<I: IntoIterator<Item = u64>>(items: I) -> GraphElement {
        GraphElement(Rc::new(GraphNode::Finite(items.into_iter().collect())))
    }

    pub fn empty() -> GraphElement {
        GraphElement::finite([])
    }

    pub fn all_nats() -> GraphElement {
        GraphElement(Rc::new(GraphNode::Cofinite(BTreeSet::new())))
    }

    pub fn cofinite<I: IntoIterator<Item = u64>>(excluded: I) -> GraphElement {
        GraphElement(Rc::new(GraphNode::Cofinite(excluded.into_iter().collect())))
    }

    pub fn from_table(t: MonotoneTable) -> GraphElement {
        GraphElement(Rc::new(GraphNode::Table(t)))
    }

    pub fn k() -> GraphElement {
        GraphElement(Rc::new(GraphNode::K))
    }

    pub fn s() -> GraphElement {
        GraphElement(Rc::new(GraphNode::S))
    }

    pub fn fix() -> GraphElement {
        GraphElement(Rc::new(GraphNode::Fix))
    }

    pub fn graph_op() -> GraphElement {
        GraphElement(Rc::new(GraphNode::GraphOp))
    }

    pub fn fun_graph(a: &GraphElement) -> GraphElement {
        GraphElement(Rc::new(GraphNode::FunGraph(a.clone())))
    }

    /// Build an element from a closed combinatory term.
    pub fn from_term(t: &Term) -> GraphElement {
        match &**t {
            CombTerm::K => GraphElement::k(),
            CombTerm::S => GraphElement::s(),
            CombTerm::App(f, a) => {
                scott_apply(&GraphElement::from_term(f), &GraphElement::from_term(a))
            }
            CombTerm::Var(v) => panic!("open term injected into Scott model: {v}"),
        }
    }

    pub fn membership(&self, m: u64, ctx: &ScottCtx) -> Tri {
        let mut budget = Budget { steps: ctx.steps };
        membership(self, m, ctx.truncation, &mut budget)
    }

    /// Sound partial enumeration; the flag is true when the listing is the
    /// entire set.
    pub fn enumerate(&self, ctx: &ScottCtx) -> (Vec<u64>, bool) {
        let mut budget = Budget { steps: ctx.steps };
        enumerate(self, ctx.truncation, &mut budget)
    }
}

/// Application in the graph model; total, evaluated lazily at query time.
pub fn scott_apply(a: &GraphElement, b: &GraphElement) -> GraphElement {
    GraphElement(Rc::new(GraphNode::Apply(a.clone(), b.clone())))
}

/// Resolve an application chain to a structural head where possible. The
/// rewrites follow the defining sets of k, s, and graph(fun(.)) pointwise;
/// they are the continuity facts of the model, not the pca laws themselves.
fn head(e: &GraphElement, budget: &mut Budget) -> Option<GraphElement> {
    if !budget.tick() {
        return None;
    }
    let GraphNode::Apply(f, b) = &*e.0 else {
        return Some(e.clone());
    };
    let hf = head(f, budget)?;
    Some(match &*hf.0 {
        // omega x = omega: witness n = 0 works for every m
        GraphNode::Cofinite(excl) if excl.is_empty() => hf.clone(),
        GraphNode::K => GraphElement(Rc::new(GraphNode::PairsOf(b.clone()))),
        GraphNode::PairsOf(a) => return head(a, budget),
        GraphNode::S => GraphElement(Rc::new(GraphNode::S1(b.clone()))),
        GraphNode::S1(a) => GraphElement(Rc::new(GraphNode::S2(a.clone(), b.clone()))),
        GraphNode::S2(x, y) => {
            let t = scott_apply(&scott_apply(x, b), &scott_apply(y, b));
            return head(&t, budget);
        }
        GraphNode::GraphOp => GraphElement::fun_graph(b),
        // fun(graph(fun(a))) = fun(a)
        GraphNode::FunGraph(a) => return head(&scott_apply(a, b), budget),
        _ => GraphElement(Rc::new(GraphNode::Apply(hf, b.clone()))),
    })
}

fn subset_tri(n: u64, b: &GraphElement, trunc: u64, budget: &mut Budget) -> Tri {
    let mut out = Tri::Yes;
    for i in dset(n) {
        match membership(b, i, trunc, budget) {
            Tri::Yes => {}
            Tri::No => return Tri::No,
            Tri::Unknown => out = Tri::Unknown,
        }
    }
    out
}

fn membership(e: &GraphElement, m: u64, trunc: u64, budget: &mut Budget) -> Tri {
    if !budget.tick() {
        return Tri::Unknown;
    }
    match &*e.0 {
        GraphNode::Finite(s) => {
            if s.contains(&m) {
                Tri::Yes
            } else {
                Tri::No
            }
        }
        GraphNode::Cofinite(excl) => {
            if excl.contains(&m) {
                Tri::No
            } else {
                Tri::Yes
            }
        }
        GraphNode::Table(t) => {
            let (n, v) = unpair(m);
            if t.at(&dset(n)).contains(&v) {
                Tri::Yes
            } else {
                Tri::No
            }
        }
        GraphNode::K => {
            let (n1, rest) = unpair(m);
            let (_n2, v) = unpair(rest);
            if dset(n1).contains(&v) {
                Tri::Yes
            } else {
                Tri::No
            }
        }
        GraphNode::S => {
            let (n1, rest) = unpair(m);
            let (n2, rest2) = unpair(rest);
            let (n3, v) = unpair(rest2);
            let d1 = dset(n1);
            let d2 = dset(n2);
            let d3 = dset(n3);
            if app_fin(&app_fin(&d1, &d3), &app_fin(&d2, &d3)).contains(&v) {
                Tri::Yes
            } else {
                Tri::No
            }
        }
        GraphNode::PairsOf(a) => {
            let (_n, v) = unpair(m);
            membership(a, v, trunc, budget)
        }
        GraphNode::S1(a) => {
            let (n2, rest) = unpair(m);
            let (n3, v) = unpair(rest);
            let d2 = GraphElement::finite(dset(n2));
            let d3 = GraphElement::finite(dset(n3));
            let lhs = scott_apply(a, &d3);
            let rhs = scott_apply(&d2, &d3);
            membership(&scott_apply(&lhs, &rhs), v, trunc, budget)
        }
        GraphNode::S2(a, b) => {
            let (n3, v) = unpair(m);
            let d3 = GraphElement::finite(dset(n3));
            let lhs = scott_apply(a, &d3);
            let rhs = scott_apply(b, &d3);
            membership(&scott_apply(&lhs, &rhs), v, trunc, budget)
        }
        GraphNode::FunGraph(a) => {
            let (n, v) = unpair(m);
            // finitely many l with d_l subset of d_n
            let mut out = Tri::No;
            for l in subset_codes(n) {
                match membership(a, pair(l, v), trunc, budget) {
                    Tri::Yes => return Tri::Yes,
                    Tri::No => {}
                    Tri::Unknown => out = Tri::Unknown,
                }
            }
            out
        }
        GraphNode::Fix => {
            let (n, v) = unpair(m);
            if lfp(&dset(n)).contains(&v) {
                Tri::Yes
            } else {
                Tri::No
            }
        }
        GraphNode::GraphOp => {
            let (n, u) = unpair(m);
            let (l, v) = unpair(u);
            let dn = dset(n);
            for l2 in subset_codes(l) {
                if dn.contains(&pair(l2, v)) {
                    return Tri::Yes;
                }
            }
            Tri::No
        }
        GraphNode::Apply(..) => {
            let Some(h) = head(e, budget) else {
                return Tri::Unknown;
            };
            if let GraphNode::Apply(f, b) = &*h.0 {
                apply_membership(f, b, m, trunc, budget)
            } else {
                membership(&h, m, trunc, budget)
            }
        }
    }
}

/// Least fixed point of `fun(d)` starting from the empty set. Converges
/// because outputs are drawn from the second components of pairs in `d`.
fn lfp(d: &BTreeSet<u64>) -> BTreeSet<u64> {
    let mut x = BTreeSet::new();
    loop {
        let next = app_fin(d, &x);
        if next == x {
            return x;
        }
        x = next;
    }
}

/// All codes l with `d_l` a subset of `d_n`.
fn subset_codes(n: u64) -> Vec<u64> {
    let bits: Vec<u64> = dset(n).into_iter().collect();
    let mut out = Vec::with_capacity(1 << bits.len().min(16));
    let count = 1u64 << bits.len().min(16);
    for mask in 0..count {
        let mut l = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if mask >> i & 1 == 1 {
                l |= 1 << b;
            }
        }
        out.push(l);
    }
    out
}

/// Membership in `f b` where `f` did not rewrite to a structural head,
/// computed from the defining formula of application.
fn apply_membership(f: &GraphElement, b: &GraphElement, m: u64, trunc: u64, budget: &mut Budget) -> Tri {
    match &*f.0 {
        GraphNode::Finite(s) => {
            let mut out = Tri::No;
            for &c in s.iter() {
                let (n, v) = unpair(c);
                if v != m {
                    continue;
                }
                match subset_tri(n, b, trunc, budget) {
                    Tri::Yes => return Tri::Yes,
                    Tri::No => {}
                    Tri::Unknown => out = Tri::Unknown,
                }
            }
            out
        }
        GraphNode::Cofinite(excl) => {
            // Candidate witnesses n must satisfy d_n subset b; try n = 0 and
            // codes over observed members of b.
            if !excl.contains(&pair(0, m)) {
                return Tri::Yes;
            }
            let mut members = Vec::new();
            let mut incomplete = false;
            for j in 0..32 {
                match membership(b, j, trunc, budget) {
                    Tri::Yes => members.push(j),
                    Tri::No => {}
                    Tri::Unknown => incomplete = true,
                }
                if members.len() >= 12 {
                    incomplete = true;
                    break;
                }
            }
            let mut set = BTreeSet::new();
            if let Some(t) = try_subsets(&members, &mut set, excl, m) {
                return t;
            }
            if incomplete {
                Tri::Unknown
            } else {
                Tri::No
            }
        }
        GraphNode::Table(t) => {
            let mut out = Tri::No;
            for (input, output) in t.entries() {
                if !output.contains(&m) {
                    continue;
                }
                let Some(code) = dcode(input) else { continue };
                match subset_tri(code, b, trunc, budget) {
                    Tri::Yes => return Tri::Yes,
                    Tri::No => {}
                    Tri::Unknown => out = Tri::Unknown,
                }
            }
            out
        }
        GraphNode::Fix => {
            // m in y b iff m appears in the increasing iteration of fun(b).
            let mut x = GraphElement::empty();
            for _ in 0..24 {
                if !budget.tick() {
                    return Tri::Unknown;
                }
                let next = scott_apply(b, &x);
                if membership(&next, m, trunc, budget) == Tri::Yes { return Tri::Yes }
                let (items, complete) = enumerate(&next, trunc, budget);
                if !complete {
                    // cannot certify convergence; report what the scan saw
                    let (prev, prev_complete) = enumerate(&x, trunc, budget);
                    if prev_complete && items == prev {
                        return Tri::No;
                    }
                    return Tri::Unknown;
                }
                let (prev, prev_complete) = enumerate(&x, trunc, budget);
                if prev_complete && items == prev {
                    return Tri::No; // fixed point reached without m
                }
                x = GraphElement::finite(items);
            }
            Tri::Unknown
        }
        _ => {
            // generic scan over a sound enumeration of f
            let (pairs, complete) = enumerate(f, trunc, budget);
            let mut out = if complete { Tri::No } else { Tri::Unknown };
            for c in pairs {
                let (n, v) = unpair(c);
                if v != m {
                    continue;
                }
                match subset_tri(n, b, trunc, budget) {
                    Tri::Yes => return Tri::Yes,
                    Tri::No => {}
                    Tri::Unknown => out = Tri::Unknown,
                }
            }
            out
        }
    }
}

fn try_subsets(members: &[u64], acc: &mut BTreeSet<u64>, excl: &BTreeSet<u64>, m: u64) -> Option<Tri> {
    // depth-first over subsets of observed members, looking for a witness
    // code not excluded
    fn rec(members: &[u64], idx: usize, acc: &mut BTreeSet<u64>, excl: &BTreeSet<u64>, m: u64) -> Option<Tri> {
        if idx == members.len() {
            let code = dcode(acc)?;
            if !excl.contains(&pair(code, m)) {
                return Some(Tri::Yes);
            }
            return None;
        }
        if let Some(t) = rec(members, idx + 1, acc, excl, m) {
            return Some(t);
        }
        acc.insert(members[idx]);
        let r = rec(members, idx + 1, acc, excl, m);
        acc.remove(&members[idx]);
        r
    }
    rec(members, 0, acc, excl, m)
}

fn enumerate(e: &GraphElement, trunc: u64, budget: &mut Budget) -> (Vec<u64>, bool) {
    if !budget.tick() {
        return (Vec::new(), false);
    }
    let cap = trunc.min(4096) as usize;
    match &*e.0 {
        GraphNode::Finite(s) => (s.iter().copied().collect(), true),
        GraphNode::Cofinite(excl) => {
            let mut out = Vec::new();
            let mut v = 0u64;
            while out.len() < cap.min(64) {
                if !excl.contains(&v) {
                    out.push(v);
                }
                v += 1;
            }
            (out, false)
        }
        GraphNode::Table(t) => {
            let mut out = Vec::new();
            for (input, output) in t.entries() {
                if let Some(code) = dcode(input) {
                    for &m in output {
                        out.push(pair(code, m));
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            (out, false)
        }
        GraphNode::K => {
            let mut out = Vec::new();
            for m in 0..16 {
                out.push(pair(1 << m, pair(0, m)));
            }
            (out, false)
        }
        GraphNode::S => {
            let mut out = Vec::new();
            for n1 in 0..16u64 {
                for n2 in 0..8u64 {
                    for n3 in 0..8u64 {
                        let r = app_fin(
                            &app_fin(&dset(n1), &dset(n3)),
                            &app_fin(&dset(n2), &dset(n3)),
                        );
                        for m in r {
                            out.push(pair(n1, pair(n2, pair(n3, m))));
                        }
                        if out.len() > cap {
                            return (out, false);
                        }
                    }
                }
            }
            (out, false)
        }
        GraphNode::PairsOf(a) => {
            let (items, _) = enumerate(a, trunc, budget);
            (items.into_iter().map(|m| pair(0, m)).collect(), false)
        }
        GraphNode::FunGraph(a) => {
            // every <l,m> of a is itself a member, with n = l
            let (items, _) = enumerate(a, trunc, budget);
            (items, false)
        }
        GraphNode::S1(_) | GraphNode::S2(..) | GraphNode::Fix | GraphNode::GraphOp => {
            // scan small codes against the exact membership predicate
            let mut out = Vec::new();
            for c in 0..(trunc.min(1024)) {
                if membership(e, c, trunc, budget) == Tri::Yes {
                    out.push(c);
                }
                if out.len() > cap {
                    break;
                }
            }
            (out, false)
        }
        GraphNode::Apply(..) => {
            let Some(h) = head(e, budget) else {
                return (Vec::new(), false);
            };
            if let GraphNode::Apply(f, b) = &*h.0 {
                let (pairs, f_complete) = enumerate(f, trunc, budget);
                let mut out = Vec::new();
                let mut definite = f_complete;
                for c in pairs {
                    let (n, m) = unpair(c);
                    match subset_tri(n, b, trunc, budget) {
                        Tri::Yes => out.push(m),
                        Tri::No => {}
                        Tri::Unknown => definite = false,
                    }
                }
                out.sort_unstable();
                out.dedup();
                (out, definite)
            } else {
                enumerate(&h, trunc, budget)
            }
        }
    }
}

/// Evaluate the function of an element on a finite input: the exact finite
/// set of outputs observable at the truncation.
pub fn scott_fun(a: &GraphElement, input: &BTreeSet<u64>, ctx: &ScottCtx) -> BTreeSet<u64> {
    let applied = scott_apply(a, &GraphElement::finite(input.iter().copied()));
    let mut out = BTreeSet::new();
    for m in 0..ctx.truncation.min(64) {
        if applied.membership(m, ctx) == Tri::Yes {
            out.insert(m);
        }
    }
    out
}

/// Truncation-bounded extensional equality: compare membership on all codes
/// below the observation bound.
pub fn eq_at(a: &GraphElement, b: &GraphElement, obs: u64, ctx: &ScottCtx) -> Tri {
    let mut out = Tri::Yes;
    for m in 0..obs {
        let ta = a.membership(m, ctx);
        let tb = b.membership(m, ctx);
        match (ta, tb) {
            (Tri::Yes, Tri::No) | (Tri::No, Tri::Yes) => return Tri::No,
            (Tri::Unknown, _) | (_, Tri::Unknown) => out = Tri::Unknown,
            _ => {}
        }
    }
    out
}

impl fmt::Display for GraphElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", describe(self))
    }
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphParseError {
    #[error("bad graph element literal: {0}")]
    Bad(String),
}

/// Parse the corpus literal syntax: `{}`, `{1,4}`, `N`, `coN{2}`,
/// `pairs[(0,5),(3,1)]`.
pub fn parse_graph_literal(s: &str) -> Result<GraphElement, GraphParseError> {
    let s = s.trim();
    let bad = || GraphParseError::Bad(s.to_string());
    if s == "N" {
        return Ok(GraphElement::all_nats());
    }
    if let Some(rest) = s.strip_prefix("coN{") {
        let inner = rest.strip_suffix('}').ok_or_else(bad)?;
        let items = parse_nat_list(inner).ok_or_else(bad)?;
        return Ok(GraphElement::cofinite(items));
    }
    if let Some(rest) = s.strip_prefix('{') {
        let inner = rest.strip_suffix('}').ok_or_else(bad)?;
        let items = parse_nat_list(inner).ok_or_else(bad)?;
        return Ok(GraphElement::finite(items));
    }
    if let Some(rest) = s.strip_prefix("pairs[") {
        let inner = rest.strip_suffix(']').ok_or_else(bad)?;
        let mut out = Vec::new();
        let inner = inner.trim();
        if !inner.is_empty() {
            for part in split_pairs(inner).ok_or_else(bad)? {
                let (a, b) = part;
                out.push(pair(a, b));
            }
        }
        return Ok(GraphElement::finite(out));
    }
    Err(bad())
}

fn parse_nat_list(s: &str) -> Option<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|p| p.trim().parse().ok()).collect()
}

fn split_pairs(s: &str) -> Option<Vec<(u64, u64)>> {
    let mut out = Vec::new();
    for chunk in s.split("),") {
        let chunk = chunk.trim().trim_start_matches('(').trim_end_matches(')');
        let mut it = chunk.split(',');
        let a = it.next()?.trim().parse().ok()?;
        let b = it.next()?.trim().parse().ok()?;
        if it.next().is_some() {
            return None;
        }
        out.push((a, b));
    }
    Some(out)
}

pub fn describe(e: &GraphElement) -> String {
    match &*e.0 {
        GraphNode::Finite(s) => {
            let items: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            format!("{{{}}}", items.join(","))
        }
        GraphNode::Cofinite(s) if s.is_empty() => "N".to_string(),
        GraphNode::Cofinite(s) => {
            let items: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            format!("coN{{{}}}", items.join(","))
        }
        GraphNode::Table(_) => "graph(table)".to_string(),
        GraphNode::K => "k".to_string(),
        GraphNode::S => "s".to_string(),
        GraphNode::PairsOf(a) => format!("(k {})", describe(a)),
        GraphNode::S1(a) => format!("(s {})", describe(a)),
        GraphNode::S2(a, b) => format!("(s {} {})", describe(a), describe(b)),
        GraphNode::FunGraph(a) => format!("graph(fun({}))", describe(a)),
        GraphNode::Fix => "y".to_string(),
        GraphNode::GraphOp => "g".to_string(),
        GraphNode::Apply(f, a) => format!("({} {})", describe(f), describe(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ScottCtx {
        ScottCtx::default()
    }

    /// Brute-force oracle: evaluate the defining formula of application by
    /// scanning all witness codes below the truncation, with the arguments
    /// given as exact predicates.
    fn oracle_apply(a: &dyn Fn(u64) -> bool, b: &dyn Fn(u64) -> bool, m: u64, trunc: u64) -> bool {
        (0..trunc).any(|n| a(pair(n, m)) && dset(n).iter().all(|&i| b(i)))
    }

    fn k_def(c: u64) -> bool {
        let (n1, rest) = unpair(c);
        let (_n2, v) = unpair(rest);
        dset(n1).contains(&v)
    }

    #[test]
    fn pairing_bijection() {
        for c in 0..2000 {
            let (n, m) = unpair(c);
            assert_eq!(pair(n, m), c);
        }
        assert_eq!(pair(0, 5), 20);
    }

    #[test]
    fn apply_of_pair_set() {
        // a = {<0,5>}: every application contains 5 since d_0 is empty
        let a = GraphElement::finite([pair(0, 5)]);
        for b in [GraphElement::empty(), GraphElement::finite([1, 2]), GraphElement::all_nats()] {
            assert_eq!(scott_apply(&a, &b).membership(5, &ctx()), Tri::Yes);
            assert_eq!(scott_apply(&a, &b).membership(4, &ctx()), Tri::No);
        }
    }

    #[test]
    fn empty_applies_to_empty() {
        let e = GraphElement::empty();
        for b in [GraphElement::finite([3]), GraphElement::all_nats()] {
            for m in 0..16 {
                assert_eq!(scott_apply(&e, &b).membership(m, &ctx()), Tri::No);
            }
        }
    }

    #[test]
    fn allnats_applies_to_allnats() {
        // for every m pick n = 0
        let a = GraphElement::all_nats();
        let b = GraphElement::finite([7]);
        for m in 0..64 {
            assert_eq!(scott_apply(&a, &b).membership(m, &ctx()), Tri::Yes);
        }
    }

    #[test]
    fn k_law_against_oracle() {
        let samples = [
            GraphElement::empty(),
            GraphElement::finite([0, 3]),
            GraphElement::finite([1, 4]),
            GraphElement::all_nats(),
        ];
        let descr: Vec<Box<dyn Fn(u64) -> bool>> = vec![
            Box::new(|_| false),
            Box::new(|m| m == 0 || m == 3),
            Box::new(|m| m == 1 || m == 4),
            Box::new(|_| true),
        ];
        for (ai, a) in samples.iter().enumerate() {
            for b in samples.iter() {
                let kab = scott_apply(&scott_apply(&GraphElement::k(), a), b);
                for m in 0..12 {
                    let got = kab.membership(m, &ctx());
                    let want = if descr[ai](m) { Tri::Yes } else { Tri::No };
                    assert_eq!(got, want, "kab vs a at m={m}");
                }
            }
        }
        // cross-check k a b against the raw double-scan oracle on one pair
        let a = |c: u64| c == 0 || c == 3;
        let b = |c: u64| c == 1;
        for m in 0..8 {
            let ka = |c: u64| oracle_apply(&k_def, &a, c, 1 << 10);
            let direct = oracle_apply(&ka, &b, m, 1 << 10);
            assert_eq!(direct, a(m), "oracle sanity at m={m}");
        }
    }

    #[test]
    fn s_law_matches_direct_application() {
        let els = [
            GraphElement::k(),
            GraphElement::finite([pair(0, 2), pair(1, 3)]),
            GraphElement::finite([0, 1]),
            GraphElement::all_nats(),
        ];
        for a in &els {
            for b in &els {
                for c in &els {
                    let sabc = scott_apply(
                        &scott_apply(&scott_apply(&GraphElement::s(), a), b),
                        c,
                    );
                    let direct = scott_apply(&scott_apply(a, c), &scott_apply(b, c));
                    assert_eq!(eq_at(&sabc, &direct, 12, &ctx()), Tri::Yes);
                }
            }
        }
    }

    #[test]
    fn graph_fun_roundtrip() {
        let id_table = MonotoneTable::new(vec![
            (BTreeSet::new(), BTreeSet::new()),
            ([3].into(), [3].into()),
            ([7].into(), [7].into()),
            ([3, 7].into(), [3, 7].into()),
        ])
        .unwrap();
        let g = GraphElement::from_table(id_table.clone());
        let applied = scott_apply(&g, &GraphElement::finite([3, 7]));
        assert_eq!(applied.membership(3, &ctx()), Tri::Yes);
        assert_eq!(applied.membership(7, &ctx()), Tri::Yes);
        assert_eq!(applied.membership(5, &ctx()), Tri::No);
    }

    #[test]
    fn fun_graph_characterization() {
        // 1 a = graph(fun(a)) for a = {pair(1,4)}: <n,4> in it iff d_1 subset d_n
        let a = GraphElement::finite([pair(1, 4)]);
        let one_a = GraphElement::fun_graph(&a);
        for n in 0..64u64 {
            let want = dset(1).is_subset(&dset(n));
            let got = one_a.membership(pair(n, 4), &ctx());
            assert_eq!(got, if want { Tri::Yes } else { Tri::No }, "n={n}");
        }
    }

    #[test]
    fn one_via_term_matches_fun_graph() {
        // 1 = s(k(skk)); 1 a should behave as graph(fun(a))
        use crate::comb::{app, apps, k as kt, s as st, ski_i};
        let one = GraphElement::from_term(&apps(st(), &[app(kt(), ski_i())]));
        let a = GraphElement::finite([pair(1, 4), pair(0, 2)]);
        let via_term = scott_apply(&one, &a);
        let via_def = GraphElement::fun_graph(&a);
        assert_eq!(eq_at(&via_term, &via_def, 64, &ctx()), Tri::Yes);
    }

    #[test]
    fn meyer_scott_core_facts() {
        use crate::comb::{app, apps, k as kt, s as st, ski_i};
        let one = GraphElement::from_term(&apps(st(), &[app(kt(), ski_i())]));
        let a = GraphElement::empty();
        let b = GraphElement::all_nats();
        let one_a = scott_apply(&one, &a);
        let one_b = scott_apply(&one, &b);
        for m in 0..32 {
            assert_eq!(one_a.membership(m, &ctx()), Tri::No, "1a should be empty");
        }
        assert_eq!(one_b.membership(pair(0, 0), &ctx()), Tri::Yes);
    }

    #[test]
    fn fun_of_graph_recovers_table() {
        // fun(graph(f)) agrees with f on the table inputs
        let table = MonotoneTable::new(vec![
            (BTreeSet::new(), BTreeSet::new()),
            ([1].into(), [2].into()),
            ([3].into(), [4].into()),
            ([1, 3].into(), [2, 4, 5].into()),
        ])
        .unwrap();
        let g = GraphElement::from_table(table.clone());
        for (input, output) in table.entries() {
            let got = scott_fun(&g, input, &ctx());
            assert_eq!(&got, output, "at table input {input:?}");
        }
        // graph(fun(a)) membership matches the subset characterization
        let a = GraphElement::finite([pair(1, 4)]);
        let ga = GraphElement::fun_graph(&a);
        for n in 0..32u64 {
            let want = dset(1).is_subset(&dset(n));
            assert_eq!(
                ga.membership(pair(n, 4), &ctx()) == Tri::Yes,
                want,
                "characterization at {n}"
            );
        }
    }

    #[test]
    fn application_monotone_in_argument() {
        // b subset b' (observed) implies a b subset a b' at the truncation
        let elems = [
            GraphElement::k(),
            GraphElement::finite([pair(1, 2), pair(3, 7)]),
            GraphElement::fun_graph(&GraphElement::finite([pair(1, 4)])),
        ];
        let small = GraphElement::finite([0]);
        let big = GraphElement::finite([0, 1, 3]);
        for a in &elems {
            let ab = scott_apply(a, &small);
            let ab2 = scott_apply(a, &big);
            for m in 0..24 {
                if ab.membership(m, &ctx()) == Tri::Yes {
                    assert_eq!(
                        ab2.membership(m, &ctx()),
                        Tri::Yes,
                        "monotonicity broken at {m} for {a}"
                    );
                }
            }
        }
    }

    #[test]
    fn parse_literals() {
        assert_eq!(
            describe(&parse_graph_literal("{1,4}").unwrap()),
            "{1,4}"
        );
        assert_eq!(describe(&parse_graph_literal("{}").unwrap()), "{}");
        assert_eq!(describe(&parse_graph_literal("N").unwrap()), "N");
        assert_eq!(describe(&parse_graph_literal("coN{2}").unwrap()), "coN{2}");
        let p = parse_graph_literal("pairs[(0,5),(3,1)]").unwrap();
        assert_eq!(p.membership(pair(0, 5), &ctx()), Tri::Yes);
        assert_eq!(p.membership(pair(3, 1), &ctx()), Tri::Yes);
        assert!(parse_graph_literal("junk").is_err());
    }

    #[test]
    fn monotone_table_rejects_bad() {
        let r = MonotoneTable::new(vec![
            (BTreeSet::new(), [1].into()),
            ([2].into(), BTreeSet::new()),
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn paradoxical_combinator_fixed_point() {
        // y g with g the graph op: c (y (g c)) = y (g c) for sampled c
        let y = GraphElement::fix();
        let g = GraphElement::graph_op();
        let samples = [
            GraphElement::finite([pair(0, 1), pair(2, 3)]),
            GraphElement::k(),
        ];
        for c in samples {
            let gc = scott_apply(&g, &c);
            let ygc = scott_apply(&y, &gc);
            let c_ygc = scott_apply(&c, &ygc);
            assert_ne!(eq_at(&c_ygc, &ygc, 8, &ctx()), Tri::No);
        }
    }
}
