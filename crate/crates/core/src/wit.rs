//! The uniform witness kit: closed combinators realizing the Heyting
//! prealgebra structure (e1..e12) and the laws of the generalized
//! double-negation operator (d1..d10), identical term shapes in every
//! backend.
//!
//! Notation in comments: `O x` is `(x => d) => d` for the ambient `d`, and
//! `w : X ~> Y` says `w a` lands in `Y` for every `a` in `X`.

use crate::comb::{app, apps, bracket_open, var, StdTerms, Term};

/// Closed witness terms, built once per process.
pub struct WitnessKit {
    pub std: StdTerms,
    pub e1: Term,
    pub e2: Term,
    pub e3: Term,
    pub e4: Term,
    pub e5: Term,
    pub e6: Term,
    pub e7: Term,
    pub e8: Term,
    pub e9: Term,
    pub e10: Term,
    pub e11: Term,
    pub e12: Term,
    /// help1: x & (x=>z) <= z, by `c |-> (p1 c)(p0 c)`.
    pub help1: Term,
    /// help2 as a function of the premise witness: u : x~>y gives
    /// `w |-> a |-> w (u a) : (y=>z) ~> (x=>z)`.
    pub help2: Term,
    /// help3: (x=>y) & (y=>z) <= x=>z.
    pub help3: Term,
    /// d1, monotonicity: from u : x~>y build `O x ~> O y`.
    pub d1: Term,
    /// d2: x <= O x, by `a |-> h |-> h a`.
    pub d2: Term,
    /// d3: O O x <= O x.
    pub d3: Term,
    /// d5: O(x=>y) <= O x => O y.
    pub d5: Term,
    /// d6: O x v O y <= O(x v y).
    pub d6: Term,
    /// d7 forward: O(x & y) <= O x & O y.
    pub d7: Term,
    /// d7 backward.
    pub d7r: Term,
    /// d8: O_d d <= d, by `t |-> t i`.
    pub d8: Term,
    /// d9: d <= O_d x (this is just k).
    pub d9: Term,
    /// d10 forward: (O x => d) <= (x => d).
    pub d10: Term,
    /// d10 backward.
    pub d10r: Term,
    /// dtop backward: top <= O top (forward is the identity).
    pub dtopr: Term,
}

fn lam(vars: &[&str], body: Term) -> Term {
    bracket_open(&body, vars)
}

impl WitnessKit {
    pub fn new() -> WitnessKit {
        let std = StdTerms::new();
        let p = std.p.clone();
        let p0 = std.p0.clone();
        let p1 = std.p1.clone();
        let k = std.k.clone();
        let kbar = std.kbar.clone();
        let i = std.i.clone();
        let iota = std.iota.clone();

        // e1 a = p k a, e2 b = p kbar b (tagged injections)
        let e1 = lam(&["a"], apps(p.clone(), &[k.clone(), var("a")]));
        let e2 = lam(&["b"], apps(p.clone(), &[kbar.clone(), var("b")]));
        // e3 w c = (iota (p0 c) (p0 w) (p1 w)) (p1 c)   case split on a join
        let e3 = lam(
            &["w", "c"],
            app(
                apps(
                    iota.clone(),
                    &[
                        app(p0.clone(), var("c")),
                        app(p0.clone(), var("w")),
                        app(p1.clone(), var("w")),
                    ],
                ),
                app(p1.clone(), var("c")),
            ),
        );
        // e4 w c = p ((p0 w) c) ((p1 w) c)
        let e4 = lam(
            &["w", "c"],
            apps(
                p.clone(),
                &[
                    app(app(p0.clone(), var("w")), var("c")),
                    app(app(p1.clone(), var("w")), var("c")),
                ],
            ),
        );
        let e5 = p0.clone();
        let e6 = p1.clone();
        let e7 = i.clone();
        let e8 = i.clone();
        let e9 = i.clone();
        // e10 w c = (p1 w)((p0 w) c)    composition
        let e10 = lam(
            &["w", "c"],
            app(
                app(p1.clone(), var("w")),
                app(app(p0.clone(), var("w")), var("c")),
            ),
        );
        // e11 w y x = w (p x y)    currying
        let e11 = lam(
            &["w", "y", "x"],
            app(var("w"), apps(p.clone(), &[var("x"), var("y")])),
        );
        // e12 w c = (w (p1 c)) (p0 c)   uncurrying
        let e12 = lam(
            &["w", "c"],
            app(
                app(var("w"), app(p1.clone(), var("c"))),
                app(p0.clone(), var("c")),
            ),
        );

        let help1 = lam(
            &["c"],
            app(app(p1.clone(), var("c")), app(p0.clone(), var("c"))),
        );
        let help2 = lam(&["u", "w", "a"], app(var("w"), app(var("u"), var("a"))));
        let help3 = lam(
            &["c", "a"],
            app(
                app(p1.clone(), var("c")),
                app(app(p0.clone(), var("c")), var("a")),
            ),
        );

        // d1 u t h = t (\a. h (u a))
        let d1 = lam(
            &["u", "t", "h"],
            app(
                var("t"),
                lam(&["a"], app(var("h"), app(var("u"), var("a")))),
            ),
        );
        // d2 a h = h a
        let d2 = lam(&["a", "h"], app(var("h"), var("a")));
        // d3 t u = t (\w. w u)
        let d3 = lam(
            &["t", "u"],
            app(var("t"), lam(&["w"], app(var("w"), var("u")))),
        );
        // d5 t u h = t (\v. u (\a. h (v a)))
        let d5 = lam(
            &["t", "u", "h"],
            app(
                var("t"),
                lam(
                    &["v"],
                    app(
                        var("u"),
                        lam(&["a"], app(var("h"), app(var("v"), var("a")))),
                    ),
                ),
            ),
        );
        // d6 c = iota (p0 c) <lift-left> <lift-right> (p1 c)
        let lift_left = lam(
            &["t", "h"],
            app(
                var("t"),
                lam(
                    &["a"],
                    app(var("h"), apps(p.clone(), &[k.clone(), var("a")])),
                ),
            ),
        );
        let lift_right = lam(
            &["t", "h"],
            app(
                var("t"),
                lam(
                    &["b"],
                    app(var("h"), apps(p.clone(), &[kbar.clone(), var("b")])),
                ),
            ),
        );
        let d6 = lam(
            &["c"],
            app(
                apps(
                    iota.clone(),
                    &[app(p0.clone(), var("c")), lift_left, lift_right],
                ),
                app(p1.clone(), var("c")),
            ),
        );
        // d7 t = p (\h. t (\c. h (p0 c))) (\h. t (\c. h (p1 c)))
        let d7 = lam(
            &["t"],
            apps(
                p.clone(),
                &[
                    lam(
                        &["h"],
                        app(
                            var("t"),
                            lam(&["c"], app(var("h"), app(p0.clone(), var("c")))),
                        ),
                    ),
                    lam(
                        &["h"],
                        app(
                            var("t"),
                            lam(&["c"], app(var("h"), app(p1.clone(), var("c")))),
                        ),
                    ),
                ],
            ),
        );
        // d7r c h = (p0 c) (\a. (p1 c) (\b. h (p a b)))
        let d7r = lam(
            &["c", "h"],
            app(
                app(p0.clone(), var("c")),
                lam(
                    &["a"],
                    app(
                        app(p1.clone(), var("c")),
                        lam(
                            &["b"],
                            app(var("h"), apps(p.clone(), &[var("a"), var("b")])),
                        ),
                    ),
                ),
            ),
        );
        // d8 t = t i
        let d8 = lam(&["t"], app(var("t"), i.clone()));
        let d9 = k.clone();
        // d10 u a = u (\h. h a)
        let d10 = lam(
            &["u", "a"],
            app(var("u"), lam(&["h"], app(var("h"), var("a")))),
        );
        // d10r u t = t u
        let d10r = lam(&["u", "t"], app(var("t"), var("u")));
        let dtopr = d2.clone();

        let kit = WitnessKit {
            std,
            e1,
            e2,
            e3,
            e4,
            e5,
            e6,
            e7,
            e8,
            e9,
            e10,
            e11,
            e12,
            help1,
            help2,
            help3,
            d1,
            d2,
            d3,
            d5,
            d6,
            d7,
            d7r,
            d8,
            d9,
            d10,
            d10r,
            dtopr,
        };
        for (name, t) in kit.named() {
            assert!(t.is_closed(), "witness {name} is not closed");
        }
        kit
    }

    pub fn named(&self) -> Vec<(&'static str, Term)> {
        vec![
            ("e1", self.e1.clone()),
            ("e2", self.e2.clone()),
            ("e3", self.e3.clone()),
            ("e4", self.e4.clone()),
            ("e5", self.e5.clone()),
            ("e6", self.e6.clone()),
            ("e7", self.e7.clone()),
            ("e8", self.e8.clone()),
            ("e9", self.e9.clone()),
            ("e10", self.e10.clone()),
            ("e11", self.e11.clone()),
            ("e12", self.e12.clone()),
            ("help1", self.help1.clone()),
            ("help2", self.help2.clone()),
            ("help3", self.help3.clone()),
            ("d1", self.d1.clone()),
            ("d2", self.d2.clone()),
            ("d3", self.d3.clone()),
            ("d4", self.d3.clone()),
            ("d4r", self.d2.clone()),
            ("d5", self.d5.clone()),
            ("d6", self.d6.clone()),
            ("d7", self.d7.clone()),
            ("d7r", self.d7r.clone()),
            ("d8", self.d8.clone()),
            ("d9", self.d9.clone()),
            ("d10", self.d10.clone()),
            ("d10r", self.d10r.clone()),
            ("dtop", self.std.i.clone()),
            ("dtopr", self.dtopr.clone()),
        ]
    }
}

impl Default for WitnessKit {
    fn default() -> Self {
        WitnessKit::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{canon_eq, numeral, Tri};

    #[test]
    fn gadget_reductions() {
        let kit = WitnessKit::new();
        let std = &kit.std;
        let mut fuel = 1_000_000u64;
        let a = numeral(2, std);
        let b = numeral(3, std);
        // help1: c = p a w, (p1 c)(p0 c) = w a; take w = k b
        let w = app(std.k.clone(), b.clone());
        let c = std.pair(a.clone(), w);
        let got = app(kit.help1.clone(), c);
        assert_eq!(canon_eq(&got, &b, &mut fuel), Tri::Yes);
        // d2: d2 a h = h a with h = k b
        let got = apps(kit.d2.clone(), &[a.clone(), app(std.k.clone(), b.clone())]);
        assert_eq!(canon_eq(&got, &b, &mut fuel), Tri::Yes);
        // e10 composition: (e10 (p f g)) x = g (f x), f = k a, g = i
        let f = app(std.k.clone(), a.clone());
        let pair = std.pair(f, std.i.clone());
        let got = apps(kit.e10.clone(), &[pair, b.clone()]);
        assert_eq!(canon_eq(&got, &a, &mut fuel), Tri::Yes);
        // d8: t i with t = k b
        let got = app(kit.d8.clone(), app(std.k.clone(), b.clone()));
        assert_eq!(canon_eq(&got, &b, &mut fuel), Tri::Yes);
    }

    #[test]
    fn iota_dispatch() {
        let kit = WitnessKit::new();
        let std = &kit.std;
        let mut fuel = 100_000u64;
        let a = numeral(1, std);
        let b = numeral(2, std);
        let l = apps(std.iota.clone(), &[std.k.clone(), a.clone(), b.clone()]);
        assert_eq!(canon_eq(&l, &a, &mut fuel), Tri::Yes);
        let r = apps(std.iota.clone(), &[std.kbar.clone(), a, b.clone()]);
        assert_eq!(canon_eq(&r, &b, &mut fuel), Tri::Yes);
    }
}
