//! Machine-checked derivations of the helper laws and the laws of the
//! generalized double-negation operator, each encoding the corresponding
//! appendix proof. Extraction of these feeds the witness library.

use std::rc::Rc;

use super::{
    fle, himp, hjoin, hmeet, hominus, hvar, Axiom, Derivation, EhpFormula, HTerm, Subst,
};

fn ax(a: Axiom, s: Subst) -> Derivation {
    Derivation::Ax(a, s)
}

fn rc(d: Derivation) -> Rc<Derivation> {
    Rc::new(d)
}

/// Compose two reductions, reading their conclusions under the given
/// context to instantiate the transitivity axiom.
fn trans(ctx: &[EhpFormula], d1: Derivation, d2: Derivation) -> Derivation {
    let f1 = d1.validate(ctx).expect("trans: left premise invalid");
    let f2 = d2.validate(ctx).expect("trans: right premise invalid");
    let (EhpFormula::Le(a, b), EhpFormula::Le(b2, c)) = (&f1, &f2) else {
        panic!("trans over non-reductions: {f1} / {f2}");
    };
    assert_eq!(b, b2, "trans: middle terms differ: {b} vs {b2}");
    Derivation::ImpElim {
        imp: rc(ax(
            Axiom::Trans,
            Subst::of(&[("x", a.clone()), ("y", b.clone()), ("z", c.clone())]),
        )),
        arg: rc(Derivation::AndIntro(rc(d1), rc(d2))),
    }
}

fn meet_intro(ctx: &[EhpFormula], d1: Derivation, d2: Derivation) -> Derivation {
    let f1 = d1.validate(ctx).expect("meet_intro: left invalid");
    let f2 = d2.validate(ctx).expect("meet_intro: right invalid");
    let (EhpFormula::Le(w, a), EhpFormula::Le(w2, b)) = (&f1, &f2) else {
        panic!("meet_intro over non-reductions");
    };
    assert_eq!(w, w2);
    Derivation::ImpElim {
        imp: rc(ax(
            Axiom::MeetIntro,
            Subst::of(&[("z", w.clone()), ("x", a.clone()), ("y", b.clone())]),
        )),
        arg: rc(Derivation::AndIntro(rc(d1), rc(d2))),
    }
}

/// Residuation inward: from `x & y <= z` conclude `y <= x => z`.
fn resid_in(ctx: &[EhpFormula], premise: Derivation) -> Derivation {
    let f = premise.validate(ctx).expect("resid_in premise invalid");
    let EhpFormula::Le(m, z) = &f else {
        panic!("resid_in over a non-reduction")
    };
    let HTerm::Meet(x, y) = m else {
        panic!("resid_in premise is not a meet: {m}")
    };
    Derivation::ImpElim {
        imp: rc(ax(
            Axiom::ResidIn,
            Subst::of(&[("x", (**x).clone()), ("y", (**y).clone()), ("z", z.clone())]),
        )),
        arg: rc(premise),
    }
}

fn elim_l(a: &HTerm, b: &HTerm) -> Derivation {
    ax(
        Axiom::MeetElimL,
        Subst::of(&[("x", a.clone()), ("y", b.clone())]),
    )
}

fn elim_r(a: &HTerm, b: &HTerm) -> Derivation {
    ax(
        Axiom::MeetElimR,
        Subst::of(&[("x", a.clone()), ("y", b.clone())]),
    )
}

fn refl(a: &HTerm) -> Derivation {
    ax(Axiom::Refl, Subst::one("x", a.clone()))
}

/// `a & b <= b & a`.
fn swap(a: &HTerm, b: &HTerm) -> Derivation {
    meet_intro(&[], elim_r(a, b), elim_l(a, b))
}

/// help1: `x & (x => z) <= z`, residuation applied to reflexivity.
pub fn help1_deriv(x: &HTerm, z: &HTerm) -> Derivation {
    let xz = himp(x.clone(), z.clone());
    Derivation::ImpElim {
        imp: rc(ax(
            Axiom::ResidOut,
            Subst::of(&[("x", x.clone()), ("y", xz.clone()), ("z", z.clone())]),
        )),
        arg: rc(refl(&xz)),
    }
}

/// help2: `(x <= y) => ((y => z) <= (x => z))`.
pub fn help2_deriv(x: &HTerm, y: &HTerm, z: &HTerm) -> Derivation {
    let hyp = fle(x.clone(), y.clone());
    let ctx = [hyp.clone()];
    let yz = himp(y.clone(), z.clone());
    // x & (y=>z) <= y through the hypothesis, and <= (y=>z)
    let to_y = trans(&ctx, elim_l(x, &yz), Derivation::Hyp(0));
    let step = meet_intro(&ctx, to_y, elim_r(x, &yz));
    // x & (y=>z) <= y & (y=>z) <= z
    let down = trans(&ctx, step, help1_deriv(y, z));
    Derivation::ImpIntro {
        hyp,
        body: rc(resid_in(&ctx, down)),
    }
}

/// help3: `(x=>y) & (y=>z) <= (x=>z)` by two applications of help1.
pub fn help3_deriv(x: &HTerm, y: &HTerm, z: &HTerm) -> Derivation {
    let xy = himp(x.clone(), y.clone());
    let yz = himp(y.clone(), z.clone());
    let pair = hmeet(xy.clone(), yz.clone());
    // x & ((x=>y) & (y=>z)) <= x & (x=>y) <= y, then pair with y=>z
    let to_x_xy = meet_intro(
        &[],
        elim_l(x, &pair),
        trans(&[], elim_r(x, &pair), elim_l(&xy, &yz)),
    );
    let to_y = trans(&[], to_x_xy, help1_deriv(x, y));
    let to_y_yz = meet_intro(&[], to_y, trans(&[], elim_r(x, &pair), elim_r(&xy, &yz)));
    let down = trans(&[], to_y_yz, help1_deriv(y, z));
    resid_in(&[], down)
}

/// d1: `(x <= y) => (O x <= O y)` by antitonicity of the conditional twice.
pub fn d1_deriv(x: &HTerm, y: &HTerm, d: &HTerm) -> Derivation {
    let xd = himp(x.clone(), d.clone());
    let yd = himp(y.clone(), d.clone());
    let step1 = Derivation::ImpElim {
        imp: rc(help2_deriv(x, y, d)),
        arg: rc(Derivation::Hyp(0)),
    };
    let step2 = Derivation::ImpElim {
        imp: rc(help2_deriv(&yd, &xd, d)),
        arg: rc(step1),
    };
    Derivation::ImpIntro {
        hyp: fle(x.clone(), y.clone()),
        body: rc(step2),
    }
}

/// d2: `x <= O_d x`.
pub fn d2_deriv(x: &HTerm, d: &HTerm) -> Derivation {
    let xd = himp(x.clone(), d.clone());
    let premise = trans(&[], swap(&xd, x), help1_deriv(x, d));
    resid_in(&[], premise)
}

/// d3: `O O x <= O x`.
pub fn d3_deriv(x: &HTerm, d: &HTerm) -> Derivation {
    let xd = himp(x.clone(), d.clone());
    let ox = hominus(d.clone(), x.clone());
    let oxd = himp(ox.clone(), d.clone());
    let oox = hominus(d.clone(), ox.clone());
    // lemma: (x=>d) <= (O x => d), from O x & (x=>d) <= d
    let lemma = resid_in(
        &[],
        trans(&[], swap(&ox, &xd), help1_deriv(&xd, d)),
    );
    // (x=>d) & O O x <= (O x=>d) & ((O x=>d)=>d) <= d
    let premise = trans(
        &[],
        meet_intro(
            &[],
            trans(&[], elim_l(&xd, &oox), lemma),
            elim_r(&xd, &oox),
        ),
        help1_deriv(&oxd, d),
    );
    resid_in(&[], premise)
}

/// d5: `O(x=>y) <= O x => O y`.
pub fn d5_deriv(x: &HTerm, y: &HTerm, d: &HTerm) -> Derivation {
    let xy = himp(x.clone(), y.clone());
    // O x & O(x=>y) <= O(x & (x=>y)) <= O y, then residuate
    let step1 = d7r_deriv(x, &xy, d);
    let mono = Derivation::ImpElim {
        imp: rc(d1_deriv(&hmeet(x.clone(), xy.clone()), y, d)),
        arg: rc(help1_deriv(x, y)),
    };
    let premise = trans(&[], step1, mono);
    resid_in(&[], premise)
}

/// d6: `O x | O y <= O(x | y)` by join elimination over monotonicity.
pub fn d6_deriv(x: &HTerm, y: &HTerm, d: &HTerm) -> Derivation {
    let j = hjoin(x.clone(), y.clone());
    let left = Derivation::ImpElim {
        imp: rc(d1_deriv(x, &j, d)),
        arg: rc(ax(
            Axiom::JoinIntroL,
            Subst::of(&[("x", x.clone()), ("y", y.clone())]),
        )),
    };
    let right = Derivation::ImpElim {
        imp: rc(d1_deriv(y, &j, d)),
        arg: rc(ax(
            Axiom::JoinIntroR,
            Subst::of(&[("x", x.clone()), ("y", y.clone())]),
        )),
    };
    let ox = hominus(d.clone(), x.clone());
    let oy = hominus(d.clone(), y.clone());
    let oj = hominus(d.clone(), j.clone());
    Derivation::ImpElim {
        imp: rc(ax(
            Axiom::JoinElim,
            Subst::of(&[("x", ox), ("y", oy), ("z", oj)]),
        )),
        arg: rc(Derivation::AndIntro(rc(left), rc(right))),
    }
}

/// d7 forward: `O(x & y) <= O x & O y`.
pub fn d7_deriv(x: &HTerm, y: &HTerm, d: &HTerm) -> Derivation {
    let m = hmeet(x.clone(), y.clone());
    let left = Derivation::ImpElim {
        imp: rc(d1_deriv(&m, x, d)),
        arg: rc(elim_l(x, y)),
    };
    let right = Derivation::ImpElim {
        imp: rc(d1_deriv(&m, y, d)),
        arg: rc(elim_r(x, y)),
    };
    meet_intro(&[], left, right)
}

/// d7 backward: `O x & O y <= O(x & y)`, the residuation cascade of the
/// appendix proof.
pub fn d7r_deriv(x: &HTerm, y: &HTerm, d: &HTerm) -> Derivation {
    let m = hmeet(x.clone(), y.clone());
    let a = himp(m.clone(), d.clone());
    let ox = hominus(d.clone(), x.clone());
    let oy = hominus(d.clone(), y.clone());
    let xd = himp(x.clone(), d.clone());
    let yd = himp(y.clone(), d.clone());

    // step A: y & A <= (x => d), from x & (y & A) <= (x & y) & A <= d
    let ya = hmeet(y.clone(), a.clone());
    let rearr1 = meet_intro(
        &[],
        meet_intro(
            &[],
            elim_l(x, &ya),
            trans(&[], elim_r(x, &ya), elim_l(y, &a)),
        ),
        trans(&[], elim_r(x, &ya), elim_r(y, &a)),
    );
    let down1 = trans(&[], rearr1, help1_deriv(&m, d));
    let step_a = resid_in(&[], down1);

    // step B: A & O x <= (y => d), from
    // y & (A & O x) <= (y & A) & O x <= (x=>d) & O x <= d
    let aox = hmeet(a.clone(), ox.clone());
    let rearr2 = meet_intro(
        &[],
        meet_intro(
            &[],
            elim_l(y, &aox),
            trans(&[], elim_r(y, &aox), elim_l(&a, &ox)),
        ),
        trans(&[], elim_r(y, &aox), elim_r(&a, &ox)),
    );
    let lift = meet_intro(
        &[],
        trans(&[], elim_l(&ya, &ox), step_a),
        elim_r(&ya, &ox),
    );
    let down2 = trans(&[], rearr2, trans(&[], lift, help1_deriv(&xd, d)));
    let step_b = resid_in(&[], down2);

    // step C: O x & O y <= (A => d) = O(x & y), from
    // A & (O x & O y) <= (A & O x) & O y <= (y=>d) & O y <= d
    let oxoy = hmeet(ox.clone(), oy.clone());
    let rearr3 = meet_intro(
        &[],
        meet_intro(
            &[],
            elim_l(&a, &oxoy),
            trans(&[], elim_r(&a, &oxoy), elim_l(&ox, &oy)),
        ),
        trans(&[], elim_r(&a, &oxoy), elim_r(&ox, &oy)),
    );
    let lift2 = meet_intro(
        &[],
        trans(&[], elim_l(&aox, &oy), step_b),
        elim_r(&aox, &oy),
    );
    let down3 = trans(&[], rearr3, trans(&[], lift2, help1_deriv(&yd, d)));
    resid_in(&[], down3)
}

/// d8: `O_d d <= d`.
pub fn d8_deriv(d: &HTerm) -> Derivation {
    let dd = himp(d.clone(), d.clone());
    let od = hominus(d.clone(), d.clone());
    // top <= (d => d), then O d <= O d & (d=>d) <= d
    let top_dd = resid_in(&[], elim_l(d, &HTerm::Top));
    let widen = meet_intro(
        &[],
        refl(&od),
        trans(&[], ax(Axiom::TopIntro, Subst::one("x", od.clone())), top_dd),
    );
    trans(&[], widen, trans(&[], swap(&od, &dd), help1_deriv(&dd, d)))
}

/// d9: `d <= O_d x`.
pub fn d9_deriv(x: &HTerm, d: &HTerm) -> Derivation {
    let xd = himp(x.clone(), d.clone());
    resid_in(&[], elim_r(&xd, d))
}

/// d10 forward: `(O x => d) <= (x => d)`.
pub fn d10_deriv(x: &HTerm, d: &HTerm) -> Derivation {
    let ox = hominus(d.clone(), x.clone());
    let oxd = himp(ox.clone(), d.clone());
    let premise = trans(
        &[],
        meet_intro(
            &[],
            trans(&[], elim_l(x, &oxd), d2_deriv(x, d)),
            elim_r(x, &oxd),
        ),
        help1_deriv(&ox, d),
    );
    resid_in(&[], premise)
}

/// d10 backward: `(x => d) <= (O x => d)`.
pub fn d10r_deriv(x: &HTerm, d: &HTerm) -> Derivation {
    let ox = hominus(d.clone(), x.clone());
    let xd = himp(x.clone(), d.clone());
    let premise = trans(&[], swap(&ox, &xd), help1_deriv(&xd, d));
    resid_in(&[], premise)
}

/// A canned law: stable identifier, statement, derivation.
pub struct CannedLaw {
    pub id: &'static str,
    pub statement: EhpFormula,
    pub derivation: Derivation,
}

/// The library: help1..help3 and the double-negation laws d1..d10, with a
/// reversed `...r` entry wherever the law is stated as an equivalence.
pub fn canned_library() -> Vec<CannedLaw> {
    let x = hvar("x");
    let y = hvar("y");
    let d = hvar("d");
    let z = hvar("z");

    let mut out: Vec<CannedLaw> = Vec::new();
    let mut push = |id: &'static str, deriv: Derivation| {
        let statement = deriv
            .validate(&[])
            .unwrap_or_else(|e| panic!("canned law {id} does not validate: {e}"));
        out.push(CannedLaw {
            id,
            statement,
            derivation: deriv,
        });
    };

    push("help1", help1_deriv(&x, &z));
    push("help2", help2_deriv(&x, &y, &z));
    push("help3", help3_deriv(&x, &y, &z));
    push("d1", d1_deriv(&x, &y, &d));
    push("d2", d2_deriv(&x, &d));
    push("d3", d3_deriv(&x, &d));
    // d4 is the equivalence O O x == O x: forward is d3, backward is d2 at O x
    push("d4", d3_deriv(&x, &d));
    push("d4r", d2_deriv(&hominus(d.clone(), x.clone()), &d));
    push("d5", d5_deriv(&x, &y, &d));
    push("d6", d6_deriv(&x, &y, &d));
    push("d7", d7_deriv(&x, &y, &d));
    push("d7r", d7r_deriv(&x, &y, &d));
    push("d8", d8_deriv(&d));
    push("d9", d9_deriv(&x, &d));
    push("d10", d10_deriv(&x, &d));
    push("d10r", d10r_deriv(&x, &d));
    push(
        "dtop",
        ax(Axiom::TopIntro, Subst::one("x", hominus(d.clone(), HTerm::Top))),
    );
    push("dtopr", d2_deriv(&HTerm::Top, &d));
    out
}
