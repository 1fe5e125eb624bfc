//! S-expression serialization for prealgebra terms, formulas, and
//! derivations with rule tags. The canned library ships in this format under
//! `corpus/proofs/`.

use std::rc::Rc;

use thiserror::Error;

use super::{Axiom, Derivation, EhpFormula, HTerm, Subst};

#[derive(Clone, Debug, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Error, PartialEq)]
pub enum SexpError {
    #[error("syntax error at byte {0}: {1}")]
    Syntax(usize, String),
    #[error("malformed {0} node: {1}")]
    Shape(&'static str, String),
    #[error("nesting deeper than {0}")]
    TooDeep(usize),
}

const MAX_DEPTH: usize = 256;

fn parse_sexp(input: &str) -> Result<Sexp, SexpError> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let s = parse_at(bytes, &mut pos, 0)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(SexpError::Syntax(pos, "trailing input".into()));
    }
    Ok(s)
}

fn parse_many(input: &str) -> Result<Vec<Sexp>, SexpError> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let mut out = Vec::new();
    loop {
        skip_ws(bytes, &mut pos);
        if pos >= bytes.len() {
            return Ok(out);
        }
        out.push(parse_at(bytes, &mut pos, 0)?);
    }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    loop {
        while *pos < bytes.len() && (bytes[*pos] as char).is_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b';' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
        } else {
            return;
        }
    }
}

fn parse_at(bytes: &[u8], pos: &mut usize, depth: usize) -> Result<Sexp, SexpError> {
    if depth > MAX_DEPTH {
        return Err(SexpError::TooDeep(MAX_DEPTH));
    }
    skip_ws(bytes, pos);
    if *pos >= bytes.len() {
        return Err(SexpError::Syntax(*pos, "unexpected end".into()));
    }
    if bytes[*pos] == b'(' {
        *pos += 1;
        let mut items = Vec::new();
        loop {
            skip_ws(bytes, pos);
            if *pos >= bytes.len() {
                return Err(SexpError::Syntax(*pos, "unclosed list".into()));
            }
            if bytes[*pos] == b')' {
                *pos += 1;
                return Ok(Sexp::List(items));
            }
            items.push(parse_at(bytes, pos, depth + 1)?);
        }
    }
    if bytes[*pos] == b')' {
        return Err(SexpError::Syntax(*pos, "unexpected )".into()));
    }
    let start = *pos;
    while *pos < bytes.len() {
        let c = bytes[*pos] as char;
        if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
            break;
        }
        *pos += 1;
    }
    Ok(Sexp::Atom(
        String::from_utf8_lossy(&bytes[start..*pos]).into_owned(),
    ))
}

fn atom(s: &Sexp) -> Option<&str> {
    match s {
        Sexp::Atom(a) => Some(a),
        _ => None,
    }
}

fn term_from(s: &Sexp) -> Result<HTerm, SexpError> {
    match s {
        Sexp::Atom(a) => match a.as_str() {
            "top" => Ok(HTerm::Top),
            "bot" => Ok(HTerm::Bot),
            v => Ok(HTerm::Var(v.to_string())),
        },
        Sexp::List(items) => {
            let head = items
                .first()
                .and_then(atom)
                .ok_or_else(|| SexpError::Shape("term", format!("{s:?}")))?;
            if items.len() != 3 {
                return Err(SexpError::Shape("term", format!("{s:?}")));
            }
            let a = term_from(&items[1])?;
            let b = term_from(&items[2])?;
            match head {
                "meet" => Ok(HTerm::Meet(Rc::new(a), Rc::new(b))),
                "join" => Ok(HTerm::Join(Rc::new(a), Rc::new(b))),
                "imp" => Ok(HTerm::Imp(Rc::new(a), Rc::new(b))),
                _ => Err(SexpError::Shape("term", format!("{s:?}"))),
            }
        }
    }
}

fn formula_from(s: &Sexp) -> Result<EhpFormula, SexpError> {
    match s {
        Sexp::Atom(a) if a == "false" => Ok(EhpFormula::False),
        Sexp::List(items) => {
            let head = items
                .first()
                .and_then(atom)
                .ok_or_else(|| SexpError::Shape("formula", format!("{s:?}")))?;
            if items.len() != 3 {
                return Err(SexpError::Shape("formula", format!("{s:?}")));
            }
            match head {
                "le" => Ok(EhpFormula::Le(term_from(&items[1])?, term_from(&items[2])?)),
                "and" => Ok(EhpFormula::And(
                    Rc::new(formula_from(&items[1])?),
                    Rc::new(formula_from(&items[2])?),
                )),
                "or" => Ok(EhpFormula::Or(
                    Rc::new(formula_from(&items[1])?),
                    Rc::new(formula_from(&items[2])?),
                )),
                "implies" => Ok(EhpFormula::Implies(
                    Rc::new(formula_from(&items[1])?),
                    Rc::new(formula_from(&items[2])?),
                )),
                _ => Err(SexpError::Shape("formula", format!("{s:?}"))),
            }
        }
        _ => Err(SexpError::Shape("formula", format!("{s:?}"))),
    }
}

fn subst_from(s: &Sexp) -> Result<Subst, SexpError> {
    let Sexp::List(items) = s else {
        return Err(SexpError::Shape("subst", format!("{s:?}")));
    };
    let mut out = Subst::default();
    for it in items {
        let Sexp::List(pair) = it else {
            return Err(SexpError::Shape("subst", format!("{it:?}")));
        };
        if pair.len() != 2 {
            return Err(SexpError::Shape("subst", format!("{it:?}")));
        }
        let v = atom(&pair[0]).ok_or_else(|| SexpError::Shape("subst", format!("{it:?}")))?;
        out.0.insert(v.to_string(), term_from(&pair[1])?);
    }
    Ok(out)
}

fn deriv_from(s: &Sexp) -> Result<Derivation, SexpError> {
    let Sexp::List(items) = s else {
        return Err(SexpError::Shape("derivation", format!("{s:?}")));
    };
    let head = items
        .first()
        .and_then(atom)
        .ok_or_else(|| SexpError::Shape("derivation", format!("{s:?}")))?;
    let need = |n: usize| -> Result<(), SexpError> {
        if items.len() != n + 1 {
            Err(SexpError::Shape("derivation", format!("{s:?}")))
        } else {
            Ok(())
        }
    };
    match head {
        "hyp" => {
            need(1)?;
            let i: usize = atom(&items[1])
                .and_then(|a| a.parse().ok())
                .ok_or_else(|| SexpError::Shape("hyp", format!("{s:?}")))?;
            Ok(Derivation::Hyp(i))
        }
        "axiom" => {
            need(2)?;
            let name = atom(&items[1])
                .ok_or_else(|| SexpError::Shape("axiom", format!("{s:?}")))?;
            let ax = Axiom::by_name(name)
                .ok_or_else(|| SexpError::Shape("axiom", format!("unknown {name}")))?;
            Ok(Derivation::Ax(ax, subst_from(&items[2])?))
        }
        "and-intro" => {
            need(2)?;
            Ok(Derivation::AndIntro(
                Rc::new(deriv_from(&items[1])?),
                Rc::new(deriv_from(&items[2])?),
            ))
        }
        "and-elim-l" => {
            need(1)?;
            Ok(Derivation::AndElimL(Rc::new(deriv_from(&items[1])?)))
        }
        "and-elim-r" => {
            need(1)?;
            Ok(Derivation::AndElimR(Rc::new(deriv_from(&items[1])?)))
        }
        "or-intro-l" => {
            need(2)?;
            Ok(Derivation::OrIntroL(
                Rc::new(deriv_from(&items[1])?),
                formula_from(&items[2])?,
            ))
        }
        "or-intro-r" => {
            need(2)?;
            Ok(Derivation::OrIntroR(
                formula_from(&items[1])?,
                Rc::new(deriv_from(&items[2])?),
            ))
        }
        "or-elim" => {
            need(3)?;
            Ok(Derivation::OrElim {
                or: Rc::new(deriv_from(&items[1])?),
                left: Rc::new(deriv_from(&items[2])?),
                right: Rc::new(deriv_from(&items[3])?),
            })
        }
        "imp-intro" => {
            need(2)?;
            Ok(Derivation::ImpIntro {
                hyp: formula_from(&items[1])?,
                body: Rc::new(deriv_from(&items[2])?),
            })
        }
        "imp-elim" => {
            need(2)?;
            Ok(Derivation::ImpElim {
                imp: Rc::new(deriv_from(&items[1])?),
                arg: Rc::new(deriv_from(&items[2])?),
            })
        }
        "ex-falso" => {
            need(2)?;
            Ok(Derivation::ExFalso(
                Rc::new(deriv_from(&items[1])?),
                formula_from(&items[2])?,
            ))
        }
        "subst" => {
            need(2)?;
            Ok(Derivation::Subst(
                Rc::new(deriv_from(&items[1])?),
                subst_from(&items[2])?,
            ))
        }
        _ => Err(SexpError::Shape("derivation", format!("unknown rule {head}"))),
    }
}

fn subst_to(s: &Subst) -> String {
    let mut out = String::from("(");
    for (i, (v, t)) in s.0.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&format!("({v} {t})"));
    }
    out.push(')');
    out
}

pub fn derivation_to_string(d: &Derivation) -> String {
    match d {
        Derivation::Hyp(i) => format!("(hyp {i})"),
        Derivation::Ax(a, s) => format!("(axiom {} {})", a.name(), subst_to(s)),
        Derivation::AndIntro(a, b) => format!(
            "(and-intro {} {})",
            derivation_to_string(a),
            derivation_to_string(b)
        ),
        Derivation::AndElimL(a) => format!("(and-elim-l {})", derivation_to_string(a)),
        Derivation::AndElimR(a) => format!("(and-elim-r {})", derivation_to_string(a)),
        Derivation::OrIntroL(a, f) => {
            format!("(or-intro-l {} {f})", derivation_to_string(a))
        }
        Derivation::OrIntroR(f, a) => {
            format!("(or-intro-r {f} {})", derivation_to_string(a))
        }
        Derivation::OrElim { or, left, right } => format!(
            "(or-elim {} {} {})",
            derivation_to_string(or),
            derivation_to_string(left),
            derivation_to_string(right)
        ),
        Derivation::ImpIntro { hyp, body } => {
            format!("(imp-intro {hyp} {})", derivation_to_string(body))
        }
        Derivation::ImpElim { imp, arg } => format!(
            "(imp-elim {} {})",
            derivation_to_string(imp),
            derivation_to_string(arg)
        ),
        Derivation::ExFalso(a, f) => {
            format!("(ex-falso {} {f})", derivation_to_string(a))
        }
        Derivation::Subst(a, s) => {
            format!("(subst {} {})", derivation_to_string(a), subst_to(s))
        }
    }
}

pub fn parse_derivation(input: &str) -> Result<Derivation, SexpError> {
    deriv_from(&parse_sexp(input)?)
}

pub fn parse_formula_sexp(input: &str) -> Result<EhpFormula, SexpError> {
    formula_from(&parse_sexp(input)?)
}

/// Parse a proofs corpus file: a sequence of `(law <id> <derivation>)`.
pub fn parse_proof_corpus(input: &str) -> Result<Vec<(String, Derivation)>, SexpError> {
    let items = parse_many(input)?;
    let mut out = Vec::new();
    for it in items {
        let Sexp::List(parts) = &it else {
            return Err(SexpError::Shape("law", format!("{it:?}")));
        };
        if parts.len() != 3 || atom(&parts[0]) != Some("law") {
            return Err(SexpError::Shape("law", format!("{it:?}")));
        }
        let id = atom(&parts[1])
            .ok_or_else(|| SexpError::Shape("law", format!("{it:?}")))?
            .to_string();
        out.push((id, deriv_from(&parts[2])?));
    }
    Ok(out)
}

pub fn proof_corpus_to_string(laws: &[(String, Derivation)]) -> String {
    let mut out = String::new();
    for (id, d) in laws {
        out.push_str(&format!("(law {id} {})\n", derivation_to_string(d)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::canned_library;
    use super::*;

    #[test]
    fn canned_roundtrip() {
        for law in canned_library() {
            let text = derivation_to_string(&law.derivation);
            let back = parse_derivation(&text).unwrap_or_else(|e| {
                panic!("law {} failed to reparse: {e}\n{text}", law.id)
            });
            assert_eq!(back, law.derivation, "law {}", law.id);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_derivation("(frобnicate)").is_err());
        assert!(parse_derivation("(hyp x)").is_err());
        assert!(parse_derivation("(").is_err());
        assert!(parse_derivation("()").is_err());
    }
}
