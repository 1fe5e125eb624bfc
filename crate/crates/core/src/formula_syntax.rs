//! Text syntax for modal first-order formulas:
//!
//! ```text
//! forall x:Nat. (exists y:Nat. y = S(x))
//! box (forall x:Nat. x = x)
//! lt(0, 1) & ~(0 = 1) -> 1 = 1
//! ```
//!
//! Binding strength, loosest first: `->` (right associative), `|`, `&`,
//! then the prefixes `~`, `box`, `dia`, then atoms. `dia p` abbreviates
//! `~ box ~ p`. Corpus files are lists of `name: formula` lines.

use std::rc::Rc;

use thiserror::Error;

use crate::semantics::{FTerm, Formula, Signature};

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {0}: {1}")]
    Syntax(usize, String),
    #[error("unknown sort `{1}` at byte {0}")]
    UnknownSort(usize, String),
    #[error("trailing input at byte {0}")]
    Trailing(usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        sig,
    };
    let f = p.formula()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(ParseError::Trailing(p.pos));
    }
    Ok(f)
}

/// Parse a corpus file of named formulas, one `name: formula` per line;
/// `#` starts a comment.
pub fn parse_corpus(text: &str, sig: &Signature) -> Result<Vec<(String, Formula)>, ParseError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((name, body)) = line.split_once(':') else {
            return Err(ParseError::Syntax(0, format!("missing `name:` in {line}")));
        };
        out.push((name.trim().to_string(), parse_formula(body, sig)?));
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.src.get(self.pos).map(|&b| b as char)
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            // keywords must not swallow identifier prefixes
            if s.chars().all(|c| c.is_ascii_alphanumeric()) {
                let after = self.pos + s.len();
                if let Some(&b) = self.src.get(after) {
                    let c = b as char;
                    if c.is_ascii_alphanumeric() || c == '_' {
                        return false;
                    }
                }
            }
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(ParseError::Syntax(self.pos, format!("expected `{s}`")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos] as char;
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(ParseError::Syntax(self.pos, "expected an identifier".into()));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.ws();
        if self.eat("forall") {
            return self.quantifier(true);
        }
        if self.eat("exists") {
            return self.quantifier(false);
        }
        self.implication()
    }

    fn quantifier(&mut self, universal: bool) -> Result<Formula, ParseError> {
        let v = self.ident()?;
        self.expect(":")?;
        let spos = self.pos;
        let sort_name = self.ident()?;
        let sort = self
            .sig
            .sort_id(&sort_name)
            .ok_or(ParseError::UnknownSort(spos, sort_name))?;
        self.expect(".")?;
        let body = self.formula()?;
        Ok(if universal {
            Formula::Forall(v, sort, Rc::new(body))
        } else {
            Formula::Exists(v, sort, Rc::new(body))
        })
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            return Ok(Formula::Imp(Rc::new(lhs), Rc::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some('|') {
            self.expect("|")?;
            let rhs = self.conjunction()?;
            lhs = Formula::Or(Rc::new(lhs), Rc::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some('&') {
            self.expect("&")?;
            let rhs = self.unary()?;
            lhs = Formula::And(Rc::new(lhs), Rc::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat("~") {
            return Ok(Formula::neg(self.unary()?));
        }
        if self.eat("box") {
            return Ok(Formula::Box(Rc::new(self.unary()?)));
        }
        if self.eat("dia") {
            let inner = self.unary()?;
            return Ok(Formula::neg(Formula::Box(Rc::new(Formula::neg(inner)))));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        self.ws();
        if self.eat("false") {
            return Ok(Formula::False);
        }
        if self.peek() == Some('(') {
            // could be a parenthesized formula; terms never start formulas
            // with `(`, so commit to a formula
            self.expect("(")?;
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        // either a relation application or an equality between terms
        let save = self.pos;
        let name = self.ident()?;
        if self.sig.rel(&name).is_some() && self.peek() == Some('(') {
            self.expect("(")?;
            let mut args = vec![self.term()?];
            while self.eat(",") {
                args.push(self.term()?);
            }
            self.expect(")")?;
            return Ok(Formula::Rel(name, args));
        }
        // roll back and parse an equality
        self.pos = save;
        let lhs = self.term()?;
        self.expect("=")?;
        let rhs = self.term()?;
        Ok(Formula::Eq(lhs, rhs))
    }

    fn term(&mut self) -> Result<FTerm, ParseError> {
        let name = self.ident()?;
        if self.peek() == Some('(') && self.sig.func(&name).is_some() {
            self.expect("(")?;
            let mut args = vec![self.term()?];
            while self.eat(",") {
                args.push(self.term()?);
            }
            self.expect(")")?;
            return Ok(FTerm::App(name, args));
        }
        if name.chars().all(|c| c.is_ascii_digit()) {
            return Ok(FTerm::Const(name));
        }
        // constants are resolved against the signature later; unknown
        // identifiers are variables
        Ok(FTerm::Var(name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Backend;
    use crate::heyting::Ctx;
    use crate::models::arith::arith_structure;

    fn sig() -> Signature {
        let ctx = Ctx::new(Backend::term_model());
        arith_structure(4, &ctx).sig
    }

    #[test]
    fn parses_the_reference_forms() {
        let sig = sig();
        let f = parse_formula("box (forall x:Nat. x = x)", &sig).unwrap();
        assert_eq!(format!("{f}"), "(box (forall x. x = x))");
        let f = parse_formula("(forall n:Nat. exists m:Nat. m = S(n))", &sig).unwrap();
        assert_eq!(format!("{f}"), "(forall n. (exists m. m = S(n)))");
        let f = parse_formula("lt(0, 1) & ~(0 = 1)", &sig).unwrap();
        assert_eq!(format!("{f}"), "(lt(0, 1) & (0 = 1 -> false))");
        let f = parse_formula("dia (0 = 0)", &sig).unwrap();
        assert_eq!(format!("{f}"), "((box (0 = 0 -> false)) -> false)");
    }

    #[test]
    fn position_annotated_errors() {
        let sig = sig();
        let e = parse_formula("forall x.", &sig).unwrap_err();
        assert!(matches!(e, ParseError::Syntax(8, _)), "{e:?}");
        let e = parse_formula("forall x:Int. x = x", &sig).unwrap_err();
        assert!(matches!(e, ParseError::UnknownSort(9, _)), "{e:?}");
        let e = parse_formula("0 = 0 junk", &sig).unwrap_err();
        assert!(matches!(e, ParseError::Trailing(_)), "{e:?}");
    }

    #[test]
    fn corpus_lines() {
        let sig = sig();
        let text = "# comment\nzero: 0 = 0\nsucc_total: forall n:Nat. exists m:Nat. m = S(n)\n";
        let items = parse_corpus(text, &sig).unwrap();
        assert_eq!(items.len(), 2);
        assert_eq!(items[0].0, "zero");
    }

    #[test]
    fn roundtrip_through_display() {
        let sig = sig();
        for src in [
            "forall x:Nat. (exists y:Nat. y = S(x))",
            "box (0 = 0) -> lt(0, 1)",
            "~ (0 = 1) | false",
        ] {
            let f = parse_formula(src, &sig).unwrap();
            // the printer uses unsorted quantifiers; re-sort by textual fixup
            let printed = format!("{f}")
                .replace("forall x.", "forall x:Nat.")
                .replace("forall n.", "forall n:Nat.")
                .replace("exists y.", "exists y:Nat.")
                .replace("exists m.", "exists m:Nat.");
            let f2 = parse_formula(&printed, &sig).unwrap();
            assert_eq!(f, f2, "{src} vs {printed}");
        }
    }
}
