//! Element grammar:
//!
//! ```text
//! elem  := ['-'] term (('+'|'-') term)*
//! term  := [coeff '*'] mono | coeff
//! coeff := DIGITS ['/' DIGITS] ['i'] | '(' scalar ')'
//! mono  := atom ('.' atom)*
//! atom  := NAME | NAME '*'
//! ```

use std::sync::Arc;

use super::{Atom, Lpa, RawExpr};
use crate::error::{Error, Result};
use crate::scalars::{parse_scalar, Ring, Scalar};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let column = self.text[..self.pos].chars().count() + 1;
        Error::parse(1, column, msg)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.text[start..self.pos]
    }
}

pub(super) fn parse_raw(alg: &Arc<Lpa>, text: &str) -> Result<RawExpr> {
    let mut cur = Cursor { text, pos: 0 };
    let mut out = RawExpr::default();
    let mut negative = cur.eat('-');
    loop {
        cur.skip_ws();
        let (coeff, word) = parse_term(alg, &mut cur)?;
        let coeff = if negative { coeff.neg() } else { coeff };
        out.terms.push((coeff, word));
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some('+') => negative = false,
            Some('-') => negative = true,
            Some(c) => return Err(cur.error(format!("unexpected `{c}`"))),
        }
        cur.pos += 1;
    }
    Ok(out)
}

fn parse_term(alg: &Arc<Lpa>, cur: &mut Cursor<'_>) -> Result<(Scalar, Vec<Atom>)> {
    let coeff = match cur.peek() {
        Some(c) if c.is_ascii_digit() || c == '(' => Some(parse_coeff(alg, cur)?),
        _ => None,
    };
    let has_mono = match coeff {
        None => true,
        Some(_) => cur.eat('*'),
    };
    let coeff = coeff.unwrap_or_else(Scalar::one);
    if !has_mono {
        // the empty word is the unit
        return Ok((coeff, Vec::new()));
    }
    let word = parse_mono(alg, cur)?;
    Ok((coeff, word))
}

fn parse_coeff(alg: &Arc<Lpa>, cur: &mut Cursor<'_>) -> Result<Scalar> {
    let start = cur.pos;
    let literal = if cur.eat('(') {
        let inner = cur.take_while(|c| c != ')');
        if !cur.eat(')') {
            return Err(cur.error("unclosed `(`"));
        }
        inner
    } else {
        cur.take_while(|c| c.is_ascii_digit() || c == '/' || c == 'i')
    };
    parse_scalar(literal, alg.field).map_err(|e| match e {
        Error::Parse { message, .. } => Cursor {
            text: cur.text,
            pos: start,
        }
        .error(message),
        other => other,
    })
}

fn parse_mono(alg: &Arc<Lpa>, cur: &mut Cursor<'_>) -> Result<Vec<Atom>> {
    let g = &alg.graph;
    let mut word: Vec<Atom> = Vec::new();
    loop {
        cur.skip_ws();
        let at = cur.pos;
        let name = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
        if name.is_empty() || name.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(cur.error("expected a vertex or edge name"));
        }
        let ghost = cur.eat('*');
        let atom = if let Some(v) = g.vertex_id(name) {
            if ghost {
                return Err(Cursor {
                    text: cur.text,
                    pos: at,
                }
                .error(format!("vertex `{name}` has no ghost")));
            }
            Atom::Vertex(v)
        } else if let Some(e) = g.edge_id(name) {
            if ghost {
                Atom::Ghost(e)
            } else {
                Atom::Edge(e)
            }
        } else {
            return Err(Error::UnknownName(name.to_string()));
        };
        if let Some(&prev) = word.last() {
            if prev.range(g) != atom.source(g) {
                return Err(Error::NotComposable(format!(
                    "{} then {}",
                    prev.display(g),
                    atom.display(g)
                )));
            }
        }
        word.push(atom);
        if !cur.eat('.') {
            return Ok(word);
        }
    }
}
