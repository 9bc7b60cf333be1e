//! Text syntax for polynomials.
//!
//! ```text
//! expr   := ('+' | '-')? term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*        juxtaposition multiplies
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' nat)?
//! atom   := integer | name | '(' expr ')'
//! ```
//!
//! Division is only accepted by a nonzero constant, so `3/2*x` and `x/2` both
//! parse while `x/y` is rejected.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::mpoly::{MPoly, Vars};
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                return Err(Error::parse(i, "decimal literals are not supported; write p/q"));
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(src[start..i].to_string())));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::Open,
            ')' => Tok::Close,
            other => return Err(Error::parse(i, format!("unexpected character `{other}`"))),
        };
        out.push((start, tok));
        i += c.len_utf8();
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.offset();
                    let d = self.unary()?;
                    match d.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => return Err(Error::parse(at, "division by zero")),
                        None => return Err(Error::parse(at, "division by a non-constant")),
                    }
                }
                Some(Tok::Num(_)) | Some(Tok::Name(_)) | Some(Tok::Open) => {
                    acc = &acc * &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let k = match self.bump() {
            Some(Tok::Num(n)) => n
                .to_u32()
                .ok_or_else(|| Error::parse(at, "exponent too large"))?,
            _ => return Err(Error::parse(at, "exponent must be a nonnegative integer")),
        };
        if self.peek() == Some(&Tok::Caret) {
            return Err(Error::parse(self.offset(), "chained exponents need parentheses"));
        }
        Ok(base.pow(k))
    }

    fn atom(&mut self) -> Result<MPoly> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(MPoly::constant(self.vars, Rational::from_integer(n))),
            Some(Tok::Name(name)) => MPoly::var(self.vars, &name),
            Some(Tok::Open) => {
                let inner = self.expr()?;
                let close_at = self.offset();
                match self.bump() {
                    Some(Tok::Close) => Ok(inner),
                    _ => Err(Error::parse(close_at, "expected `)`")),
                }
            }
            Some(t) => Err(Error::parse(at, format!("unexpected token {t:?}"))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }
}

/// Parses `source` as a polynomial over ℚ in `vars`.
pub fn parse_poly(source: &str, vars: &Vars) -> Result<MPoly> {
    let toks = lex(source)?;
    if toks.is_empty() {
        return Err(Error::parse(0, "empty polynomial"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: source.len(),
        vars,
    };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::parse(p.offset(), "trailing input"));
    }
    Ok(out)
}

/// Parses a rational literal `p` or `p/q`, optionally signed.
pub fn parse_rational(source: &str) -> Result<Rational> {
    let p = parse_poly(source, &Vars::empty())?;
    p.constant_value()
        .ok_or_else(|| Error::parse(0, format!("`{source}` is not a rational constant")))
}
