//! Parser for textual field elements.
//!
//! Grammar, evaluated directly in the field:
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := factor (("*" | "/") factor)*
//! factor  := "-" factor | primary ("^" integer)?
//! primary := rational | generator | "(" expr ")"
//! ```
//!
//! A rational is `p` or `p/q`; the slash binds into the literal only when it
//! is directly followed by a digit.

use thiserror::Error;

use super::{Generator, NonArchError, Poly, RationalFunction};
use crate::scalar::Scalar;

const MAX_DEPTH: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseValueError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a, C> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
    generator: &'a Generator,
    _coeff: std::marker::PhantomData<C>,
}

pub(super) fn parse_value<C: Scalar>(text: &str, generator: &Generator) -> Result<RationalFunction<C>, NonArchError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, depth: 0, generator, _coeff: std::marker::PhantomData };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input").into());
    }
    Ok(v)
}

impl<C: Scalar> Parser<'_, C> {
    fn error(&self, message: &str) -> ParseValueError {
        ParseValueError { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction<C>, NonArchError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply").into());
        }
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.try_add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.try_sub(&self.term()?)?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction<C>, NonArchError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.try_mul(&self.factor()?)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.factor()?;
                    if d.is_zero() {
                        return Err(ParseValueError { position: at, message: "division by zero".into() }.into());
                    }
                    acc = acc.try_div(&d)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RationalFunction<C>, NonArchError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(self.error("expression nested too deeply").into());
            }
            let v = self.factor()?.neg();
            self.depth -= 1;
            return Ok(v);
        }
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            let e: i32 = digits
                .parse()
                .ok()
                .filter(|e| *e <= 4096)
                .ok_or_else(|| ParseValueError { position: start, message: "expected exponent".into() })?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<RationalFunction<C>, NonArchError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`").into());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                self.digits();
                if self.src.get(self.pos) == Some(&b'/') && self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                    self.digits();
                }
                let lit = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let c: C = lit
                    .parse()
                    .map_err(|_| ParseValueError { position: start, message: format!("invalid rational `{lit}`") })?;
                Ok(RationalFunction::from_polys(self.generator.clone(), Poly::constant(c), Poly::one())?)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if name != self.generator.name() {
                    return Err(ParseValueError {
                        position: start,
                        message: format!("unknown generator `{name}`, expected `{}`", self.generator),
                    }
                    .into());
                }
                Ok(RationalFunction::infinitesimal(self.generator.clone()))
            }
            Some(_) => Err(self.error("expected a rational, the generator, or `(`").into()),
            None => Err(self.error("unexpected end of input").into()),
        }
    }

    fn digits(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
    }
}
