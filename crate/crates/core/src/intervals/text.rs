//! Set notation: `[a,b)`, `(a,b]`, `[a,b]`, `(a,b)`, `{p}` joined by `∪`
//! or `u`; `∅` or `{}` for the empty set.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Interval, IntervalError, IntervalSet};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("set syntax error at {position}: {message}")]
pub struct ParseSetError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() && self.left_closed && self.right_closed {
            return write!(f, "{{{}}}", self.left);
        }
        let l = if self.left_closed { '[' } else { '(' };
        let r = if self.right_closed { ']' } else { ')' };
        write!(f, "{l}{},{}{r}", self.left, self.right)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("∅");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            c.fmt(f)?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn err(&self, message: impl Into<String>) -> ParseSetError {
        ParseSetError { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, want: char) -> Result<(), ParseSetError> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            _ => Err(self.err(format!("expected `{want}`"))),
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseSetError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.text.as_bytes();
        let mut end = start;
        if bytes.get(end) == Some(&b'-') {
            end += 1;
        }
        while bytes.get(end).is_some_and(u8::is_ascii_digit) {
            end += 1;
        }
        if bytes.get(end) == Some(&b'/') && bytes.get(end + 1).is_some_and(u8::is_ascii_digit) {
            end += 1;
            while bytes.get(end).is_some_and(u8::is_ascii_digit) {
                end += 1;
            }
        }
        let lit = &self.text[start..end];
        let r = lit.parse::<Rational>().map_err(|_| self.err("expected a rational `p/q`"))?;
        self.pos = end;
        Ok(r)
    }
}

fn parse_component(cur: &mut Cursor<'_>) -> Result<Option<Interval>, ParseSetError> {
    match cur.bump() {
        Some('{') => {
            if cur.peek() == Some('}') {
                cur.bump();
                return Ok(None);
            }
            let p = cur.rational()?;
            cur.expect('}')?;
            Ok(Some(Interval::point(p)))
        }
        Some('∅') => Ok(None),
        Some(open @ ('[' | '(')) => {
            let a = cur.rational()?;
            cur.expect(',')?;
            let b = cur.rational()?;
            let close = match cur.bump() {
                Some(c @ (']' | ')')) => c,
                _ => return Err(cur.err("expected `]` or `)`")),
            };
            Ok(Some(Interval::new(a, open == '[', b, close == ']')))
        }
        _ => Err(cur.err("expected `[`, `(`, `{` or `∅`")),
    }
}

/// Parses raw components without normalizing.
pub(crate) fn parse_raw(text: &str) -> Result<Vec<Interval>, ParseSetError> {
    let mut cur = Cursor { text, pos: 0 };
    let mut out = Vec::new();
    loop {
        out.extend(parse_component(&mut cur)?);
        match cur.peek() {
            None => return Ok(out),
            Some('u' | '∪') => {
                cur.bump();
            }
            Some(_) => return Err(cur.err("expected `∪`, `u` or end of input")),
        }
    }
}

impl FromStr for IntervalSet {
    type Err = IntervalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IntervalSet::normalize(&parse_raw(s)?)
    }
}
