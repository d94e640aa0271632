use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::lexer::{tokenize, Tok, Token};
use super::{Atom, Expr, Model, Prob, Query, QueryError, SetExpr, SetOp};
use crate::intervals::Interval;
use crate::lottery::Toss;
use crate::Rational;

/// Nesting limit for `compl(...)` and `translate(...)`.
pub const MAX_DEPTH: usize = 64;

pub fn parse_query(input: &str) -> Result<Query, QueryError> {
    let toks = tokenize(input).map_err(|(position, c)| QueryError::Syntax {
        position,
        found: Some(c.to_string()),
        expected: vec!["a number, a word or one of ( ) [ ] { } , | : > - *".into()],
    })?;
    let mut p = Parser { toks, i: 0, end: input.len(), model: Model::Minimal, depth: 0 };
    let model = match p.peek().cloned() {
        Some(Tok::Word(w)) => Model::from_name(&w).ok_or(QueryError::UnknownModel(w))?,
        _ => return Err(p.expected(&["model name"])),
    };
    p.i += 1;
    p.model = model;
    p.sym(':')?;
    let expr = p.expr()?;
    if p.peek().is_some() {
        return Err(p.expected(&["end of input"]));
    }
    Ok(Query { model, expr })
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    end: usize,
    model: Model,
    depth: usize,
}

fn quoted(s: &str) -> String {
    format!("\"{s}\"")
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn expected(&self, what: &[&str]) -> QueryError {
        QueryError::Syntax {
            position: self.pos(),
            found: self.peek().map(|t| t.to_string()),
            expected: what.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn type_error(&self, position: usize, message: impl Into<String>) -> QueryError {
        QueryError::Type { position, message: message.into() }
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x == w)
    }

    fn sym(&mut self, c: char) -> Result<(), QueryError> {
        if self.at_sym(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.expected(&[&quoted(&c.to_string())]))
        }
    }

    fn word(&mut self, w: &str) -> Result<(), QueryError> {
        if self.at_word(w) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.expected(&[&quoted(w)]))
        }
    }

    fn expr(&mut self) -> Result<Expr, QueryError> {
        let head = match self.peek() {
            Some(Tok::Word(w)) => w.clone(),
            _ => return Err(self.expected(&["\"P\"", "\"st\"", "\"classify\"", "\"compare\""])),
        };
        match head.as_str() {
            "P" => Ok(Expr::Prob(self.prob()?)),
            "st" | "classify" => {
                self.i += 1;
                self.sym('(')?;
                let p = self.prob()?;
                self.sym(')')?;
                Ok(if head == "st" { Expr::St(p) } else { Expr::Classify(p) })
            }
            "compare" => {
                self.i += 1;
                self.sym('(')?;
                let a = self.prob()?;
                self.sym(',')?;
                let b = self.prob()?;
                self.sym(')')?;
                Ok(Expr::Compare(Box::new(a), Box::new(b)))
            }
            _ => Err(self.expected(&["\"P\"", "\"st\"", "\"classify\"", "\"compare\""])),
        }
    }

    fn prob(&mut self) -> Result<Prob, QueryError> {
        self.word("P")?;
        self.sym('(')?;
        let event = self.set()?;
        let given = if self.at_sym('|') {
            self.i += 1;
            Some(self.set()?)
        } else {
            None
        };
        self.sym(')')?;
        Ok(Prob { event, given })
    }

    fn set_op(&self) -> Option<SetOp> {
        match self.peek()? {
            Tok::Word(w) if w == "u" => Some(SetOp::Union),
            Tok::Word(w) if w == "n" => Some(SetOp::Intersect),
            Tok::Sym('∪') => Some(SetOp::Union),
            Tok::Sym('∩') => Some(SetOp::Intersect),
            _ => None,
        }
    }

    fn set(&mut self) -> Result<SetExpr, QueryError> {
        let first = self.atom()?;
        let mut rest = Vec::new();
        while let Some(op) = self.set_op() {
            if op == SetOp::Union && self.model == Model::Coinflip {
                return Err(self.type_error(self.pos(), "coin events combine only by intersection (n)"));
            }
            self.i += 1;
            rest.push((op, self.atom()?));
        }
        Ok(SetExpr { first, rest })
    }

    fn require(&self, position: usize, what: &str, models: &[Model]) -> Result<(), QueryError> {
        if models.contains(&self.model) {
            Ok(())
        } else {
            let names: Vec<&str> = models.iter().map(|m| m.name()).collect();
            Err(self.type_error(
                position,
                format!("{what} belongs to the {} model, not {}", names.join("/"), self.model),
            ))
        }
    }

    fn atom(&mut self) -> Result<Atom, QueryError> {
        const SETS: [Model; 3] = [Model::Minimal, Model::Grid, Model::Cantor];
        const INTERVALS: [Model; 2] = [Model::Minimal, Model::Grid];
        let pos = self.pos();
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.expected(&self.atom_names())),
        };
        match tok {
            Tok::Sym('[') | Tok::Sym('(') => {
                self.require(pos, "an interval", &INTERVALS)?;
                self.interval()
            }
            Tok::Sym('{') => self.braces(),
            Tok::Sym('∅') => {
                self.require(pos, "the empty set", &SETS)?;
                self.i += 1;
                Ok(Atom::Empty)
            }
            Tok::Word(w) => match w.as_str() {
                "full" | "empty" => {
                    self.require(pos, &format!("`{w}`"), &SETS)?;
                    self.i += 1;
                    Ok(if w == "full" { Atom::Full } else { Atom::Empty })
                }
                "compl" => {
                    self.require(pos, "compl", &SETS)?;
                    self.i += 1;
                    self.sym('(')?;
                    let inner = self.nested()?;
                    self.sym(')')?;
                    Ok(Atom::Compl(Box::new(inner)))
                }
                "translate" => {
                    self.require(pos, "translate", &INTERVALS)?;
                    self.i += 1;
                    self.sym('(')?;
                    let inner = self.nested()?;
                    self.sym(',')?;
                    let negative = self.at_sym('-');
                    if negative {
                        self.i += 1;
                    }
                    let t = self.rational()?;
                    self.sym(')')?;
                    Ok(Atom::Translate(Box::new(inner), if negative { -t } else { t }))
                }
                "allheads" => {
                    self.require(pos, "allheads", &[Model::Coinflip])?;
                    self.i += 1;
                    if self.at_sym('>') {
                        self.i += 1;
                        Ok(Atom::AllHeads(self.integer()?))
                    } else {
                        Ok(Atom::AllHeads(0))
                    }
                }
                "pin" => {
                    self.require(pos, "pin", &[Model::Coinflip])?;
                    self.i += 1;
                    self.pins()
                }
                "ticket" => {
                    self.require(pos, "ticket", &[Model::Lottery])?;
                    self.i += 1;
                    Ok(Atom::Ticket)
                }
                "tickets" => {
                    self.require(pos, "tickets", &[Model::Lottery])?;
                    self.i += 1;
                    self.sym('(')?;
                    let at = self.pos();
                    let n = self.integer()?;
                    if n == 0 {
                        return Err(self.type_error(at, "a ticket block needs at least one ticket"));
                    }
                    self.sym(')')?;
                    Ok(Atom::Tickets(n))
                }
                _ => Err(self.expected(&self.atom_names())),
            },
            _ => Err(self.expected(&self.atom_names())),
        }
    }

    fn atom_names(&self) -> Vec<&'static str> {
        match self.model {
            Model::Minimal | Model::Grid => vec!["interval", "\"{\"", "\"full\"", "\"empty\"", "\"compl\"", "\"translate\""],
            Model::Cantor => vec!["\"{\"", "\"full\"", "\"empty\"", "\"compl\""],
            Model::Coinflip => vec!["\"allheads\"", "\"pin\""],
            Model::Lottery => vec!["\"ticket\"", "\"tickets\""],
        }
    }

    fn nested(&mut self) -> Result<SetExpr, QueryError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.type_error(self.pos(), format!("nesting deeper than {MAX_DEPTH}")));
        }
        let s = self.set()?;
        self.depth -= 1;
        Ok(s)
    }

    fn interval(&mut self) -> Result<Atom, QueryError> {
        let left_closed = self.at_sym('[');
        self.i += 1;
        let a = self.rational()?;
        self.sym(',')?;
        let b = self.rational()?;
        let right_closed = match self.peek() {
            Some(Tok::Sym(']')) => true,
            Some(Tok::Sym(')')) => false,
            _ => return Err(self.expected(&["\"]\"", "\")\""])),
        };
        self.i += 1;
        Ok(Atom::Interval(Interval::new(a, left_closed, b, right_closed)))
    }

    fn braces(&mut self) -> Result<Atom, QueryError> {
        let open = self.pos();
        self.i += 1;
        if self.at_sym('}') {
            self.require(open, "the empty set", &[Model::Minimal, Model::Grid, Model::Cantor])?;
            self.i += 1;
            return Ok(Atom::Empty);
        }
        match self.model {
            Model::Minimal | Model::Grid => {
                let p = self.rational()?;
                if self.at_sym(',') {
                    return Err(self.type_error(
                        self.pos(),
                        format!("a brace list is a cylinder set of the cantor model; under {} write a single point {{x}}", self.model),
                    ));
                }
                self.sym('}')?;
                Ok(Atom::Point(p))
            }
            Model::Cantor => {
                let mut addrs = vec![self.address()?];
                while self.at_sym(',') {
                    self.i += 1;
                    addrs.push(self.address()?);
                }
                self.sym('}')?;
                Ok(Atom::Cylinders(addrs))
            }
            Model::Coinflip | Model::Lottery => Err(self.type_error(open, format!("braces denote sets, which the {} model has no use for", self.model))),
        }
    }

    fn address(&mut self) -> Result<String, QueryError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Sym('*')) => {
                self.i += 1;
                Ok(String::new())
            }
            Some(Tok::Number(s)) => {
                if s.contains('/') {
                    return Err(self.type_error(pos, "points are not events of the cantor model; give cylinder addresses over {0,2}"));
                }
                if !s.bytes().all(|b| b == b'0' || b == b'2') {
                    return Err(self.type_error(pos, format!("cylinder address `{s}` must use only the digits 0 and 2")));
                }
                self.i += 1;
                Ok(s)
            }
            _ => Err(self.expected(&["cylinder address", "\"*\""])),
        }
    }

    fn pins(&mut self) -> Result<Atom, QueryError> {
        self.sym('(')?;
        let mut pins = Vec::new();
        if !self.at_sym(')') {
            loop {
                let at = self.pos();
                let k = self.integer()?;
                if k == 0 {
                    return Err(self.type_error(at, "toss positions start at 1"));
                }
                self.sym(':')?;
                let t = match self.peek() {
                    Some(Tok::Word(w)) if w == "H" => Toss::Heads,
                    Some(Tok::Word(w)) if w == "T" => Toss::Tails,
                    _ => return Err(self.expected(&["\"H\"", "\"T\""])),
                };
                self.i += 1;
                pins.push((k, t));
                if !self.at_sym(',') {
                    break;
                }
                self.i += 1;
            }
        }
        self.sym(')')?;
        Ok(Atom::Pins(pins))
    }

    fn rational(&mut self) -> Result<Rational, QueryError> {
        let s = match self.peek() {
            Some(Tok::Number(s)) => s.clone(),
            _ => return Err(self.expected(&["rational"])),
        };
        let pos = self.pos();
        let (n, d) = s.split_once('/').unwrap_or((&s, "1"));
        let n: BigInt = n.parse().expect("lexer yields digits");
        let d: BigInt = d.parse().expect("lexer yields digits");
        if d.is_zero() {
            return Err(self.type_error(pos, format!("`{s}` has a zero denominator")));
        }
        self.i += 1;
        Ok(Rational::new(n, d))
    }

    fn integer(&mut self) -> Result<u64, QueryError> {
        match self.peek() {
            Some(Tok::Number(s)) if !s.contains('/') => {
                let pos = self.pos();
                let n = s
                    .parse::<BigInt>()
                    .ok()
                    .and_then(|n| n.to_u64())
                    .ok_or_else(|| self.type_error(pos, format!("`{s}` is too large")))?;
                self.i += 1;
                Ok(n)
            }
            _ => Err(self.expected(&["integer"])),
        }
    }
}
