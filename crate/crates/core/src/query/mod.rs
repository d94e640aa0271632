//! A small language for asking each model about events.
//!
//! ```text
//! query   := model ":" expr
//! expr    := prob | "compare" "(" prob "," prob ")"
//!          | "st" "(" prob ")" | "classify" "(" prob ")"
//! prob    := "P" "(" set ( "|" set )? ")"
//! set     := atom { ("u" | "∪" | "n" | "∩") atom }
//! atom    := interval | "{" ... "}" | "full" | "empty" | "∅"
//!          | "compl" "(" set ")" | "translate" "(" set "," rational ")"
//!          | "allheads" | "allheads>" int | "pin(" int ":" (H|T) {"," ...} ")"
//!          | "ticket" | "tickets(" int ")"
//! ```
//!
//! Braces are read according to the model: a point `{1/3}` under `minimal`
//! and `grid`, a cylinder list `{0,02}` under `cantor`. Atoms that do not
//! belong to the selected model are rejected while parsing.

mod eval;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::intervals::Interval;
use crate::lottery::Toss;
use crate::Rational;

pub use eval::{compare_values, evaluate, evaluate_value, Evaluation, Value};
pub use parser::parse_query;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("syntax error at {}: expected {}", at_text(.position, .found), .expected.join(" or "))]
    Syntax { position: usize, found: Option<String>, expected: Vec<String> },
    #[error("unknown model `{0}` (expected minimal, grid, cantor, coinflip or lottery)")]
    UnknownModel(String),
    #[error("type error at {position}: {message}")]
    Type { position: usize, message: String },
    #[error("evaluation error: {0}")]
    Eval(String),
}

fn at_text(position: &usize, found: &Option<String>) -> String {
    match found {
        None => "end of input".to_string(),
        Some(tok) => format!("{position} (found `{tok}`)"),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Model {
    /// Lebesgue measure on rational interval sets.
    Minimal,
    /// The hyperfinite spinner.
    Grid,
    Cantor,
    Coinflip,
    Lottery,
}

impl Model {
    pub const ALL: [Model; 5] = [Model::Minimal, Model::Grid, Model::Cantor, Model::Coinflip, Model::Lottery];

    pub fn name(self) -> &'static str {
        match self {
            Model::Minimal => "minimal",
            Model::Grid => "grid",
            Model::Cantor => "cantor",
            Model::Coinflip => "coinflip",
            Model::Lottery => "lottery",
        }
    }

    pub fn from_name(name: &str) -> Option<Model> {
        Model::ALL.into_iter().find(|m| m.name() == name)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SetOp {
    Union,
    Intersect,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Atom {
    Interval(Interval),
    Point(Rational),
    /// Cylinder addresses; the empty string is the whole Cantor set.
    Cylinders(Vec<String>),
    Full,
    Empty,
    Compl(Box<SetExpr>),
    Translate(Box<SetExpr>, Rational),
    AllHeads(u64),
    Pins(Vec<(u64, Toss)>),
    Ticket,
    Tickets(u64),
}

/// `first op atom op atom ...`, evaluated left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SetExpr {
    pub first: Atom,
    pub rest: Vec<(SetOp, Atom)>,
}

impl SetExpr {
    pub fn atom(a: Atom) -> Self {
        SetExpr { first: a, rest: Vec::new() }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Prob {
    pub event: SetExpr,
    pub given: Option<SetExpr>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    Prob(Prob),
    Compare(Box<Prob>, Box<Prob>),
    St(Prob),
    Classify(Prob),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Query {
    pub model: Model,
    pub expr: Expr,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Interval(iv) => {
                let l = if iv.left_closed { '[' } else { '(' };
                let r = if iv.right_closed { ']' } else { ')' };
                write!(f, "{l}{},{}{r}", iv.left, iv.right)
            }
            Atom::Point(p) => write!(f, "{{{p}}}"),
            Atom::Cylinders(addrs) => {
                let parts: Vec<&str> = addrs.iter().map(|a| if a.is_empty() { "*" } else { a.as_str() }).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            Atom::Full => f.write_str("full"),
            Atom::Empty => f.write_str("empty"),
            Atom::Compl(s) => write!(f, "compl({s})"),
            Atom::Translate(s, t) => write!(f, "translate({s}, {t})"),
            Atom::AllHeads(0) => f.write_str("allheads"),
            Atom::AllHeads(j) => write!(f, "allheads>{j}"),
            Atom::Pins(pins) => {
                let parts: Vec<String> = pins.iter().map(|(k, t)| format!("{k}:{t}")).collect();
                write!(f, "pin({})", parts.join(","))
            }
            Atom::Ticket => f.write_str("ticket"),
            Atom::Tickets(n) => write!(f, "tickets({n})"),
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.first.fmt(f)?;
        for (op, a) in &self.rest {
            f.write_str(match op {
                SetOp::Union => " u ",
                SetOp::Intersect => " n ",
            })?;
            a.fmt(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.given {
            None => write!(f, "P({})", self.event),
            Some(g) => write!(f, "P({} | {g})", self.event),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Prob(p) => p.fmt(f),
            Expr::Compare(a, b) => write!(f, "compare({a}, {b})"),
            Expr::St(p) => write!(f, "st({p})"),
            Expr::Classify(p) => write!(f, "classify({p})"),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.model, self.expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(q: &str) -> String {
        match parse_query(q).and_then(|q| evaluate(&q)) {
            Ok(e) => e.to_string(),
            Err(e) => e.to_string(),
        }
    }

    #[test]
    fn reference_queries() {
        assert_eq!(run("grid: P({1/3})"), "eps  (st 0, infinitesimal-positive)");
        assert_eq!(run("minimal: P({1/3})"), "0");
        assert_eq!(run("coinflip: compare(P(allheads), P(allheads>1))"), "Less (ratio 1/2)");
        assert_eq!(run("minimal: P([0,1/2]"), "syntax error at end of input: expected \")\"");
    }

    #[test]
    fn models_and_operators() {
        assert_eq!(run("grid: P((0,1))"), "1 - eps  (st 1, limited-positive)");
        assert_eq!(run("minimal: P([0,1/2] ∪ [1/4,3/4))"), "3/4");
        assert_eq!(run("minimal: P(compl([0,1/4)) n translate([0,1/2), 1/4))"), "1/2");
        assert_eq!(run("grid: P({1/3} | [0,1/2])"), "2*eps/(1 + 2*eps)  (st 0, infinitesimal-positive)");
        assert_eq!(run("cantor: P({0,22})"), "3/4  (st 3/4, limited-positive)");
        assert_eq!(run("cantor: st(P({0} | {0,2}))"), "1/2");
        assert_eq!(run("coinflip: P(allheads>2 n pin(1:H))"), "2*h  (st 0, infinitesimal-positive)");
        assert_eq!(run("coinflip: classify(P(pin(1:H,2:T)))"), "limited-positive");
        assert!(run("coinflip: P(allheads n pin(3:T))").contains("contradictory"));
        assert_eq!(run("lottery: P(ticket | tickets(4))"), "1/4  (st 1/4, limited-positive)");
        assert_eq!(run("lottery: classify(P(tickets(3)))"), "infinitesimal-positive");
    }

    #[test]
    fn errors() {
        assert!(run("minimal: P({1/3} | {1/2})").contains("null set"));
        assert!(run("grid: P({0,02})").starts_with("type error"));
        assert!(run("cantor: P({1/3})").starts_with("type error"));
        assert!(run("coinflip: P(allheads u pin(1:H))").starts_with("type error"));
        assert!(run("grid: P(allheads)").starts_with("type error"));
        assert!(run("lottery: P(tickets(0))").starts_with("type error"));
        assert!(run("spinner: P({0})").starts_with("unknown model"));
        assert!(run("minimal: P([0,3/2))").starts_with("evaluation error"));
        assert!(run("minimal: P([0,1/2) $)").starts_with("syntax error at 19"));
        assert!(run("grid: P([1/2,1/0))").starts_with("type error"));
    }

    #[test]
    fn round_trip() {
        for q in [
            "grid: compare(P([0,1/2) u {3/4}), P((1/4,3/4] n compl(translate({0}, -1/3))))",
            "cantor: classify(P({*,02} | compl(empty)))",
            "coinflip: P(allheads>3 n pin(1:H,4:T) | pin())",
            "lottery: st(P(ticket u tickets(7) n tickets(2)))",
            "minimal: P(full | ∅)",
        ] {
            let parsed = parse_query(q).unwrap();
            let text = parsed.to_string();
            assert_eq!(parse_query(&text).unwrap(), parsed, "{text}");
        }
    }

    #[test]
    fn deep_nesting_is_rejected_not_fatal() {
        let q = format!("minimal: P({}{{0}}{})", "compl(".repeat(5000), ")".repeat(5000));
        assert!(run(&q).contains("nesting"));
        let q = format!("minimal: P({}{{0}}{})", "compl(".repeat(60), ")".repeat(60));
        assert_eq!(run(&q), "0");
    }
}
