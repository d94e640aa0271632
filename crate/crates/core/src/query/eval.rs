use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{Atom, Expr, Model, Prob, Query, QueryError, SetExpr, SetOp};
use crate::cantor::{CantorEvent, CantorModel};
use crate::lottery::{coinflip_probability, CoinEvent, LotteryModel, TicketBlock};
use crate::nonarch::{Classification, Magnitude, Sign};
use crate::spinner::GridModel;
use crate::{IntervalSet, NonArchValue, Rational};

/// A probability: a plain rational in the minimal model, a field element in
/// the others.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Value {
    Real(Rational),
    NonArch(NonArchValue),
}

impl Value {
    pub fn standard_part(&self) -> Option<Rational> {
        match self {
            Value::Real(r) => Some(r.clone()),
            Value::NonArch(v) => v.standard_part().ok(),
        }
    }

    pub fn classify(&self) -> Classification {
        match self {
            Value::Real(r) => Classification {
                magnitude: if r.is_zero() { Magnitude::Infinitesimal } else { Magnitude::LimitedNoninfinitesimal },
                sign: if r.is_zero() {
                    Sign::Zero
                } else if r.is_negative() {
                    Sign::Negative
                } else {
                    Sign::Positive
                },
            },
            Value::NonArch(v) => v.classify(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Value::Real(r) => r.is_zero(),
            Value::NonArch(v) => v.is_zero(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(r) => r.fmt(f),
            Value::NonArch(v) => v.fmt(f),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Evaluation {
    Probability { value: Value, note: Option<String> },
    StandardPart(Rational),
    Classification(Classification),
    Comparison { ordering: Ordering, ratio: Option<Value> },
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluation::Probability { value, note } => {
                write!(f, "{value}")?;
                if let Value::NonArch(_) = value {
                    let st = value.standard_part().map_or("unlimited".to_string(), |s| s.to_string());
                    write!(f, "  (st {st}, {})", value.classify())?;
                }
                if let Some(n) = note {
                    write!(f, "  [{n}]")?;
                }
                Ok(())
            }
            Evaluation::StandardPart(s) => s.fmt(f),
            Evaluation::Classification(c) => c.fmt(f),
            Evaluation::Comparison { ordering, ratio } => {
                let ratio = ratio.as_ref().map_or("undefined".to_string(), |r| r.to_string());
                write!(f, "{ordering:?} (ratio {ratio})")
            }
        }
    }
}

fn eval_err(e: impl fmt::Display) -> QueryError {
    QueryError::Eval(e.to_string())
}

pub fn evaluate(q: &Query) -> Result<Evaluation, QueryError> {
    match &q.expr {
        Expr::Prob(p) => {
            let (value, note) = probability(q.model, p)?;
            Ok(Evaluation::Probability { value, note })
        }
        Expr::St(p) => {
            let v = probability(q.model, p)?.0;
            v.standard_part().map(Evaluation::StandardPart).ok_or_else(|| eval_err(format!("{v} is unlimited")))
        }
        Expr::Classify(p) => Ok(Evaluation::Classification(probability(q.model, p)?.0.classify())),
        Expr::Compare(a, b) => {
            let (a, b) = (probability(q.model, a)?.0, probability(q.model, b)?.0);
            compare_values(&a, &b)
        }
    }
}

/// The probability a `P(...)` or `st(P(...))` query denotes.
pub fn evaluate_value(q: &Query) -> Result<Value, QueryError> {
    match &q.expr {
        Expr::Prob(p) => Ok(probability(q.model, p)?.0),
        Expr::St(p) => {
            let v = probability(q.model, p)?.0;
            v.standard_part().map(Value::Real).ok_or_else(|| eval_err(format!("{v} is unlimited")))
        }
        Expr::Classify(_) | Expr::Compare(..) => Err(eval_err(format!("`{}` does not denote a probability", q.expr))),
    }
}

/// Ordering of two probabilities and their ratio `a / b` when `b != 0`.
pub fn compare_values(a: &Value, b: &Value) -> Result<Evaluation, QueryError> {
    match (a, b) {
        (Value::Real(x), Value::Real(y)) => Ok(Evaluation::Comparison {
            ordering: x.cmp(y),
            ratio: (!y.is_zero()).then(|| Value::Real(x / y)),
        }),
        (Value::NonArch(x), Value::NonArch(y)) => {
            let ordering = x.try_cmp(y).map_err(eval_err)?;
            let ratio = if b.is_zero() { None } else { Some(Value::NonArch(x.try_div(y).map_err(eval_err)?)) };
            Ok(Evaluation::Comparison { ordering, ratio })
        }
        _ => Err(eval_err("cannot compare a minimal-model value with a non-Archimedean one")),
    }
}

fn probability(model: Model, p: &Prob) -> Result<(Value, Option<String>), QueryError> {
    match model {
        Model::Minimal => {
            let a = interval_event(&p.event)?;
            let value = match &p.given {
                None => a.lebesgue_length().into_inner(),
                Some(g) => {
                    let b = interval_event(g)?;
                    let lb = b.lebesgue_length().into_inner();
                    if lb.is_zero() {
                        return Err(eval_err(format!(
                            "conditioning on the null set {b} is undefined in the minimal model"
                        )));
                    }
                    a.intersect(&b).lebesgue_length().into_inner() / lb
                }
            };
            Ok((Value::Real(value), None))
        }
        Model::Grid => {
            let m = GridModel::new();
            let a = interval_event(&p.event)?;
            let value = match &p.given {
                None => m.grid_probability(&a),
                Some(g) => m.conditional_probability(&a, &interval_event(g)?).map_err(eval_err)?,
            };
            Ok((Value::NonArch(value), None))
        }
        Model::Cantor => {
            let m = CantorModel::new();
            let a = cantor_event(&p.event)?;
            let value = match &p.given {
                None => m.cantor_probability(&a),
                Some(g) => m.conditional_probability(&a, &cantor_event(g)?).map_err(eval_err)?,
            };
            Ok((Value::NonArch(value), None))
        }
        Model::Coinflip => {
            let a = coin_event(&p.event)?;
            let joint = match &p.given {
                None => a,
                Some(g) => {
                    let b = coin_event(g)?;
                    let pb = coin_value(&b);
                    if pb.is_zero() {
                        return Err(eval_err(format!("conditioning event `{g}` has probability 0")));
                    }
                    let joint = coin_value(&a.zip(b).and_then(|(a, b)| a.intersect(&b)));
                    return Ok((Value::NonArch(joint.try_div(&pb).map_err(eval_err)?), None));
                }
            };
            let note = match &joint {
                Some(e) if coinflip_probability(e).consistent => None,
                _ => Some("contradictory constraints".to_string()),
            };
            Ok((Value::NonArch(coin_value(&joint)), note))
        }
        Model::Lottery => {
            let m = LotteryModel::new();
            let a = ticket_block(&p.event)?;
            let pa = |n: u64| m.lottery_ticket_probability(TicketBlock::Count(n)).map_err(eval_err);
            let value = match &p.given {
                None => pa(a)?,
                Some(g) => {
                    let b = ticket_block(g)?;
                    pa(a.min(b))?.try_div(&pa(b)?).map_err(eval_err)?
                }
            };
            Ok((Value::NonArch(value), None))
        }
    }
}

fn unsupported(a: &Atom, model: &str) -> QueryError {
    eval_err(format!("`{a}` is not an event of the {model} model"))
}

fn interval_event(s: &SetExpr) -> Result<IntervalSet, QueryError> {
    fn atom(a: &Atom) -> Result<IntervalSet, QueryError> {
        match a {
            Atom::Interval(iv) => IntervalSet::single(iv.clone()).map_err(eval_err),
            Atom::Point(p) => IntervalSet::point(p.clone()).map_err(eval_err),
            Atom::Full => Ok(IntervalSet::full()),
            Atom::Empty => Ok(IntervalSet::empty()),
            Atom::Compl(s) => Ok(interval_event(s)?.complement()),
            Atom::Translate(s, t) => Ok(interval_event(s)?.translate_mod1(t)),
            other => Err(unsupported(other, "interval")),
        }
    }
    s.rest.iter().try_fold(atom(&s.first)?, |acc, (op, a)| {
        let b = atom(a)?;
        Ok(match op {
            SetOp::Union => acc.union(&b),
            SetOp::Intersect => acc.intersect(&b),
        })
    })
}

fn cantor_event(s: &SetExpr) -> Result<CantorEvent, QueryError> {
    fn atom(a: &Atom) -> Result<CantorEvent, QueryError> {
        match a {
            Atom::Cylinders(addrs) => CantorEvent::from_addresses(addrs.iter().map(String::as_str)).map_err(eval_err),
            Atom::Full => Ok(CantorEvent::full()),
            Atom::Empty => Ok(CantorEvent::empty()),
            Atom::Compl(s) => Ok(cantor_event(s)?.complement()),
            other => Err(unsupported(other, "cantor")),
        }
    }
    s.rest.iter().try_fold(atom(&s.first)?, |acc, (op, a)| {
        let b = atom(a)?;
        Ok(match op {
            SetOp::Union => acc.union(&b),
            SetOp::Intersect => acc.intersect(&b),
        })
    })
}

/// `None` when the constraints contradict each other.
fn coin_event(s: &SetExpr) -> Result<Option<CoinEvent>, QueryError> {
    fn atom(a: &Atom) -> Result<Option<CoinEvent>, QueryError> {
        match a {
            Atom::AllHeads(j) => Ok(Some(CoinEvent::all_heads_after(*j))),
            Atom::Pins(pins) => pins.iter().try_fold(Some(CoinEvent::default()), |acc, &pin| {
                let single = CoinEvent::pinned([pin]).map_err(eval_err)?;
                Ok(acc.and_then(|e| e.intersect(&single)))
            }),
            other => Err(unsupported(other, "coinflip")),
        }
    }
    s.rest.iter().try_fold(atom(&s.first)?, |acc, (op, a)| {
        if *op == SetOp::Union {
            return Err(eval_err("coin events combine only by intersection"));
        }
        let b = atom(a)?;
        Ok(acc.zip(b).and_then(|(x, y)| x.intersect(&y)))
    })
}

fn coin_value(e: &Option<CoinEvent>) -> NonArchValue {
    match e {
        Some(e) => coinflip_probability(e).value,
        None => NonArchValue::zero(crate::lottery::coin_generator()),
    }
}

/// Blocks `tickets(n)` are the first `n` tickets, so they nest.
fn ticket_block(s: &SetExpr) -> Result<u64, QueryError> {
    fn atom(a: &Atom) -> Result<u64, QueryError> {
        match a {
            Atom::Ticket => Ok(1),
            Atom::Tickets(n) => Ok(*n),
            other => Err(unsupported(other, "lottery")),
        }
    }
    s.rest.iter().try_fold(atom(&s.first)?, |acc, (op, a)| {
        let b = atom(a)?;
        Ok(match op {
            SetOp::Union => acc.max(b),
            SetOp::Intersect => acc.min(b),
        })
    })
}
