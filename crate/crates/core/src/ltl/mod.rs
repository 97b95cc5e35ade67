//! LTL syntax: surface parser, negation normal form and subformula closure.
//!
//! `F x` and `G x` are expanded while parsing into `true U x` and
//! `false R x`. `X` parses but is rejected by [`to_nnf`], since the next
//! operator has no meaning over dense time.

mod nnf;
mod parser;

pub use nnf::{to_nnf, Nnf, SubNode, SubformulaSet};
pub use parser::parse_ltl;

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn until(l: Formula, r: Formula) -> Formula {
        Formula::Until(Box::new(l), Box::new(r))
    }

    pub fn release(l: Formula, r: Formula) -> Formula {
        Formula::Release(Box::new(l), Box::new(r))
    }

    pub fn finally(f: Formula) -> Formula {
        Formula::until(Formula::True, f)
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::release(Formula::False, f)
    }

    /// Nesting depth of operators; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(c) | Formula::Next(c) => 1 + c.depth(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Until(l, r)
            | Formula::Release(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn contains_next(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => false,
            Formula::Next(_) => true,
            Formula::Not(c) => c.contains_next(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Until(l, r)
            | Formula::Release(l, r) => l.contains_next() || r.contains_next(),
        }
    }
}

fn is_compound(f: &Formula) -> bool {
    match f {
        Formula::Until(l, _) => **l != Formula::True,
        Formula::Release(l, _) => **l != Formula::False,
        Formula::And(..) | Formula::Or(..) => true,
        _ => false,
    }
}

fn write_operand(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_compound(f) {
        write!(out, "({})", f)
    } else {
        write!(out, "{}", f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(out, "true"),
            Formula::False => write!(out, "false"),
            Formula::Atom(p) => write!(out, "{}", p),
            Formula::Not(c) => {
                write!(out, "!")?;
                write_operand(c, out)
            }
            Formula::Next(c) => {
                write!(out, "X ")?;
                write_operand(c, out)
            }
            Formula::Until(l, r) if **l == Formula::True => {
                write!(out, "F ")?;
                write_operand(r, out)
            }
            Formula::Release(l, r) if **l == Formula::False => {
                write!(out, "G ")?;
                write_operand(r, out)
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Until(l, r) | Formula::Release(l, r) => {
                let op = match self {
                    Formula::And(..) => "&",
                    Formula::Or(..) => "|",
                    Formula::Until(..) => "U",
                    _ => "R",
                };
                write_operand(l, out)?;
                write!(out, " {} ", op)?;
                write_operand(r, out)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LtlError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown token at offset {pos}: {token:?}")]
    UnknownToken { pos: usize, token: String },
    #[error("discrete-time operator X is not supported for continuous-time LTL")]
    NextNotSupported,
}
