//! First-order formulas over membership and equality, in a prefix syntax
//! shared by the many-valued and Kripke-Joyal evaluators.
//!
//! Grammar: `(mem x y)`, `(eq x y)`, `(and p q)`, `(or p q)`, `(imp p q)`,
//! `(tensor p q)`, `(not p)`, `(all v p)`, `(ex v p)`, with identifiers as
//! variables.

use std::fmt;
use thiserror::Error;

pub type Var = String;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Mem(Var, Var),
    Eq(Var, Var),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Tensor(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    All(Var, Box<Formula>),
    Ex(Var, Box<Formula>),
}

impl Formula {
    pub fn uses_tensor(&self) -> bool {
        match self {
            Formula::Mem(..) | Formula::Eq(..) => false,
            Formula::Tensor(..) => true,
            Formula::Not(p) => p.uses_tensor(),
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Imp(p, q) => {
                p.uses_tensor() || q.uses_tensor()
            }
            Formula::All(_, p) | Formula::Ex(_, p) => p.uses_tensor(),
        }
    }

    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<Var> {
        fn go(f: &Formula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
            let mut atom = |x: &Var, y: &Var| {
                for v in [x, y] {
                    if !bound.contains(v) && !out.contains(v) {
                        out.push(v.clone());
                    }
                }
            };
            match f {
                Formula::Mem(x, y) | Formula::Eq(x, y) => atom(x, y),
                Formula::Not(p) => go(p, bound, out),
                Formula::And(p, q)
                | Formula::Or(p, q)
                | Formula::Imp(p, q)
                | Formula::Tensor(p, q) => {
                    go(p, bound, out);
                    go(q, bound, out);
                }
                Formula::All(v, p) | Formula::Ex(v, p) => {
                    bound.push(v.clone());
                    go(p, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Mem(x, y) => write!(f, "(mem {x} {y})"),
            Formula::Eq(x, y) => write!(f, "(eq {x} {y})"),
            Formula::And(p, q) => write!(f, "(and {p} {q})"),
            Formula::Or(p, q) => write!(f, "(or {p} {q})"),
            Formula::Imp(p, q) => write!(f, "(imp {p} {q})"),
            Formula::Tensor(p, q) => write!(f, "(tensor {p} {q})"),
            Formula::Not(p) => write!(f, "(not {p})"),
            Formula::All(v, p) => write!(f, "(all {v} {p})"),
            Formula::Ex(v, p) => write!(f, "(ex {v} {p})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{column}: {message}")]
pub struct FormulaParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn location(&self) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &b in &self.src[..self.pos] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn error(&self, message: impl Into<String>) -> FormulaParseError {
        let (line, column) = self.location();
        FormulaParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), FormulaParseError> {
        self.skip_ws();
        if self.pos < self.src.len() && self.src[self.pos] == b {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", b as char)))
        }
    }

    fn ident(&mut self) -> Result<String, FormulaParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric()
                || self.src[self.pos] == b'_'
                || self.src[self.pos] == b'-')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn formula(&mut self) -> Result<Formula, FormulaParseError> {
        self.expect(b'(')?;
        let head = self.ident()?;
        let node = match head.as_str() {
            "mem" => Formula::Mem(self.ident()?, self.ident()?),
            "eq" => Formula::Eq(self.ident()?, self.ident()?),
            "and" => Formula::And(Box::new(self.formula()?), Box::new(self.formula()?)),
            "or" => Formula::Or(Box::new(self.formula()?), Box::new(self.formula()?)),
            "imp" => Formula::Imp(Box::new(self.formula()?), Box::new(self.formula()?)),
            "tensor" => Formula::Tensor(Box::new(self.formula()?), Box::new(self.formula()?)),
            "not" => Formula::Not(Box::new(self.formula()?)),
            "all" => Formula::All(self.ident()?, Box::new(self.formula()?)),
            "ex" => Formula::Ex(self.ident()?, Box::new(self.formula()?)),
            other => return Err(self.error(format!("unknown connective '{other}'"))),
        };
        self.expect(b')')?;
        Ok(node)
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, FormulaParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}
