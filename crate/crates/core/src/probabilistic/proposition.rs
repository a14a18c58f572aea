//! Propositional formulas over the variables of one context.
//!
//! Grammar, with `!` binding tighter than `&`, and `&` tighter than `|`:
//!
//! ```text
//! formula := disj
//! disj    := conj ( "|" conj )*
//! conj    := lit ( "&" lit )*
//! lit     := "!" lit | "(" formula ")" | IDENT | "1" | "0"
//! ```

use std::fmt;

use thiserror::Error;

use crate::model::{Scenario, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropositionError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("variables {{{0}}} are not contained in any single context")]
    NotMeasurable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    Var(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `1` when empty.
    pub fn all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Const(true))
    }

    /// Left-nested disjunction; `0` when empty.
    pub fn any(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Const(false))
    }

    pub fn vars(&self) -> VarSet {
        match self {
            Formula::Const(_) => VarSet::EMPTY,
            Formula::Var(i) => VarSet::singleton(*i),
            Formula::Not(f) => f.vars(),
            Formula::And(a, b) | Formula::Or(a, b) => a.vars().union(b.vars()),
        }
    }

    /// Truth value when exactly the variables in `ones` are true.
    pub fn eval(&self, ones: VarSet) -> bool {
        match self {
            Formula::Const(c) => *c,
            Formula::Var(i) => ones.contains(*i),
            Formula::Not(f) => !f.eval(ones),
            Formula::And(a, b) => a.eval(ones) && b.eval(ones),
            Formula::Or(a, b) => a.eval(ones) || b.eval(ones),
        }
    }

    /// Renders the formula in the input grammar using the scenario's names.
    pub fn display<'a>(&'a self, scenario: &'a Scenario) -> impl fmt::Display + 'a {
        Display { formula: self, scenario }
    }
}

struct Display<'a> {
    formula: &'a Formula,
    scenario: &'a Scenario,
}

impl Display<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula) -> fmt::Result {
        match node {
            Formula::Const(true) => f.write_str("1"),
            Formula::Const(false) => f.write_str("0"),
            Formula::Var(i) => f.write_str(self.scenario.name(*i)),
            Formula::Not(inner) => {
                f.write_str("!")?;
                match **inner {
                    Formula::And(..) | Formula::Or(..) => self.paren(f, inner),
                    _ => self.write(f, inner),
                }
            }
            Formula::And(a, b) => {
                match **a {
                    Formula::Or(..) => self.paren(f, a)?,
                    _ => self.write(f, a)?,
                }
                f.write_str(" & ")?;
                match **b {
                    Formula::And(..) | Formula::Or(..) => self.paren(f, b),
                    _ => self.write(f, b),
                }
            }
            Formula::Or(a, b) => {
                match **a {
                    Formula::And(..) => self.paren(f, a)?,
                    _ => self.write(f, a)?,
                }
                f.write_str(" | ")?;
                match **b {
                    Formula::And(..) | Formula::Or(..) => self.paren(f, b),
                    _ => self.write(f, b),
                }
            }
        }
    }

    fn paren(&self, f: &mut fmt::Formatter<'_>, node: &Formula) -> fmt::Result {
        f.write_str("(")?;
        self.write(f, node)?;
        f.write_str(")")
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula)
    }
}

/// A formula together with the context it is measured in: the first cover
/// context, in canonical order, that contains all of its variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proposition {
    pub formula: Formula,
    pub vars: VarSet,
    pub context: VarSet,
}

impl Proposition {
    pub fn new(formula: Formula, scenario: &Scenario) -> Result<Self, PropositionError> {
        let vars = formula.vars();
        let context = measuring_context(vars, scenario)
            .ok_or_else(|| PropositionError::NotMeasurable(scenario.format_set(vars)))?;
        Ok(Proposition { formula, vars, context })
    }
}

pub fn measuring_context(vars: VarSet, scenario: &Scenario) -> Option<VarSet> {
    scenario.contexts().iter().copied().find(|u| vars.is_subset(*u))
}

pub fn parse_proposition(text: &str, scenario: &Scenario) -> Result<Proposition, PropositionError> {
    let mut parser = Parser { src: text, pos: 0, scenario };
    let formula = parser.disj()?;
    parser.skip_ws();
    if parser.pos < text.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Proposition::new(formula, scenario)
}

/// One formula per nonblank line; lines starting with `#` are comments.
pub fn parse_proposition_file(text: &str, scenario: &Scenario) -> Result<Vec<Proposition>, (usize, PropositionError)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(n, l)| parse_proposition(l, scenario).map_err(|e| (n + 1, e)))
        .collect()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    scenario: &'a Scenario,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> PropositionError {
        PropositionError::Syntax { position: self.pos, message: message.to_owned() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn disj(&mut self) -> Result<Formula, PropositionError> {
        let mut lhs = self.conj()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, PropositionError> {
        let mut lhs = self.lit()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            lhs = Formula::and(lhs, self.lit()?);
        }
        Ok(lhs)
    }

    fn lit(&mut self) -> Result<Formula, PropositionError> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(Formula::negate(self.lit()?))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.disj()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Formula::Const(true))
            }
            Some('0') => {
                self.pos += 1;
                Ok(Formula::Const(false))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let rest = &self.src[self.pos..];
                let len =
                    rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '\'')).unwrap_or(rest.len());
                let name = &rest[..len];
                self.pos += len;
                self.scenario
                    .index_of(name)
                    .map(Formula::Var)
                    .ok_or_else(|| PropositionError::UnknownVariable(name.to_owned()))
            }
            Some(_) => Err(self.error("expected a literal")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
