use std::collections::BTreeSet;
use std::fmt;

use crate::worlds::{Scenario, Value, World};

use super::SemanticsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Eq,
    Ne,
}

/// Boolean formula over `variable = value` atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Proposition {
    Const(bool),
    Atom {
        variable: String,
        op: Comparison,
        value: Value,
    },
    Not(Box<Proposition>),
    And(Box<Proposition>, Box<Proposition>),
    Or(Box<Proposition>, Box<Proposition>),
}

impl Proposition {
    pub fn eq(variable: &str, value: impl Into<Value>) -> Self {
        Proposition::Atom {
            variable: variable.to_string(),
            op: Comparison::Eq,
            value: value.into(),
        }
    }

    pub fn ne(variable: &str, value: impl Into<Value>) -> Self {
        Proposition::Atom {
            variable: variable.to_string(),
            op: Comparison::Ne,
            value: value.into(),
        }
    }

    pub fn and(self, other: Proposition) -> Self {
        Proposition::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Proposition) -> Self {
        Proposition::Or(Box::new(self), Box::new(other))
    }

    pub fn negate(self) -> Self {
        Proposition::Not(Box::new(self))
    }

    /// Names of all variables mentioned.
    pub fn variables(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Proposition::Const(_) => {}
            Proposition::Atom { variable, .. } => {
                out.insert(variable);
            }
            Proposition::Not(p) => p.collect_variables(out),
            Proposition::And(l, r) | Proposition::Or(l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
        }
    }

    /// Resolves names against `s`, failing on unknown variables or values.
    pub fn compile(&self, s: &Scenario) -> Result<CompiledProposition, SemanticsError> {
        Ok(match self {
            Proposition::Const(b) => CompiledProposition::Const(*b),
            Proposition::Atom {
                variable,
                op,
                value,
            } => {
                let var = s
                    .variable_index(variable)
                    .ok_or_else(|| SemanticsError::UnknownVariable(variable.clone()))?;
                let index =
                    s.value_index(var, value)
                        .ok_or_else(|| SemanticsError::ValueNotInDomain {
                            variable: variable.clone(),
                            value: value.clone(),
                        })?;
                CompiledProposition::Atom {
                    var,
                    index,
                    equal: *op == Comparison::Eq,
                }
            }
            Proposition::Not(p) => CompiledProposition::Not(Box::new(p.compile(s)?)),
            Proposition::And(l, r) => {
                CompiledProposition::And(Box::new(l.compile(s)?), Box::new(r.compile(s)?))
            }
            Proposition::Or(l, r) => {
                CompiledProposition::Or(Box::new(l.compile(s)?), Box::new(r.compile(s)?))
            }
        })
    }

    pub fn evaluate(&self, s: &Scenario, w: &World) -> Result<bool, SemanticsError> {
        Ok(self.compile(s)?.holds(w))
    }

    fn precedence(&self) -> u8 {
        match self {
            Proposition::Or(..) => 1,
            Proposition::And(..) => 2,
            _ => 3,
        }
    }
}

/// A proposition whose atoms are resolved to variable and domain indices.
#[derive(Clone, Debug)]
pub enum CompiledProposition {
    Const(bool),
    Atom {
        var: usize,
        index: usize,
        equal: bool,
    },
    Not(Box<CompiledProposition>),
    And(Box<CompiledProposition>, Box<CompiledProposition>),
    Or(Box<CompiledProposition>, Box<CompiledProposition>),
}

impl CompiledProposition {
    pub fn holds(&self, w: &World) -> bool {
        match self {
            CompiledProposition::Const(b) => *b,
            CompiledProposition::Atom { var, index, equal } => {
                (w.domain_indices()[*var] == *index) == *equal
            }
            CompiledProposition::Not(p) => !p.holds(w),
            CompiledProposition::And(l, r) => l.holds(w) && r.holds(w),
            CompiledProposition::Or(l, r) => l.holds(w) || r.holds(w),
        }
    }
}

/// Query syntax with only the parentheses needed to parse back to the same
/// tree: `AND` binds tighter than `OR`, both associate to the left.
impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(f: &mut fmt::Formatter<'_>, p: &Proposition, paren: bool) -> fmt::Result {
            if paren {
                write!(f, "({p})")
            } else {
                write!(f, "{p}")
            }
        }
        match self {
            Proposition::Const(b) => write!(f, "{b}"),
            Proposition::Atom {
                variable,
                op,
                value,
            } => {
                let op = match op {
                    Comparison::Eq => "=",
                    Comparison::Ne => "!=",
                };
                write!(f, "{variable} {op} {value}")
            }
            Proposition::Not(p) => {
                write!(f, "NOT ")?;
                operand(f, p, p.precedence() < 3)
            }
            Proposition::And(l, r) => {
                operand(f, l, l.precedence() < 2)?;
                write!(f, " AND ")?;
                operand(f, r, r.precedence() <= 2)
            }
            Proposition::Or(l, r) => {
                operand(f, l, false)?;
                write!(f, " OR ")?;
                operand(f, r, r.precedence() <= 1)
            }
        }
    }
}
