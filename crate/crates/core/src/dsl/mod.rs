//! The `.stc` scenario format and the counterfactual query language.
//!
//! ```text
//! # GHZ outcomes at three mutually space-like points
//! point A 0 0
//! point B 0 2
//! point C 0 -2
//! var a @A { -1, +1 }
//! var b @B { -1, +1 }
//! var c @C { -1, +1 }
//! constraint product(a, b, c) = -1
//! actual a=-1 b=+1 c=+1
//! query Q1: (a = +1) => (c = +1)
//! ```
//!
//! Statements end at a newline unless a bracket is still open. Coordinates
//! are integers or `p/q` fractions; decimals are rejected so that positions
//! stay exact. `docs/stc-format.md` has the full grammar.

mod lexer;
mod parser;

use std::fmt;

use crate::geometry::Rational;
use crate::semantics::{Evaluator, Proposition};
use crate::worlds::Scenario;

pub use parser::{parse_query, parse_scenario};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    Lexical,
    Syntax,
    Reference,
    Arity,
    Constraint,
    Empty,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::Lexical => "lexical",
            DiagnosticKind::Syntax => "syntax",
            DiagnosticKind::Reference => "reference",
            DiagnosticKind::Arity => "arity",
            DiagnosticKind::Constraint => "constraint",
            DiagnosticKind::Empty => "empty",
        })
    }
}

/// A parse problem at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn new(
        line: usize,
        column: usize,
        kind: DiagnosticKind,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            line,
            column,
            kind,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {} error: {}",
            self.line, self.column, self.kind, self.message
        )
    }
}

/// Which evaluator a query asks for. `Dstc` unless a `@selector` is given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    Dstc,
    Clause2,
    Footnote,
    Frame(Rational),
    AnyFrame,
    FreeChoice,
}

impl Selector {
    pub fn evaluator(&self) -> Evaluator {
        match self {
            Selector::Dstc => Evaluator::Dstc,
            Selector::Clause2 => Evaluator::Clause2,
            Selector::Footnote => Evaluator::Footnote,
            Selector::Frame(v) => Evaluator::Frame(v.clone()),
            Selector::AnyFrame => Evaluator::AnyFrame,
            Selector::FreeChoice => Evaluator::FreeChoice,
        }
    }
}

/// `φ => ψ` with an evaluator selector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryExpression {
    pub antecedent: Proposition,
    pub consequent: Proposition,
    pub selector: Selector,
}

impl QueryExpression {
    pub fn new(antecedent: Proposition, consequent: Proposition) -> Self {
        QueryExpression {
            antecedent,
            consequent,
            selector: Selector::Dstc,
        }
    }
}

impl fmt::Display for QueryExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) => ({})", self.antecedent, self.consequent)?;
        match &self.selector {
            Selector::Dstc => Ok(()),
            Selector::Clause2 => write!(f, " @clause2"),
            Selector::Footnote => write!(f, " @footnote"),
            Selector::Frame(v) => write!(f, " @frame({v})"),
            Selector::AnyFrame => write!(f, " @anyframe"),
            Selector::FreeChoice => write!(f, " @freechoice"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedQuery {
    pub name: String,
    pub query: QueryExpression,
}

/// A parsed scenario file: the validated scenario plus its named queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioDocument {
    pub scenario: Scenario,
    pub queries: Vec<NamedQuery>,
}

impl ScenarioDocument {
    pub fn query(&self, name: &str) -> Option<&QueryExpression> {
        self.queries
            .iter()
            .find(|q| q.name == name)
            .map(|q| &q.query)
    }
}

/// Canonical text. Parsing it gives back an equal document.
pub fn serialize_scenario(doc: &ScenarioDocument) -> String {
    let s = &doc.scenario;
    let mut sections: Vec<Vec<String>> = Vec::new();

    sections.push(
        s.points()
            .iter()
            .map(|(name, p)| {
                let coords: Vec<String> = std::iter::once(p.t())
                    .chain(p.x())
                    .map(|c| c.to_string())
                    .collect();
                format!("point {name} {}", coords.join(" "))
            })
            .collect(),
    );
    sections.push(
        s.variables()
            .iter()
            .map(|v| {
                let domain: Vec<&str> = v.domain.iter().map(|d| d.as_str()).collect();
                format!("var {} @{} {{ {} }}", v.name, v.point, domain.join(", "))
            })
            .collect(),
    );
    sections.push(
        s.constraints()
            .iter()
            .map(|c| format!("constraint {c}"))
            .collect(),
    );
    let actual: Vec<String> = (0..s.variables().len())
        .map(|v| format!("{}={}", s.variables()[v].name, s.actual().value(s, v)))
        .collect();
    sections.push(vec![format!("actual {}", actual.join(" "))]);
    sections.push(
        s.choices()
            .iter()
            .map(|&v| format!("choice {}", s.variables()[v].name))
            .collect(),
    );
    sections.push(
        doc.queries
            .iter()
            .map(|q| format!("query {}: {}", q.name, q.query))
            .collect(),
    );

    let mut out = String::new();
    for section in sections.into_iter().filter(|s| !s.is_empty()) {
        if !out.is_empty() {
            out.push('\n');
        }
        for line in section {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}
