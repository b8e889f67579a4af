//! Counterfactual evaluation over the possible worlds of a scenario.
//!
//! [`dstc_eval`] is the reference semantics: `φ => ψ` is true when there
//! are no φ-worlds, or when every φ-world where ψ fails is strictly
//! out-ranked by a φ-world where ψ holds, ranking worlds by proper
//! inclusion of their deviation regions. The other evaluators are either
//! independent routes to the same answer ([`dstc_eval_via_clause2`],
//! [`free_choice_eval`]) or rejected alternatives kept for comparison
//! ([`lewis_alt_eval`], [`frame_eval`], [`any_frame_eval`]).

mod choice;
mod dstc;
mod frames;
mod proposition;
mod support;

use std::fmt;

use thiserror::Error;

use crate::geometry::{GeometryError, Rational};
use crate::worlds::{PointId, ScenarioError, Value, World};

pub use choice::free_choice_eval;
pub use dstc::{
    dstc_eval, dstc_eval_via_clause2, is_closed, is_primary, lewis_alt_eval, phi_worlds,
};
pub use frames::{any_frame_eval, frame_eval, frame_table, FrameRow};
pub use proposition::{Comparison, CompiledProposition, Proposition};
pub use support::{compute_support, supports, SupportSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("value `{value}` is not in the domain of `{variable}`")]
    ValueNotInDomain { variable: String, value: Value },
    #[error("world is not a possible world satisfying the antecedent")]
    NotAPhiWorld,
    #[error("antecedent is not closed")]
    NotClosed,
    #[error("antecedent must be a single `choice = value` atom")]
    NotAChoiceAtom,
    #[error("`{variable}` is not a validated free choice (failing alternatives: {failing})")]
    ChoiceNotValidated { variable: String, failing: String },
    #[error("`{variable} = {value}` is the actual choice, not an alternative")]
    NotAnAlternative { variable: String, value: Value },
    #[error("frame analysis requires 1+1 dimensions, scenario has {0} spatial components")]
    FramesRequire1Plus1(usize),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluator {
    Dstc,
    Clause2,
    Footnote,
    Frame(Rational),
    AnyFrame,
    FreeChoice,
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluator::Dstc => write!(f, "dstc"),
            Evaluator::Clause2 => write!(f, "clause2"),
            Evaluator::Footnote => write!(f, "footnote"),
            Evaluator::Frame(v) => write!(f, "frame({v})"),
            Evaluator::AnyFrame => write!(f, "anyframe"),
            Evaluator::FreeChoice => write!(f, "freechoice"),
        }
    }
}

/// A φ-world where ψ fails, and the more similar ψ-world that out-ranks it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub falsifier: World,
    pub dominated_by: Option<World>,
}

/// The Lorentz frame an evaluation was carried out in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameWitness {
    pub velocity: Rational,
    /// Scenario points grouped by boosted time, earliest first.
    pub order: Vec<Vec<PointId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub evaluator: Evaluator,
    pub truth: bool,
    /// No φ-worlds exist; `truth` is then always `true`.
    pub vacuous: bool,
    /// The φ-worlds the evaluator ranks most similar. For the DSTC
    /// evaluators these are primary worlds.
    pub primaries: Vec<World>,
    /// One entry per φ-world considered in which ψ fails.
    pub witnesses: Vec<Witness>,
    pub frame: Option<FrameWitness>,
}

impl Verdict {
    fn vacuous(evaluator: Evaluator) -> Self {
        Verdict {
            evaluator,
            truth: true,
            vacuous: true,
            primaries: Vec::new(),
            witnesses: Vec::new(),
            frame: None,
        }
    }
}
