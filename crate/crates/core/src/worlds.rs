//! Scenarios, possible worlds and their deviation from the actual world.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::geometry::{
    apply_boost, future_closure, Boost, ConeRegion, GeometryError, SpacetimePoint,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("no scenario: declare at least one point and one variable")]
    NoScenario,
    #[error("point `{0}` declared twice")]
    DuplicatePoint(String),
    #[error("point `{point}` has {found} spatial components, expected {expected}")]
    DimensionMismatch {
        point: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("variable `{variable}` is located at undeclared point `{point}`")]
    UnknownPoint { variable: String, point: String },
    #[error("variable `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("variable `{variable}` lists value `{value}` twice")]
    DuplicateValue { variable: String, value: Value },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("value `{value}` is not in the domain of `{variable}`")]
    ValueNotInDomain { variable: String, value: Value },
    #[error("constraint `{constraint}` has a row of {found} values for {expected} variables")]
    ArityMismatch {
        constraint: String,
        expected: usize,
        found: usize,
    },
    #[error("actual world does not assign `{0}`")]
    MissingActual(String),
    #[error("actual world assigns `{0}` twice")]
    DuplicateActual(String),
    #[error("actual world violates constraint `{constraint}`")]
    ActualViolates { index: usize, constraint: String },
    #[error("variable `{0}` declared as a choice twice")]
    DuplicateChoice(String),
    #[error("`{0}` is not a declared free choice")]
    UnknownChoice(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A symbolic event value.
///
/// Integers are normalized so that `1`, `+1` and `+01` are the same value,
/// written `+1`; zero is `0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(String);

impl Value {
    pub fn new(text: &str) -> Value {
        let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            if let Ok(n) = text.trim_start_matches('+').parse::<BigInt>() {
                let canonical = if n.is_positive() {
                    format!("+{n}")
                } else if n.is_zero() {
                    "0".to_string()
                } else {
                    n.to_string()
                };
                return Value(canonical);
            }
        }
        Value(text.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_int(&self) -> Option<i64> {
        self.0.trim_start_matches('+').parse().ok()
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::new(s)
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::new(&s)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Index of a point in its scenario's declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventVariable {
    pub name: String,
    /// Name of the point the event happens at.
    pub point: String,
    pub domain: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintRule {
    /// The scope values are integers whose product is `target`.
    Product { target: i64 },
    /// The scope values form one of the listed rows.
    Table { rows: Vec<Vec<Value>> },
}

/// A physical law restricting which worlds are possible.
///
/// When `guard` is non-empty the rule only binds worlds in which every
/// guard variable takes its guard value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub scope: Vec<String>,
    pub rule: ConstraintRule,
    pub guard: Vec<(String, Value)>,
}

impl Constraint {
    pub fn product<S: Into<String>>(scope: impl IntoIterator<Item = S>, target: i64) -> Self {
        Constraint {
            scope: scope.into_iter().map(Into::into).collect(),
            rule: ConstraintRule::Product { target },
            guard: Vec::new(),
        }
    }

    pub fn table<S: Into<String>, V: Into<Value>>(
        scope: impl IntoIterator<Item = S>,
        rows: impl IntoIterator<Item = Vec<V>>,
    ) -> Self {
        Constraint {
            scope: scope.into_iter().map(Into::into).collect(),
            rule: ConstraintRule::Table {
                rows: rows
                    .into_iter()
                    .map(|r| r.into_iter().map(Into::into).collect())
                    .collect(),
            },
            guard: Vec::new(),
        }
    }

    pub fn when(mut self, variable: &str, value: impl Into<Value>) -> Self {
        self.guard.push((variable.to_string(), value.into()));
        self
    }
}

/// Renders in the scenario-file syntax, without the leading `constraint`.
impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scope = self.scope.join(", ");
        match &self.rule {
            ConstraintRule::Product { target } => {
                let sign = if *target > 0 { "+" } else { "" };
                write!(f, "product({scope}) = {sign}{target}")?;
            }
            ConstraintRule::Table { rows } => {
                write!(f, "table ({scope}) {{")?;
                for (i, row) in rows.iter().enumerate() {
                    let cells: Vec<&str> = row.iter().map(Value::as_str).collect();
                    let sep = if i == 0 { " " } else { ", " };
                    write!(f, "{sep}({})", cells.join(", "))?;
                }
                write!(f, " }}")?;
            }
        }
        for (i, (var, value)) in self.guard.iter().enumerate() {
            let kw = if i == 0 { " when" } else { " AND" };
            write!(f, "{kw} {var} = {value}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
enum Check {
    Product {
        target: i64,
        ints: Vec<Vec<Option<i64>>>,
    },
    Table(HashSet<Vec<usize>>),
}

/// A constraint with names resolved to variable and domain indices.
#[derive(Clone, Debug)]
struct Compiled {
    scope: Vec<usize>,
    guard: Vec<(usize, usize)>,
    check: Check,
}

impl Compiled {
    fn allows(&self, values: &[usize]) -> bool {
        if !self.guard.iter().all(|&(v, d)| values[v] == d) {
            return true;
        }
        match &self.check {
            Check::Product { target, ints } => {
                let mut acc: i64 = 1;
                for (k, &v) in self.scope.iter().enumerate() {
                    match ints[k][values[v]].and_then(|n| acc.checked_mul(n)) {
                        Some(next) => acc = next,
                        None => return false,
                    }
                }
                acc == *target
            }
            Check::Table(rows) => {
                let key: Vec<usize> = self.scope.iter().map(|&v| values[v]).collect();
                rows.contains(&key)
            }
        }
    }

    fn last_variable(&self, rank: &[usize]) -> usize {
        self.scope
            .iter()
            .chain(self.guard.iter().map(|(v, _)| v))
            .map(|&v| rank[v])
            .max()
            .unwrap_or(0)
    }
}

/// A total assignment: one domain index per variable, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(Vec<usize>);

impl World {
    pub fn domain_indices(&self) -> &[usize] {
        &self.0
    }

    /// Value of the `var`-th declared variable.
    pub fn value<'s>(&self, scenario: &'s Scenario, var: usize) -> &'s Value {
        &scenario.variables[var].domain[self.0[var]]
    }

    /// `a=-1 b=+1 c=+1`, in declaration order.
    pub fn render(&self, scenario: &Scenario) -> String {
        scenario
            .variables
            .iter()
            .zip(&self.0)
            .map(|(v, &d)| format!("{}={}", v.name, v.domain[d]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A possible world together with where it deviates from the actual one.
#[derive(Clone, Debug)]
pub struct PossibleWorld {
    pub world: World,
    pub diff: BTreeSet<PointId>,
    pub region: ConeRegion,
}

/// All possible worlds of a scenario and their similarity order.
#[derive(Debug)]
pub struct WorldTable {
    pub worlds: Vec<PossibleWorld>,
    /// `closer[i][j]`: world `i`'s deviation region is a proper subset of `j`'s.
    closer: Vec<Vec<bool>>,
}

impl WorldTable {
    /// `true` iff world `i` is strictly more similar to the actual world than `j`.
    pub fn closer(&self, i: usize, j: usize) -> bool {
        self.closer[i][j]
    }
}

/// Programmatic construction of a [`Scenario`].
#[derive(Clone, Debug, Default)]
pub struct ScenarioBuilder {
    points: Vec<(String, SpacetimePoint)>,
    variables: Vec<EventVariable>,
    constraints: Vec<Constraint>,
    actual: Vec<(String, Value)>,
    choices: Vec<String>,
}

impl ScenarioBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point(mut self, name: &str, at: SpacetimePoint) -> Self {
        self.points.push((name.to_string(), at));
        self
    }

    pub fn variable<V: Into<Value>>(
        mut self,
        name: &str,
        point: &str,
        domain: impl IntoIterator<Item = V>,
    ) -> Self {
        self.variables.push(EventVariable {
            name: name.to_string(),
            point: point.to_string(),
            domain: domain.into_iter().map(Into::into).collect(),
        });
        self
    }

    pub fn constraint(mut self, c: Constraint) -> Self {
        self.constraints.push(c);
        self
    }

    pub fn actual(mut self, variable: &str, value: impl Into<Value>) -> Self {
        self.actual.push((variable.to_string(), value.into()));
        self
    }

    pub fn choice(mut self, variable: &str) -> Self {
        self.choices.push(variable.to_string());
        self
    }

    pub fn build(self) -> Result<Scenario, ScenarioError> {
        Scenario::new(
            self.points,
            self.variables,
            self.constraints,
            self.actual,
            self.choices,
        )
    }
}

/// Points, event variables, physical laws, the actual world and the
/// declared free choices.
#[derive(Debug, Clone)]
pub struct Scenario {
    points: Vec<(String, SpacetimePoint)>,
    variables: Vec<EventVariable>,
    constraints: Vec<Constraint>,
    actual: World,
    choices: Vec<usize>,
    var_points: Vec<PointId>,
    var_index: HashMap<String, usize>,
    compiled: Vec<Compiled>,
    table: OnceLock<std::sync::Arc<WorldTable>>,
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
            && self.variables == other.variables
            && self.constraints == other.constraints
            && self.actual == other.actual
            && self.choices == other.choices
    }
}

impl Eq for Scenario {}

impl Scenario {
    pub fn new(
        points: Vec<(String, SpacetimePoint)>,
        variables: Vec<EventVariable>,
        constraints: Vec<Constraint>,
        actual: Vec<(String, Value)>,
        choices: Vec<String>,
    ) -> Result<Scenario, ScenarioError> {
        if points.is_empty() || variables.is_empty() {
            return Err(ScenarioError::NoScenario);
        }
        let dim = points[0].1.spatial_dim();
        let mut point_index = HashMap::new();
        for (i, (name, p)) in points.iter().enumerate() {
            if point_index.insert(name.clone(), i).is_some() {
                return Err(ScenarioError::DuplicatePoint(name.clone()));
            }
            if p.spatial_dim() != dim {
                return Err(ScenarioError::DimensionMismatch {
                    point: name.clone(),
                    expected: dim,
                    found: p.spatial_dim(),
                });
            }
        }

        let mut var_index = HashMap::new();
        let mut var_points = Vec::with_capacity(variables.len());
        for (i, v) in variables.iter().enumerate() {
            if var_index.insert(v.name.clone(), i).is_some() {
                return Err(ScenarioError::DuplicateVariable(v.name.clone()));
            }
            let p = point_index
                .get(&v.point)
                .ok_or_else(|| ScenarioError::UnknownPoint {
                    variable: v.name.clone(),
                    point: v.point.clone(),
                })?;
            var_points.push(PointId(*p));
            if v.domain.is_empty() {
                return Err(ScenarioError::EmptyDomain(v.name.clone()));
            }
            for (k, value) in v.domain.iter().enumerate() {
                if v.domain[..k].contains(value) {
                    return Err(ScenarioError::DuplicateValue {
                        variable: v.name.clone(),
                        value: value.clone(),
                    });
                }
            }
        }

        let lookup = |name: &str, value: &Value| -> Result<(usize, usize), ScenarioError> {
            let v = *var_index
                .get(name)
                .ok_or_else(|| ScenarioError::UnknownVariable(name.to_string()))?;
            let d = variables[v]
                .domain
                .iter()
                .position(|x| x == value)
                .ok_or_else(|| ScenarioError::ValueNotInDomain {
                    variable: name.to_string(),
                    value: value.clone(),
                })?;
            Ok((v, d))
        };

        let mut compiled = Vec::with_capacity(constraints.len());
        for c in &constraints {
            let scope = c
                .scope
                .iter()
                .map(|n| {
                    var_index
                        .get(n)
                        .copied()
                        .ok_or_else(|| ScenarioError::UnknownVariable(n.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let guard = c
                .guard
                .iter()
                .map(|(n, val)| lookup(n, val))
                .collect::<Result<Vec<_>, _>>()?;
            let check = match &c.rule {
                ConstraintRule::Product { target } => Check::Product {
                    target: *target,
                    ints: scope
                        .iter()
                        .map(|&v| variables[v].domain.iter().map(Value::as_int).collect())
                        .collect(),
                },
                ConstraintRule::Table { rows } => {
                    let mut set = HashSet::new();
                    for row in rows {
                        if row.len() != scope.len() {
                            return Err(ScenarioError::ArityMismatch {
                                constraint: c.to_string(),
                                expected: scope.len(),
                                found: row.len(),
                            });
                        }
                        let key = c
                            .scope
                            .iter()
                            .zip(row)
                            .map(|(n, val)| lookup(n, val).map(|(_, d)| d))
                            .collect::<Result<Vec<_>, _>>()?;
                        set.insert(key);
                    }
                    Check::Table(set)
                }
            };
            compiled.push(Compiled {
                scope,
                guard,
                check,
            });
        }

        let mut assigned: Vec<Option<usize>> = vec![None; variables.len()];
        for (name, value) in &actual {
            let (v, d) = lookup(name, value)?;
            if assigned[v].replace(d).is_some() {
                return Err(ScenarioError::DuplicateActual(name.clone()));
            }
        }
        let actual_world = World(
            assigned
                .iter()
                .enumerate()
                .map(|(v, d)| {
                    d.ok_or_else(|| ScenarioError::MissingActual(variables[v].name.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?,
        );
        for (index, (c, comp)) in constraints.iter().zip(&compiled).enumerate() {
            if !comp.allows(&actual_world.0) {
                return Err(ScenarioError::ActualViolates {
                    index,
                    constraint: c.to_string(),
                });
            }
        }

        let mut choice_vars = Vec::with_capacity(choices.len());
        for name in &choices {
            let v = *var_index
                .get(name)
                .ok_or_else(|| ScenarioError::UnknownVariable(name.clone()))?;
            if choice_vars.contains(&v) {
                return Err(ScenarioError::DuplicateChoice(name.clone()));
            }
            choice_vars.push(v);
        }

        Ok(Scenario {
            points,
            variables,
            constraints,
            actual: actual_world,
            choices: choice_vars,
            var_points,
            var_index,
            compiled,
            table: OnceLock::new(),
        })
    }

    pub fn points(&self) -> &[(String, SpacetimePoint)] {
        &self.points
    }

    pub fn point(&self, id: PointId) -> &SpacetimePoint {
        &self.points[id.0].1
    }

    pub fn point_name(&self, id: PointId) -> &str {
        &self.points[id.0].0
    }

    pub fn point_id(&self, name: &str) -> Option<PointId> {
        self.points.iter().position(|(n, _)| n == name).map(PointId)
    }

    pub fn spatial_dim(&self) -> usize {
        self.points[0].1.spatial_dim()
    }

    pub fn variables(&self) -> &[EventVariable] {
        &self.variables
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.var_index.get(name).copied()
    }

    /// Where the `var`-th variable is located.
    pub fn variable_point(&self, var: usize) -> PointId {
        self.var_points[var]
    }

    /// Domain index of `value` for the `var`-th variable.
    pub fn value_index(&self, var: usize, value: &Value) -> Option<usize> {
        self.variables[var].domain.iter().position(|v| v == value)
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn actual(&self) -> &World {
        &self.actual
    }

    /// Indices of the variables declared as free choices.
    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    /// Builds a world from `(variable, value)` pairs, starting from the
    /// actual world. The result need not be possible.
    pub fn world_with(&self, changes: &[(&str, &str)]) -> Result<World, ScenarioError> {
        let mut w = self.actual.clone();
        for (name, value) in changes {
            let v = self
                .variable_index(name)
                .ok_or_else(|| ScenarioError::UnknownVariable(name.to_string()))?;
            let value = Value::new(value);
            w.0[v] =
                self.value_index(v, &value)
                    .ok_or_else(|| ScenarioError::ValueNotInDomain {
                        variable: name.to_string(),
                        value,
                    })?;
        }
        Ok(w)
    }

    /// `true` iff `w` satisfies every constraint.
    pub fn is_possible(&self, w: &World) -> bool {
        w.0.len() == self.variables.len() && self.compiled.iter().all(|c| c.allows(&w.0))
    }

    /// The possible worlds with their deviation regions, computed once.
    pub fn world_table(&self) -> &WorldTable {
        self.table
            .get_or_init(|| std::sync::Arc::new(self.build_table()))
    }

    fn build_table(&self) -> WorldTable {
        let worlds: Vec<PossibleWorld> = self
            .enumerate()
            .into_iter()
            .map(|world| {
                let diff = diff_points(self, &world);
                let region = future_closure(diff.iter().map(|&p| self.point(p)));
                PossibleWorld {
                    world,
                    diff,
                    region,
                }
            })
            .collect();
        // Many worlds share a region; compare each distinct pair once.
        let mut distinct: Vec<&ConeRegion> = worlds.iter().map(|w| &w.region).collect();
        distinct.sort();
        distinct.dedup();
        let slot: Vec<usize> = worlds
            .iter()
            .map(|w| distinct.binary_search(&&w.region).expect("present"))
            .collect();
        let proper: Vec<Vec<bool>> = distinct
            .iter()
            .map(|a| distinct.iter().map(|b| a.is_proper_subset(b)).collect())
            .collect();
        let closer = slot
            .iter()
            .map(|&a| slot.iter().map(|&b| proper[a][b]).collect())
            .collect();
        WorldTable { worlds, closer }
    }

    /// Depth-first over variables sorted by name, values in domain order,
    /// checking each constraint as soon as its last variable is assigned.
    fn enumerate(&self) -> Vec<World> {
        let n = self.variables.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.variables[a].name.cmp(&self.variables[b].name));
        let mut rank = vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        let mut due: Vec<Vec<&Compiled>> = vec![Vec::new(); n];
        for c in &self.compiled {
            due[c.last_variable(&rank)].push(c);
        }

        let mut out = Vec::new();
        let mut values = vec![0usize; n];
        let mut depth = 0usize;
        let mut next = vec![0usize; n];
        // Iterative backtracking: `next[depth]` is the next value to try.
        loop {
            let v = order[depth];
            if next[depth] == self.variables[v].domain.len() {
                if depth == 0 {
                    break;
                }
                next[depth] = 0;
                depth -= 1;
                continue;
            }
            values[v] = next[depth];
            next[depth] += 1;
            if !due[depth].iter().all(|c| c.allows(&values)) {
                continue;
            }
            if depth + 1 == n {
                out.push(World(values.clone()));
            } else {
                depth += 1;
            }
        }
        out
    }

    /// The same scenario seen from a boosted frame.
    ///
    /// Coordinates are the boosted ones divided by `γ`; a uniform positive
    /// rescaling leaves every causal relation unchanged.
    pub fn boosted(&self, b: &Boost) -> Result<Scenario, ScenarioError> {
        let mut out = self.clone();
        out.table = OnceLock::new();
        for (_, p) in out.points.iter_mut() {
            *p = apply_boost(b, p)?.scaled().clone();
        }
        Ok(out)
    }
}

/// All possible worlds, ordered lexicographically by variable name and then
/// domain order. Always contains the actual world.
pub fn enumerate_worlds(s: &Scenario) -> Vec<World> {
    s.world_table()
        .worlds
        .iter()
        .map(|pw| pw.world.clone())
        .collect()
}

/// Points hosting at least one variable on which `w` and the actual world differ.
pub fn diff_points(s: &Scenario, w: &World) -> BTreeSet<PointId> {
    w.0.iter()
        .zip(&s.actual.0)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(v, _)| s.var_points[v])
        .collect()
}

pub fn deviation_region(s: &Scenario, w: &World) -> ConeRegion {
    future_closure(diff_points(s, w).iter().map(|&p| s.point(p)))
}

/// Outcome of checking that a declared choice is free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceReport {
    pub variable: String,
    pub point: PointId,
    pub valid: bool,
    /// One witness world per realizable alternative value.
    pub witnesses: Vec<(Value, World)>,
    /// Alternatives with no possible world agreeing with the actual world
    /// outside the choice point's forward cone.
    pub failing: Vec<Value>,
}

pub fn validate_free_choice(s: &Scenario, variable: &str) -> Result<ChoiceReport, ScenarioError> {
    let var = s
        .variable_index(variable)
        .filter(|v| s.choices.contains(v))
        .ok_or_else(|| ScenarioError::UnknownChoice(variable.to_string()))?;
    let point = s.var_points[var];
    let cone = ConeRegion::cone(s.point(point).clone());
    let table = s.world_table();
    let actual = s.actual.0[var];

    let mut witnesses = Vec::new();
    let mut failing = Vec::new();
    for (d, value) in s.variables[var].domain.iter().enumerate() {
        if d == actual {
            continue;
        }
        let found = table
            .worlds
            .iter()
            .find(|pw| pw.world.0[var] == d && pw.diff.iter().all(|&p| cone.contains(s.point(p))));
        match found {
            Some(pw) => witnesses.push((value.clone(), pw.world.clone())),
            None => failing.push(value.clone()),
        }
    }
    Ok(ChoiceReport {
        variable: variable.to_string(),
        point,
        valid: failing.is_empty(),
        witnesses,
        failing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(t: i64, x: i64) -> SpacetimePoint {
        SpacetimePoint::from_ints(t, &[x]).unwrap()
    }

    fn ghz() -> Scenario {
        ScenarioBuilder::new()
            .point("A", pt(0, 0))
            .point("B", pt(0, 2))
            .point("C", pt(0, -2))
            .variable("a", "A", ["-1", "+1"])
            .variable("b", "B", ["-1", "+1"])
            .variable("c", "C", ["-1", "+1"])
            .constraint(Constraint::product(["a", "b", "c"], -1))
            .actual("a", "-1")
            .actual("b", "+1")
            .actual("c", "+1")
            .build()
            .unwrap()
    }

    fn singlet() -> Scenario {
        let both_sx = |c: Constraint| c.when("A-setting", "Sx").when("B-setting", "Sx");
        ScenarioBuilder::new()
            .point("A", pt(0, -1))
            .point("B", pt(3, 1))
            .variable("A-setting", "A", ["Sx", "Sy"])
            .variable("A-outcome", "A", ["-1", "+1"])
            .variable("B-setting", "B", ["Sx", "Sy"])
            .variable("B-outcome", "B", ["-1", "+1"])
            .constraint(both_sx(Constraint::product(["A-outcome", "B-outcome"], -1)))
            .actual("A-setting", "Sx")
            .actual("A-outcome", "+1")
            .actual("B-setting", "Sy")
            .actual("B-outcome", "+1")
            .choice("B-setting")
            .build()
            .unwrap()
    }

    /// Independent enumeration: every sign tuple, filtered by the product.
    fn ghz_oracle() -> Vec<[i64; 3]> {
        let mut out = Vec::new();
        for a in [-1, 1] {
            for b in [-1, 1] {
                for c in [-1, 1] {
                    if a * b * c == -1 {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn value_normalization() {
        assert_eq!(Value::new("1"), Value::new("+1"));
        assert_eq!(Value::new("+01").as_str(), "+1");
        assert_eq!(Value::new("-0").as_str(), "0");
        assert_eq!(Value::new("-3").as_int(), Some(-3));
        assert_eq!(Value::new("Sx").as_int(), None);
        assert_eq!(Value::new("-"), Value("-".into()));
    }

    #[test]
    fn ghz_has_four_worlds() {
        let s = ghz();
        let worlds = enumerate_worlds(&s);
        let got: Vec<[i64; 3]> = worlds
            .iter()
            .map(|w| [0, 1, 2].map(|v| w.value(&s, v).as_int().unwrap()))
            .collect();
        // both sides lexicographic in (a, b, c) with -1 before +1
        assert_eq!(got, ghz_oracle());
        assert!(worlds.contains(s.actual()));
    }

    #[test]
    fn unconstrained_binary_variable() {
        let s = ScenarioBuilder::new()
            .point("P", pt(0, 0))
            .variable("v", "P", ["no", "yes"])
            .actual("v", "no")
            .build()
            .unwrap();
        assert_eq!(enumerate_worlds(&s).len(), 2);
    }

    #[test]
    fn enumeration_orders_by_variable_name() {
        let s = ScenarioBuilder::new()
            .point("P", pt(0, 0))
            .variable("z", "P", ["0", "1"])
            .variable("a", "P", ["0", "1"])
            .actual("z", "0")
            .actual("a", "0")
            .build()
            .unwrap();
        let rendered: Vec<String> = enumerate_worlds(&s).iter().map(|w| w.render(&s)).collect();
        assert_eq!(rendered, ["z=0 a=0", "z=+1 a=0", "z=0 a=+1", "z=+1 a=+1"]);
    }

    #[test]
    fn singlet_anticorrelation() {
        let s = singlet();
        let a_out = s.variable_index("A-outcome").unwrap();
        let a_set = s.variable_index("A-setting").unwrap();
        let b_set = s.variable_index("B-setting").unwrap();
        let b_out = s.variable_index("B-outcome").unwrap();
        let worlds = enumerate_worlds(&s);
        assert_eq!(worlds.len(), 14);
        for w in &worlds {
            if w.value(&s, a_set).as_str() == "Sx" && w.value(&s, b_set).as_str() == "Sx" {
                assert_eq!(
                    w.value(&s, b_out).as_int().unwrap(),
                    -w.value(&s, a_out).as_int().unwrap()
                );
            }
            assert!(s.is_possible(w));
        }
    }

    #[test]
    fn ghz_diff_sets() {
        let s = ghz();
        let a = s.point_id("A").unwrap();
        let b = s.point_id("B").unwrap();
        let c = s.point_id("C").unwrap();
        assert!(diff_points(&s, s.actual()).is_empty());
        assert!(deviation_region(&s, s.actual()).is_empty());
        let w1 = s.world_with(&[("a", "+1"), ("b", "-1")]).unwrap();
        let w2 = s.world_with(&[("a", "+1"), ("c", "-1")]).unwrap();
        assert_eq!(diff_points(&s, &w1), BTreeSet::from([a, b]));
        assert_eq!(diff_points(&s, &w2), BTreeSet::from([a, c]));
        assert_eq!(deviation_region(&s, &w2).apices().len(), 2);
    }

    #[test]
    fn diff_collapses_variables_at_one_point() {
        let s = singlet();
        let w = s
            .world_with(&[("B-setting", "Sx"), ("B-outcome", "-1")])
            .unwrap();
        assert_eq!(
            diff_points(&s, &w),
            BTreeSet::from([s.point_id("B").unwrap()])
        );
    }

    #[test]
    fn singlet_choice_is_free() {
        let s = singlet();
        let report = validate_free_choice(&s, "B-setting").unwrap();
        assert!(report.valid);
        assert_eq!(report.witnesses.len(), 1);
        let (_, w) = &report.witnesses[0];
        assert_eq!(
            w.render(&s),
            "A-setting=Sx A-outcome=+1 B-setting=Sx B-outcome=-1"
        );
        assert!(matches!(
            validate_free_choice(&s, "A-outcome"),
            Err(ScenarioError::UnknownChoice(_))
        ));
    }

    #[test]
    fn tied_choice_is_not_free() {
        // `k` at K must equal `m` at the space-like point M.
        let s = ScenarioBuilder::new()
            .point("K", pt(0, 0))
            .point("M", pt(0, 3))
            .variable("k", "K", ["0", "1"])
            .variable("m", "M", ["0", "1"])
            .constraint(Constraint::table(
                ["k", "m"],
                [vec!["0", "0"], vec!["1", "1"]],
            ))
            .actual("k", "0")
            .actual("m", "0")
            .choice("k")
            .build()
            .unwrap();
        // oracle: the only world with k=1 is (1,1), which differs at M.
        let m = s.point(s.point_id("M").unwrap()).clone();
        assert!(!ConeRegion::cone(s.point(s.point_id("K").unwrap()).clone()).contains(&m));
        let report = validate_free_choice(&s, "k").unwrap();
        assert!(!report.valid);
        assert_eq!(report.failing, vec![Value::new("+1")]);
    }

    #[test]
    fn singleton_choice_is_vacuously_free() {
        let s = ScenarioBuilder::new()
            .point("P", pt(0, 0))
            .variable("k", "P", ["only"])
            .actual("k", "only")
            .choice("k")
            .build()
            .unwrap();
        let report = validate_free_choice(&s, "k").unwrap();
        assert!(report.valid && report.witnesses.is_empty());
    }

    #[test]
    fn construction_errors() {
        let base = || {
            ScenarioBuilder::new()
                .point("A", pt(0, 0))
                .variable("a", "A", ["-1", "+1"])
        };
        assert_eq!(
            ScenarioBuilder::new().build(),
            Err(ScenarioError::NoScenario)
        );
        assert_eq!(
            base().build(),
            Err(ScenarioError::MissingActual("a".into()))
        );
        assert!(matches!(
            base().actual("a", "0").build(),
            Err(ScenarioError::ValueNotInDomain { .. })
        ));
        assert!(matches!(
            base()
                .actual("a", "+1")
                .constraint(Constraint::product(["a"], -1))
                .build(),
            Err(ScenarioError::ActualViolates { index: 0, .. })
        ));
        assert!(matches!(
            base()
                .actual("a", "+1")
                .constraint(Constraint::product(["zz"], -1))
                .build(),
            Err(ScenarioError::UnknownVariable(_))
        ));
        assert!(matches!(
            base()
                .actual("a", "+1")
                .constraint(Constraint::table(["a"], [vec!["+1", "-1"]]))
                .build(),
            Err(ScenarioError::ArityMismatch { .. })
        ));
        assert!(matches!(
            base().variable("b", "Q", ["x"]).build(),
            Err(ScenarioError::UnknownPoint { .. })
        ));
        assert!(matches!(
            base()
                .point("B", SpacetimePoint::from_ints(0, &[0, 0, 0]).unwrap())
                .build(),
            Err(ScenarioError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn guarded_product_ignores_unguarded_worlds() {
        let s = singlet();
        let w = s
            .world_with(&[
                ("B-setting", "Sx"),
                ("B-outcome", "+1"),
                ("A-setting", "Sy"),
            ])
            .unwrap();
        assert!(s.is_possible(&w));
        let w = s.world_with(&[("B-setting", "Sx")]).unwrap();
        assert!(!s.is_possible(&w));
    }

    #[test]
    fn constraint_display() {
        let c = Constraint::product(["a", "b"], -1).when("x", "yes");
        assert_eq!(c.to_string(), "product(a, b) = -1 when x = yes");
        let c = Constraint::table(["a", "b"], [vec!["0", "1"], vec!["1", "0"]]);
        assert_eq!(c.to_string(), "table (a, b) { (0, +1), (+1, 0) }");
        assert_eq!(Constraint::product(["a"], 1).to_string(), "product(a) = +1");
    }
}
