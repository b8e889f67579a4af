use std::collections::{HashMap, HashSet};

use crate::geometry::{parse_rational, Boost, SpacetimePoint};
use crate::semantics::{Comparison, Proposition};
use crate::worlds::{Constraint, ConstraintRule, EventVariable, Scenario, ScenarioError, Value};

use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, DiagnosticKind, NamedQuery, QueryExpression, ScenarioDocument, Selector};

type Pos = (usize, usize);

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token], end: Pos) -> Self {
        Cursor { toks, pos: 0, end }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> Pos {
        self.toks
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.column))
    }

    fn error(&self, message: impl Into<String>) -> Diagnostic {
        let (line, column) = self.here();
        Diagnostic::new(line, column, DiagnosticKind::Syntax, message)
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), Diagnostic> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn keyword(&mut self, words: &[&str]) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) if words.contains(&s.as_str()) => {
                self.pos += 1;
                true
            }
            _ => false,
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), Diagnostic> {
        let at = self.here();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok((s.clone(), at))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn number(&mut self, what: &str) -> Result<(String, Pos), Diagnostic> {
        let at = self.here();
        match self.peek() {
            Some(Tok::Number(s)) => {
                self.pos += 1;
                Ok((s.clone(), at))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    /// A bare identifier or a signed integer.
    fn value(&mut self) -> Result<(Value, Pos), Diagnostic> {
        let at = self.here();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok((Value::new(s), at))
            }
            Some(Tok::Number(s)) if !s.contains('/') => {
                self.pos += 1;
                Ok((Value::new(s), at))
            }
            Some(Tok::Number(s)) => {
                Err(self.error(format!("value `{s}` must be an identifier or an integer")))
            }
            _ => Err(self.unexpected("a value")),
        }
    }

    fn finish(&self) -> Result<(), Diagnostic> {
        if self.pos < self.toks.len() {
            Err(self.unexpected("end of statement"))
        } else {
            Ok(())
        }
    }

    fn comma_list<T>(
        &mut self,
        close: Tok,
        mut item: impl FnMut(&mut Self) -> Result<T, Diagnostic>,
    ) -> Result<Vec<T>, Diagnostic> {
        let mut out = Vec::new();
        if self.eat(&close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(&close) {
                return Ok(out);
            }
            self.expect(Tok::Comma)?;
        }
    }
}

/// A `variable = value` mention awaiting resolution.
struct Mention {
    variable: String,
    value: Option<Value>,
    at: Pos,
    value_at: Pos,
}

struct Query {
    expr: QueryExpression,
    mentions: Vec<Mention>,
}

fn query(c: &mut Cursor) -> Result<Query, Diagnostic> {
    let mut mentions = Vec::new();
    let antecedent = proposition(c, &mut mentions)?;
    c.expect(Tok::Arrow)?;
    let consequent = proposition(c, &mut mentions)?;
    let selector = if c.eat(&Tok::At) {
        selector(c)?
    } else {
        Selector::Dstc
    };
    c.finish()?;
    Ok(Query {
        expr: QueryExpression {
            antecedent,
            consequent,
            selector,
        },
        mentions,
    })
}

fn selector(c: &mut Cursor) -> Result<Selector, Diagnostic> {
    let at = c.here();
    let (name, _) = c.ident("an evaluator name")?;
    Ok(match name.as_str() {
        "dstc" => Selector::Dstc,
        "clause2" => Selector::Clause2,
        "footnote" => Selector::Footnote,
        "anyframe" => Selector::AnyFrame,
        "freechoice" => Selector::FreeChoice,
        "frame" => {
            c.expect(Tok::LParen)?;
            let (text, v_at) = c.number("a velocity")?;
            let v = parse_rational(&text).expect("lexer produced a number");
            if Boost::new(v.clone()).is_err() {
                return Err(Diagnostic::new(
                    v_at.0,
                    v_at.1,
                    DiagnosticKind::Syntax,
                    format!("frame velocity {v} must satisfy |v| < 1"),
                ));
            }
            c.expect(Tok::RParen)?;
            Selector::Frame(v)
        }
        other => {
            return Err(Diagnostic::new(
                at.0,
                at.1,
                DiagnosticKind::Syntax,
                format!("unknown evaluator `{other}` (expected dstc, clause2, footnote, frame(v), anyframe or freechoice)"),
            ))
        }
    })
}

fn proposition(c: &mut Cursor, m: &mut Vec<Mention>) -> Result<Proposition, Diagnostic> {
    let mut left = conjunction(c, m)?;
    while c.keyword(&["OR", "or"]) {
        left = left.or(conjunction(c, m)?);
    }
    Ok(left)
}

fn conjunction(c: &mut Cursor, m: &mut Vec<Mention>) -> Result<Proposition, Diagnostic> {
    let mut left = unary(c, m)?;
    while c.keyword(&["AND", "and"]) {
        left = left.and(unary(c, m)?);
    }
    Ok(left)
}

fn unary(c: &mut Cursor, m: &mut Vec<Mention>) -> Result<Proposition, Diagnostic> {
    if c.keyword(&["NOT", "not"]) {
        return Ok(unary(c, m)?.negate());
    }
    if c.eat(&Tok::LParen) {
        let p = proposition(c, m)?;
        c.expect(Tok::RParen)?;
        return Ok(p);
    }
    if c.keyword(&["true"]) {
        return Ok(Proposition::Const(true));
    }
    if c.keyword(&["false"]) {
        return Ok(Proposition::Const(false));
    }
    let (variable, at) = c.ident("a proposition")?;
    let op = if c.eat(&Tok::Eq) {
        Comparison::Eq
    } else if c.eat(&Tok::Ne) {
        Comparison::Ne
    } else {
        return Err(c.unexpected("`=` or `!=`"));
    };
    let (value, value_at) = c.value()?;
    m.push(Mention {
        variable: variable.clone(),
        value: Some(value.clone()),
        at,
        value_at,
    });
    Ok(Proposition::Atom {
        variable,
        op,
        value,
    })
}

/// Parses a standalone query such as `(a = +1) => (c = +1) @frame(1/2)`.
///
/// Names are not resolved; evaluating against a scenario does that.
pub fn parse_query(text: &str) -> Result<QueryExpression, Vec<Diagnostic>> {
    let (tokens, mut diags) = lex(text);
    if !diags.is_empty() {
        return Err(diags);
    }
    let tokens: Vec<Token> = tokens
        .into_iter()
        .filter(|t| t.tok != Tok::Newline)
        .collect();
    let end = text
        .lines()
        .enumerate()
        .last()
        .map_or((1, 1), |(l, s)| (l + 1, s.chars().count() + 1));
    match query(&mut Cursor::new(&tokens, end)) {
        Ok(q) => Ok(q.expr),
        Err(d) => {
            diags.push(d);
            Err(diags)
        }
    }
}

/// Splits the token stream into statements: newline-terminated, except
/// inside open brackets.
fn statements(tokens: Vec<Token>) -> Vec<Vec<Token>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut depth = 0usize;
    for t in tokens {
        match t.tok {
            Tok::Newline if depth == 0 => {
                if !current.is_empty() {
                    out.push(std::mem::take(&mut current));
                }
            }
            Tok::Newline => {}
            Tok::LParen | Tok::LBrace => {
                depth += 1;
                current.push(t);
            }
            Tok::RParen | Tok::RBrace => {
                depth = depth.saturating_sub(1);
                current.push(t);
            }
            _ => current.push(t),
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

#[derive(Default)]
struct Draft {
    points: Vec<(String, SpacetimePoint, Pos)>,
    variables: Vec<(EventVariable, Pos, Pos)>,
    constraints: Vec<(Constraint, Pos, Vec<Mention>)>,
    actual: Vec<(Value, Mention)>,
    actual_at: Option<Pos>,
    choices: Vec<(String, Pos)>,
    queries: Vec<(String, Pos, Query)>,
}

fn statement(c: &mut Cursor, d: &mut Draft) -> Result<(), Diagnostic> {
    let start = c.here();
    let (kw, _) = c.ident("a declaration")?;
    match kw.as_str() {
        "point" => {
            let (name, at) = c.ident("a point name")?;
            let mut coords = Vec::new();
            while let Some(Tok::Number(text)) = c.peek() {
                coords.push(parse_rational(text).expect("lexer produced a number"));
                c.pos += 1;
            }
            c.finish()?;
            if coords.len() != 2 && coords.len() != 4 {
                return Err(Diagnostic::new(
                    at.0,
                    at.1,
                    DiagnosticKind::Arity,
                    format!("point `{name}` needs `t x` or `t x y z`, got {} coordinates", coords.len()),
                ));
            }
            let t = coords.remove(0);
            let p = SpacetimePoint::new(t, coords).expect("1 or 3 spatial coordinates");
            d.points.push((name, p, at));
        }
        "var" => {
            let (name, at) = c.ident("a variable name")?;
            c.expect(Tok::At)?;
            let (point, point_at) = c.ident("a point name")?;
            c.expect(Tok::LBrace)?;
            let domain = c.comma_list(Tok::RBrace, |c| c.value().map(|v| v.0))?;
            c.finish()?;
            d.variables.push((EventVariable { name, point, domain }, at, point_at));
        }
        "constraint" => {
            let mut mentions = Vec::new();
            let names = |c: &mut Cursor| {
                c.comma_list(Tok::RParen, |c| {
                    let (n, at) = c.ident("a variable name")?;
                    Ok((n, at))
                })
            };
            let (scope, rule) = if c.keyword(&["product"]) {
                c.expect(Tok::LParen)?;
                let scope = names(c)?;
                c.expect(Tok::Eq)?;
                let (text, at) = c.number("an integer target")?;
                let target = Value::new(&text).as_int().ok_or_else(|| {
                    Diagnostic::new(at.0, at.1, DiagnosticKind::Syntax, format!("product target `{text}` must be an integer"))
                })?;
                (scope, ConstraintRule::Product { target })
            } else if c.keyword(&["table"]) {
                c.expect(Tok::LParen)?;
                let scope = names(c)?;
                c.expect(Tok::LBrace)?;
                let rows = c.comma_list(Tok::RBrace, |c| {
                    let at = c.here();
                    c.expect(Tok::LParen)?;
                    let row = c.comma_list(Tok::RParen, |c| c.value())?;
                    Ok((row, at))
                })?;
                for (row, at) in &rows {
                    if row.len() != scope.len() {
                        return Err(Diagnostic::new(
                            at.0,
                            at.1,
                            DiagnosticKind::Arity,
                            format!("table row has {} values for {} variables", row.len(), scope.len()),
                        ));
                    }
                    for ((var, _), (value, value_at)) in scope.iter().zip(row) {
                        mentions.push(Mention {
                            variable: var.clone(),
                            value: Some(value.clone()),
                            at: *value_at,
                            value_at: *value_at,
                        });
                    }
                }
                let rows = rows
                    .into_iter()
                    .map(|(row, _)| row.into_iter().map(|(v, _)| v).collect())
                    .collect();
                (scope, ConstraintRule::Table { rows })
            } else {
                return Err(c.unexpected("`product` or `table`"));
            };
            let mut guard = Vec::new();
            if c.keyword(&["when"]) {
                loop {
                    let (var, at) = c.ident("a variable name")?;
                    c.expect(Tok::Eq)?;
                    let (value, value_at) = c.value()?;
                    mentions.push(Mention {
                        variable: var.clone(),
                        value: Some(value.clone()),
                        at,
                        value_at,
                    });
                    guard.push((var, value));
                    if !c.keyword(&["AND", "and"]) {
                        break;
                    }
                }
            }
            c.finish()?;
            for (var, at) in &scope {
                mentions.push(Mention {
                    variable: var.clone(),
                    value: None,
                    at: *at,
                    value_at: *at,
                });
            }
            let constraint = Constraint {
                scope: scope.into_iter().map(|(n, _)| n).collect(),
                rule,
                guard,
            };
            d.constraints.push((constraint, start, mentions));
        }
        "actual" => {
            let mut any = false;
            while c.peek().is_some() {
                let (var, at) = c.ident("a variable name")?;
                c.expect(Tok::Eq)?;
                let (value, value_at) = c.value()?;
                d.actual.push((
                    value.clone(),
                    Mention {
                        variable: var,
                        value: Some(value),
                        at,
                        value_at,
                    },
                ));
                any = true;
            }
            if !any {
                return Err(c.unexpected("`variable=value`"));
            }
            d.actual_at.get_or_insert(start);
        }
        "choice" => {
            let (var, at) = c.ident("a variable name")?;
            c.finish()?;
            d.choices.push((var, at));
        }
        "query" => {
            let (name, at) = c.ident("a query name")?;
            c.expect(Tok::Colon)?;
            let q = query(c)?;
            d.queries.push((name, at, q));
        }
        other => {
            return Err(Diagnostic::new(
                start.0,
                start.1,
                DiagnosticKind::Syntax,
                format!("unknown declaration `{other}` (expected point, var, constraint, actual, choice or query)"),
            ))
        }
    }
    Ok(())
}

/// Words with a meaning inside propositions.
const RESERVED: [&str; 9] = [
    "AND", "and", "OR", "or", "NOT", "not", "true", "false", "when",
];

fn reference(at: Pos, message: String) -> Diagnostic {
    Diagnostic::new(at.0, at.1, DiagnosticKind::Reference, message)
}

/// Checks every cross-reference, reporting all failures with positions.
fn resolve(d: &Draft) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut points: HashMap<&str, usize> = HashMap::new();
    let dim = d.points.first().map(|p| p.1.spatial_dim());
    for (name, p, at) in &d.points {
        if points.insert(name, p.spatial_dim()).is_some() {
            diags.push(reference(*at, format!("point `{name}` declared twice")));
        }
        if Some(p.spatial_dim()) != dim {
            diags.push(Diagnostic::new(
                at.0,
                at.1,
                DiagnosticKind::Arity,
                format!(
                    "point `{name}` has {} spatial coordinates, earlier points have {}",
                    p.spatial_dim(),
                    dim.unwrap_or(0)
                ),
            ));
        }
    }

    let mut vars: HashMap<&str, &EventVariable> = HashMap::new();
    for (v, at, point_at) in &d.variables {
        if RESERVED.contains(&v.name.as_str()) {
            diags.push(reference(
                *at,
                format!("`{}` is reserved and cannot name a variable", v.name),
            ));
        }
        if vars.insert(&v.name, v).is_some() {
            diags.push(reference(
                *at,
                format!("variable `{}` declared twice", v.name),
            ));
        }
        if !points.contains_key(v.point.as_str()) {
            diags.push(reference(*point_at, format!("unknown point `{}`", v.point)));
        }
        if v.domain.is_empty() {
            diags.push(Diagnostic::new(
                at.0,
                at.1,
                DiagnosticKind::Arity,
                format!("variable `{}` has an empty domain", v.name),
            ));
        }
        for (k, value) in v.domain.iter().enumerate() {
            if v.domain[..k].contains(value) {
                diags.push(reference(
                    *at,
                    format!("variable `{}` lists value `{value}` twice", v.name),
                ));
            }
        }
    }

    let check = |m: &Mention, diags: &mut Vec<Diagnostic>| match vars.get(m.variable.as_str()) {
        None => diags.push(reference(
            m.at,
            format!("unknown variable `{}`", m.variable),
        )),
        Some(var) => {
            if let Some(value) = &m.value {
                if !var.domain.contains(value) {
                    diags.push(reference(
                        m.value_at,
                        format!("value `{value}` is not in the domain of `{}`", m.variable),
                    ));
                }
            }
        }
    };

    for (_, _, mentions) in &d.constraints {
        for m in mentions {
            check(m, &mut diags);
        }
    }

    let mut assigned = HashSet::new();
    for (_, m) in &d.actual {
        check(m, &mut diags);
        if !assigned.insert(m.variable.as_str()) {
            diags.push(reference(
                m.at,
                format!("actual world assigns `{}` twice", m.variable),
            ));
        }
    }
    if !d.variables.is_empty() {
        let at = d.actual_at.unwrap_or((1, 1));
        for (v, _, _) in &d.variables {
            if !assigned.contains(v.name.as_str()) {
                diags.push(reference(
                    at,
                    format!("actual world does not assign `{}`", v.name),
                ));
            }
        }
    }

    let mut chosen: Vec<&str> = Vec::new();
    for (var, at) in &d.choices {
        if !vars.contains_key(var.as_str()) {
            diags.push(reference(*at, format!("unknown variable `{var}`")));
        } else if chosen.contains(&var.as_str()) {
            diags.push(reference(
                *at,
                format!("`{var}` declared as a choice twice"),
            ));
        }
        chosen.push(var);
    }

    let mut names: Vec<&str> = Vec::new();
    for (name, at, q) in &d.queries {
        if names.contains(&name.as_str()) {
            diags.push(reference(*at, format!("query `{name}` declared twice")));
        }
        names.push(name);
        for m in &q.mentions {
            check(m, &mut diags);
        }
    }
    diags
}

/// Parses and validates a scenario file.
///
/// Either every declaration resolves and the actual world satisfies every
/// constraint, or all problems found are returned, sorted by position.
pub fn parse_scenario(text: &str) -> Result<ScenarioDocument, Vec<Diagnostic>> {
    let (tokens, mut diags) = lex(text);
    let mut draft = Draft::default();
    for stmt in statements(tokens) {
        let last = stmt.last().expect("statements are non-empty");
        let end = (last.line, last.column + 1);
        let mut c = Cursor::new(&stmt, end);
        if let Err(d) = statement(&mut c, &mut draft) {
            diags.push(d);
        }
    }
    if diags.is_empty() && (draft.points.is_empty() || draft.variables.is_empty()) {
        diags.push(Diagnostic::new(
            1,
            1,
            DiagnosticKind::Empty,
            "no scenario: declare at least one point and one variable",
        ));
    }
    if diags.is_empty() {
        diags = resolve(&draft);
    }
    if !diags.is_empty() {
        diags.sort_by_key(|d| (d.line, d.column));
        return Err(diags);
    }

    let constraint_at: Vec<Pos> = draft.constraints.iter().map(|c| c.1).collect();
    let built = Scenario::new(
        draft.points.into_iter().map(|(n, p, _)| (n, p)).collect(),
        draft.variables.into_iter().map(|(v, _, _)| v).collect(),
        draft.constraints.into_iter().map(|(c, _, _)| c).collect(),
        draft
            .actual
            .into_iter()
            .map(|(v, m)| (m.variable, v))
            .collect(),
        draft.choices.into_iter().map(|(v, _)| v).collect(),
    );
    let scenario = match built {
        Ok(s) => s,
        Err(ScenarioError::ActualViolates { index, constraint }) => {
            let (line, column) = constraint_at[index];
            return Err(vec![Diagnostic::new(
                line,
                column,
                DiagnosticKind::Constraint,
                format!("actual world violates constraint `{constraint}`"),
            )]);
        }
        Err(e) => {
            return Err(vec![Diagnostic::new(
                1,
                1,
                DiagnosticKind::Reference,
                e.to_string(),
            )])
        }
    };
    Ok(ScenarioDocument {
        scenario,
        queries: draft
            .queries
            .into_iter()
            .map(|(name, _, q)| NamedQuery {
                name,
                query: q.expr,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::serialize_scenario;
    use crate::geometry::rat;

    const GHZ: &str = "\
point A 0 0
point B 0 2
point C 0 -2
var a @A { -1, +1 }
var b @B { -1, +1 }
var c @C { -1, +1 }
constraint product(a, b, c) = -1
actual a=-1 b=+1 c=+1
query Q1: (a = +1) => (c = +1)
";

    #[test]
    fn parses_ghz() {
        let doc = parse_scenario(GHZ).unwrap();
        let s = &doc.scenario;
        assert_eq!(s.points().len(), 3);
        assert_eq!(s.variables().len(), 3);
        assert_eq!(s.constraints().len(), 1);
        assert_eq!(s.actual().render(s), "a=-1 b=+1 c=+1");
        let q = doc.query("Q1").unwrap();
        assert_eq!(q.antecedent, Proposition::eq("a", "+1"));
        assert_eq!(q.consequent, Proposition::eq("c", "+1"));
        assert_eq!(q.selector, Selector::Dstc);
    }

    #[test]
    fn empty_file_is_no_scenario() {
        for text in ["", "# only a comment\n\n"] {
            let diags = parse_scenario(text).unwrap_err();
            assert_eq!(diags.len(), 1);
            assert_eq!(diags[0].kind, DiagnosticKind::Empty);
            assert!(diags[0].message.contains("no scenario"));
        }
    }

    #[test]
    fn violated_actual_names_the_constraint() {
        let text = GHZ.replace("actual a=-1 b=+1 c=+1", "actual a=+1 b=+1 c=+1");
        let diags = parse_scenario(&text).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].kind, DiagnosticKind::Constraint);
        assert_eq!((diags[0].line, diags[0].column), (7, 1));
        assert!(
            diags[0].message.contains("product(a, b, c) = -1"),
            "{}",
            diags[0]
        );
    }

    #[test]
    fn reference_errors_are_all_reported() {
        let text = "\
point A 0 0
var a @Q { x, y }
var b @A { x, x }
actual a=x b=z c=x
choice d
query Q: (e = x) => (a = w)
";
        let diags = parse_scenario(text).unwrap_err();
        let at: Vec<(usize, usize)> = diags.iter().map(|d| (d.line, d.column)).collect();
        assert_eq!(
            at,
            vec![(2, 8), (3, 5), (4, 14), (4, 16), (5, 8), (6, 11), (6, 26)],
            "{diags:#?}"
        );
        assert!(diags.iter().all(|d| d.kind == DiagnosticKind::Reference));
    }

    #[test]
    fn keywords_cannot_name_variables() {
        let diags = parse_scenario("point A 0 0\nvar not @A { x }\nactual not=x\n").unwrap_err();
        assert!(diags[0].message.contains("reserved"), "{}", diags[0]);
        assert_eq!((diags[0].line, diags[0].column), (2, 5));
    }

    #[test]
    fn syntax_errors_recover_per_statement() {
        let text = "point A 0\nvar a A { x }\nfrobnicate\nactual a=x\n";
        let diags = parse_scenario(text).unwrap_err();
        assert_eq!(diags.len(), 3, "{diags:#?}");
        assert_eq!(diags[0].kind, DiagnosticKind::Arity);
        assert_eq!((diags[1].line, diags[1].column), (2, 7));
        assert_eq!(diags[2].line, 3);
    }

    #[test]
    fn table_spans_lines_and_checks_arity() {
        let text = "\
point P 0 0
var u @P { 0, 1 }
var v @P { 0, 1 }
constraint table (u, v) {
  (0, 0),
  (1, 1)
}
actual u=0 v=0
";
        let doc = parse_scenario(text).unwrap();
        assert_eq!(doc.scenario.constraints().len(), 1);
        let bad = text.replace("(1, 1)", "(1)");
        let diags = parse_scenario(&bad).unwrap_err();
        assert_eq!(diags[0].kind, DiagnosticKind::Arity);
        assert_eq!((diags[0].line, diags[0].column), (6, 3));
    }

    #[test]
    fn decimals_are_rejected() {
        let diags = parse_scenario("point A 1.5 0\n").unwrap_err();
        let lexical = diags
            .iter()
            .find(|d| d.kind == DiagnosticKind::Lexical)
            .unwrap();
        assert_eq!((lexical.line, lexical.column), (1, 10));
    }

    #[test]
    fn query_forms() {
        let q = parse_query("(a = +1) => (c = +1)").unwrap();
        assert_eq!(
            q,
            QueryExpression::new(Proposition::eq("a", "+1"), Proposition::eq("c", "+1"))
        );
        let q = parse_query("(a = +1) => (c = +1) @frame(1/2)").unwrap();
        assert_eq!(q.selector, Selector::Frame(rat(1, 2)));
        let q = parse_query("A-measured=yes AND B-result=-1 => A-result=+1").unwrap();
        assert_eq!(
            q.antecedent,
            Proposition::eq("A-measured", "yes").and(Proposition::eq("B-result", "-1"))
        );
        let q = parse_query("NOT x = 1 OR y != 2 => true @anyframe").unwrap();
        assert_eq!(
            q.antecedent,
            Proposition::eq("x", "1")
                .negate()
                .or(Proposition::ne("y", "2"))
        );
        assert_eq!(q.consequent, Proposition::Const(true));
        assert_eq!(q.selector, Selector::AnyFrame);
    }

    #[test]
    fn query_errors() {
        let d = parse_query("a = ").unwrap_err();
        assert_eq!((d[0].line, d[0].column), (1, 5));
        assert!(d[0].message.contains("a value"));
        let d = parse_query("a = 1 => b = 2 @warp").unwrap_err();
        assert!(d[0].message.contains("unknown evaluator `warp`"));
        assert_eq!((d[0].line, d[0].column), (1, 17));
        let d = parse_query("a = 1 => b = 2 @frame(1)").unwrap_err();
        assert!(d[0].message.contains("|v| < 1"));
        let d = parse_query("a = 1 b = 2").unwrap_err();
        assert!(d[0].message.contains("`=>`"));
        assert!(parse_query("(a = 1 => b = 2").is_err());
    }

    #[test]
    fn serialization_is_canonical() {
        let doc = parse_scenario(GHZ).unwrap();
        let text = serialize_scenario(&doc);
        assert_eq!(
            text,
            "\
point A 0 0
point B 0 2
point C 0 -2

var a @A { -1, +1 }
var b @B { -1, +1 }
var c @C { -1, +1 }

constraint product(a, b, c) = -1

actual a=-1 b=+1 c=+1

query Q1: (a = +1) => (c = +1)
"
        );
        assert_eq!(parse_scenario(&text).unwrap(), doc);
    }

    #[test]
    fn rational_coordinates_stay_exact() {
        let doc = parse_scenario("point A 3/2 -6/4\nvar a @A { x }\nactual a=x\n").unwrap();
        let text = serialize_scenario(&doc);
        assert!(text.starts_with("point A 3/2 -3/2\n"), "{text}");
        assert!(!text.contains("\n\nconstraint"));
        assert_eq!(parse_scenario(&text).unwrap(), doc);
    }
}
