//! Random scenario generation and brute-force oracles shared by the
//! integration tests. The oracles work on integer coordinates and plain
//! index vectors and use none of the crate's enumeration or region code.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use stc_core::geometry::{ConeRegion, SpacetimePoint};
use stc_core::semantics::{compute_support, dstc_eval, free_choice_eval, Comparison, Proposition};
use stc_core::worlds::{validate_free_choice, Constraint, EventVariable, Scenario, Value};

#[derive(Clone, Debug)]
pub struct RawConstraint {
    pub scope: Vec<usize>,
    pub rows: Vec<Vec<usize>>,
    pub guard: Option<(usize, usize)>,
}

/// A scenario in raw form: integer coordinates, variables as
/// `(point, domain size)`, worlds as value-index vectors.
#[derive(Clone, Debug)]
pub struct Model {
    pub points: Vec<(i64, Vec<i64>)>,
    pub vars: Vec<(usize, usize)>,
    pub constraints: Vec<RawConstraint>,
    pub actual: Vec<usize>,
    pub choices: Vec<usize>,
}

pub fn var_name(v: usize) -> String {
    format!("x{v}")
}

pub fn value_name(d: usize) -> String {
    format!("v{d}")
}

impl Model {
    pub fn scenario(&self) -> Scenario {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, (t, x))| (format!("P{i}"), SpacetimePoint::from_ints(*t, x).unwrap()))
            .collect();
        let variables = self
            .vars
            .iter()
            .enumerate()
            .map(|(v, &(p, n))| EventVariable {
                name: var_name(v),
                point: format!("P{p}"),
                domain: (0..n).map(|d| Value::new(&value_name(d))).collect(),
            })
            .collect();
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let rows = c
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|&d| value_name(d)).collect::<Vec<_>>());
                let k = Constraint::table(c.scope.iter().map(|&v| var_name(v)), rows);
                match c.guard {
                    Some((v, d)) => k.when(&var_name(v), value_name(d).as_str()),
                    None => k,
                }
            })
            .collect();
        let actual = self
            .actual
            .iter()
            .enumerate()
            .map(|(v, &d)| (var_name(v), Value::new(&value_name(d))))
            .collect();
        let choices = self.choices.iter().map(|&v| var_name(v)).collect();
        Scenario::new(points, variables, constraints, actual, choices).unwrap()
    }

    pub fn satisfies(&self, w: &[usize]) -> bool {
        self.constraints.iter().all(|c| {
            if let Some((v, d)) = c.guard {
                if w[v] != d {
                    return true;
                }
            }
            let got: Vec<usize> = c.scope.iter().map(|&v| w[v]).collect();
            c.rows.contains(&got)
        })
    }

    /// Every possible world, by odometer over all assignments.
    pub fn worlds(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut w = vec![0; self.vars.len()];
        loop {
            if self.satisfies(&w) {
                out.push(w.clone());
            }
            let mut k = 0;
            loop {
                if k == w.len() {
                    return out;
                }
                w[k] += 1;
                if w[k] < self.vars[k].1 {
                    break;
                }
                w[k] = 0;
                k += 1;
            }
        }
    }

    /// `q` is on or inside the forward light cone of `p`.
    pub fn precedes(&self, p: usize, q: usize) -> bool {
        let (tp, xp) = &self.points[p];
        let (tq, xq) = &self.points[q];
        let dt = tq - tp;
        let dx2: i64 = xp.iter().zip(xq).map(|(a, b)| (b - a) * (b - a)).sum();
        dt >= 0 && dt * dt >= dx2
    }

    pub fn diff(&self, w: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = (0..w.len())
            .filter(|&v| w[v] != self.actual[v])
            .map(|v| self.vars[v].0)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Closure of `a` is contained in closure of `b`.
    pub fn region_subset(&self, a: &[usize], b: &[usize]) -> bool {
        a.iter().all(|&p| b.iter().any(|&q| self.precedes(q, p)))
    }

    pub fn region_proper_subset(&self, a: &[usize], b: &[usize]) -> bool {
        self.region_subset(a, b) && !self.region_subset(b, a)
    }

    /// Truth of `p` in world `w`, straight from the formula tree.
    pub fn holds(&self, p: &Proposition, w: &[usize]) -> bool {
        match p {
            Proposition::Const(b) => *b,
            Proposition::Atom {
                variable,
                op,
                value,
            } => {
                let v: usize = variable[1..].parse().unwrap();
                let equal = value_name(w[v]) == value.as_str();
                match op {
                    Comparison::Eq => equal,
                    Comparison::Ne => !equal,
                }
            }
            Proposition::Not(a) => !self.holds(a, w),
            Proposition::And(a, b) => self.holds(a, w) && self.holds(b, w),
            Proposition::Or(a, b) => self.holds(a, w) || self.holds(b, w),
        }
    }

    /// φ-worlds whose region properly contains no other φ-world's region.
    pub fn primaries(&self, phi: &Proposition) -> Vec<Vec<usize>> {
        let phis: Vec<(Vec<usize>, Vec<usize>)> = self
            .worlds()
            .into_iter()
            .filter(|w| self.holds(phi, w))
            .map(|w| {
                let d = self.diff(&w);
                (w, d)
            })
            .collect();
        phis.iter()
            .filter(|(_, d)| !phis.iter().any(|(_, e)| self.region_proper_subset(e, d)))
            .map(|(w, _)| w.clone())
            .collect()
    }

    pub fn dstc(&self, phi: &Proposition, psi: &Proposition) -> bool {
        self.primaries(phi).iter().all(|w| self.holds(psi, w))
    }

    /// ψ holds in every φ-world that deviates only inside the cones of `apices`.
    pub fn within(&self, phi: &Proposition, psi: &Proposition, apices: &[usize]) -> bool {
        self.worlds()
            .iter()
            .filter(|w| self.holds(phi, w) && self.region_subset(&self.diff(w), apices))
            .all(|w| self.holds(psi, w))
    }

    /// Some φ-world deviates only inside the cones of `apices`.
    pub fn realizable_within(&self, phi: &Proposition, apices: &[usize]) -> bool {
        self.worlds()
            .iter()
            .any(|w| self.holds(phi, w) && self.region_subset(&self.diff(w), apices))
    }
}

fn random_constraint<R: Rng>(
    rng: &mut R,
    vars: &[(usize, usize)],
    actual: &[usize],
) -> RawConstraint {
    let n = vars.len();
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let k = rng.gen_range(1..=n.min(3));
    let mut scope = ids[..k].to_vec();
    scope.sort_unstable();
    let mut rows = vec![scope.iter().map(|&v| actual[v]).collect::<Vec<_>>()];
    let mut row = vec![0; k];
    loop {
        if !rows.contains(&row) && rng.gen_bool(0.5) {
            rows.push(row.clone());
        }
        let mut j = 0;
        loop {
            if j == k {
                let guard = (k < n && rng.gen_bool(0.2)).then(|| {
                    let v = ids[rng.gen_range(k..n)];
                    (v, rng.gen_range(0..vars[v].1))
                });
                return RawConstraint { scope, rows, guard };
            }
            row[j] += 1;
            if row[j] < vars[scope[j]].1 {
                break;
            }
            row[j] = 0;
            j += 1;
        }
    }
}

fn random_point<R: Rng>(rng: &mut R, dim: usize) -> (i64, Vec<i64>) {
    (
        rng.gen_range(-3..=3),
        (0..dim).map(|_| rng.gen_range(-3..=3)).collect(),
    )
}

/// A small random scenario, mostly 1+1, with table constraints that the
/// actual world satisfies.
pub fn random_model<R: Rng>(rng: &mut R) -> Model {
    let dim = if rng.gen_bool(0.8) { 1 } else { 3 };
    let n_points = rng.gen_range(1..=4);
    let points: Vec<(i64, Vec<i64>)> = (0..n_points).map(|_| random_point(rng, dim)).collect();
    let n_vars = rng.gen_range(1..=4);
    let vars: Vec<(usize, usize)> = (0..n_vars)
        .map(|_| (rng.gen_range(0..n_points), rng.gen_range(1..=3)))
        .collect();
    let actual: Vec<usize> = vars.iter().map(|&(_, n)| rng.gen_range(0..n)).collect();
    let constraints = (0..rng.gen_range(0..=2))
        .map(|_| random_constraint(rng, &vars, &actual))
        .collect();
    Model {
        points,
        vars,
        constraints,
        actual,
        choices: Vec::new(),
    }
}

pub fn random_atom<R: Rng>(rng: &mut R, m: &Model) -> Proposition {
    let v = rng.gen_range(0..m.vars.len());
    let d = value_name(rng.gen_range(0..m.vars[v].1));
    if rng.gen_bool(0.8) {
        Proposition::eq(&var_name(v), d.as_str())
    } else {
        Proposition::ne(&var_name(v), d.as_str())
    }
}

pub fn random_proposition<R: Rng>(rng: &mut R, m: &Model, depth: usize) -> Proposition {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.05) {
            Proposition::Const(rng.gen_bool(0.5))
        } else {
            random_atom(rng, m)
        };
    }
    match rng.gen_range(0..3) {
        0 => random_proposition(rng, m, depth - 1).negate(),
        1 => random_proposition(rng, m, depth - 1).and(random_proposition(rng, m, depth - 1)),
        _ => random_proposition(rng, m, depth - 1).or(random_proposition(rng, m, depth - 1)),
    }
}

/// Two choice variables `x0` at `P0` and `x1` at `P1`, with `P0` and `P1`
/// space-like, plus outcome variables and random tables.
/// Whether the choices are free is up to the caller to check.
pub fn random_choice_model<R: Rng>(rng: &mut R) -> Model {
    let t0 = rng.gen_range(-2..=2);
    let x0 = rng.gen_range(-3..=3);
    let dt = rng.gen_range(-2..=2i64);
    let dx = (dt.abs() + rng.gen_range(1..=3)) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut points = vec![(t0, vec![x0]), (t0 + dt, vec![x0 + dx])];
    for _ in 0..rng.gen_range(1..=3) {
        points.push(random_point(rng, 1));
    }
    let mut vars = vec![(0, rng.gen_range(2..=3)), (1, rng.gen_range(2..=3))];
    for _ in 0..rng.gen_range(1..=3) {
        vars.push((rng.gen_range(0..points.len()), rng.gen_range(2..=3)));
    }
    let actual: Vec<usize> = vars.iter().map(|&(_, n)| rng.gen_range(0..n)).collect();
    let constraints = (0..rng.gen_range(0..=2))
        .map(|_| random_constraint(rng, &vars, &actual))
        .collect();
    Model {
        points,
        vars,
        constraints,
        actual,
        choices: vec![0, 1],
    }
}

/// All atoms `v = d` and `v != d` over the scenario's variables.
pub fn atoms(s: &Scenario) -> Vec<Proposition> {
    let mut out = Vec::new();
    for v in s.variables() {
        for d in &v.domain {
            out.push(Proposition::eq(&v.name, d.as_str()));
            out.push(Proposition::ne(&v.name, d.as_str()));
        }
    }
    out
}

/// Formulas of height at most 2: constants, atoms, and one connective
/// applied to atoms.
pub fn shallow_formulas(s: &Scenario) -> Vec<Proposition> {
    let atoms = atoms(s);
    let mut out = vec![Proposition::Const(true), Proposition::Const(false)];
    out.extend(atoms.iter().cloned());
    out.extend(atoms.iter().map(|a| a.clone().negate()));
    for (i, a) in atoms.iter().enumerate() {
        for b in &atoms[i + 1..] {
            out.push(a.clone().and(b.clone()));
            out.push(a.clone().or(b.clone()));
        }
    }
    out
}

/// Two validated, jointly realizable, space-like free choices.
pub struct ChoiceTrial {
    pub model: Model,
    pub chi: [Proposition; 2],
}

impl ChoiceTrial {
    pub fn draw<R: Rng>(r: &mut R) -> Option<ChoiceTrial> {
        let m = random_choice_model(r);
        let s = m.scenario();
        for c in [0, 1] {
            if !validate_free_choice(&s, &var_name(c)).unwrap().valid {
                return None;
            }
        }
        let alt = |r: &mut R, c: usize| loop {
            let d = r.gen_range(0..m.vars[c].1);
            if d != m.actual[c] {
                return Proposition::eq(&var_name(c), value_name(d).as_str());
            }
        };
        let chi = [alt(r, 0), alt(r, 1)];
        let joint = chi[0].clone().and(chi[1].clone());
        if !m.realizable_within(&joint, &[0, 1]) {
            return None;
        }
        Some(ChoiceTrial { model: m, chi })
    }

    /// Names of the theorems that fail for consequent `psi`.
    pub fn violations(&self, psi: &Proposition) -> Vec<&'static str> {
        let m = &self.model;
        let s = m.scenario();
        let [c1, c2] = &self.chi;
        let eval = |phi: &Proposition, psi: &Proposition| dstc_eval(&s, phi, psi).unwrap().truth;
        let mut out = Vec::new();

        if eval(&c1.clone().or(c2.clone()), psi) != (eval(c1, psi) && eval(c2, psi)) {
            out.push("disjunction");
        }
        if eval(&c1.clone().and(c2.clone()), psi)
            != m.within(&c1.clone().and(c2.clone()), psi, &[0, 1])
        {
            out.push("conjunction");
        }
        for (i, c) in self.chi.iter().enumerate() {
            if free_choice_eval(&s, c, psi).unwrap().truth != m.within(c, psi, &[i]) {
                out.push("agreement outside F(r)");
            }
            // ψ built only from variables outside F(r_i).
            let outside: Vec<usize> = (0..m.vars.len())
                .filter(|&v| !m.precedes(i, m.vars[v].0))
                .collect();
            if let Some(&v) = outside.first() {
                let local = Proposition::eq(&var_name(v), value_name(m.actual[v]).as_str());
                let other = Proposition::eq(
                    &var_name(v),
                    value_name((m.actual[v] + 1) % m.vars[v].1).as_str(),
                );
                for p in [local, other] {
                    if eval(c, &p) != m.holds(&p, &m.actual) {
                        out.push("outside ψ equals its actual value");
                    }
                }
            }
        }
        let chi_region = ConeRegion::cone(s.point(s.point_id("P0").unwrap()).clone());
        if compute_support(&s, c1).unwrap().regions() != [chi_region] {
            out.push("support is {F(r)}");
        }
        out
    }
}
