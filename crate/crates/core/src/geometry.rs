//! Exact causal structure of flat space-time.
//!
//! Units have `c = 1`. Every coordinate is an exact rational so that the
//! light-cone boundary is decided without rounding: a point on the cone of
//! `r` belongs to the forward cone `F(r)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact coordinate type.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: {left} vs {right} spatial components")]
    DimensionMismatch { left: usize, right: usize },
    #[error("points must have 1 or 3 spatial components, got {0}")]
    InvalidSpatialDimension(usize),
    #[error("boost velocity {0} is not strictly between -1 and 1")]
    SuperluminalBoost(Rational),
    #[error("boosts are only supported in 1+1 dimensions, got {0} spatial components")]
    UnsupportedDimension(usize),
    #[error("points {first} and {second} coincide")]
    CoincidentPoints { first: usize, second: usize },
}

/// Builds the rational `numer / denom`.
///
/// Panics if `denom` is zero.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `n`, `+n`, `-n` or `p/q` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let digits = numer.strip_prefix(['+', '-']).unwrap_or(numer);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let numer: BigInt = numer.trim_start_matches('+').parse().ok()?;
    let denom: BigInt = match denom {
        Some(d) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

/// A point of (1+1)- or (1+3)-dimensional Minkowski space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpacetimePoint {
    t: Rational,
    x: Vec<Rational>,
}

impl SpacetimePoint {
    pub fn new(t: Rational, x: Vec<Rational>) -> Result<Self, GeometryError> {
        match x.len() {
            1 | 3 => Ok(SpacetimePoint { t, x }),
            n => Err(GeometryError::InvalidSpatialDimension(n)),
        }
    }

    /// Integer-coordinate shorthand, mostly for tests and bundled scenarios.
    pub fn from_ints(t: i64, x: &[i64]) -> Result<Self, GeometryError> {
        Self::new(
            Rational::from_integer(t.into()),
            x.iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn x(&self) -> &[Rational] {
        &self.x
    }

    pub fn spatial_dim(&self) -> usize {
        self.x.len()
    }

    fn check_dim(&self, other: &SpacetimePoint) -> Result<(), GeometryError> {
        if self.x.len() == other.x.len() {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch {
                left: self.x.len(),
                right: other.x.len(),
            })
        }
    }

    /// `true` iff `other` lies in `F(self)`. Dimensions are assumed equal.
    fn precedes(&self, other: &SpacetimePoint) -> bool {
        let dt = &other.t - &self.t;
        if dt.is_negative() {
            return false;
        }
        let spatial: Rational = self
            .x
            .iter()
            .zip(&other.x)
            .map(|(a, b)| {
                let d = b - a;
                &d * &d
            })
            .sum();
        spatial <= &dt * &dt
    }
}

impl fmt::Display for SpacetimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.t)?;
        for c in &self.x {
            write!(f, ", {c}")?;
        }
        write!(f, ")")
    }
}

/// `true` iff `s` is on or within the forward light cone of `r`.
///
/// Reflexive: every point precedes itself.
pub fn causally_precedes(r: &SpacetimePoint, s: &SpacetimePoint) -> Result<bool, GeometryError> {
    r.check_dim(s)?;
    Ok(r.precedes(s))
}

/// `true` iff neither point lies in the other's forward cone.
pub fn space_like(r: &SpacetimePoint, s: &SpacetimePoint) -> Result<bool, GeometryError> {
    Ok(!causally_precedes(r, s)? && !causally_precedes(s, r)?)
}

/// A finite union of forward light cones.
///
/// The apex set is kept as the sorted antichain of causally minimal points,
/// so two regions are equal exactly when their apex lists are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConeRegion {
    apices: Vec<SpacetimePoint>,
}

impl ConeRegion {
    pub fn empty() -> Self {
        ConeRegion::default()
    }

    /// The forward cone `F(r)` of a single point.
    pub fn cone(r: SpacetimePoint) -> Self {
        ConeRegion { apices: vec![r] }
    }

    pub fn apices(&self) -> &[SpacetimePoint] {
        &self.apices
    }

    pub fn is_empty(&self) -> bool {
        self.apices.is_empty()
    }

    /// Membership: some apex causally precedes `s`.
    ///
    /// A point whose dimension differs from the apices is never contained.
    pub fn contains(&self, s: &SpacetimePoint) -> bool {
        self.apices
            .iter()
            .any(|r| r.spatial_dim() == s.spatial_dim() && r.precedes(s))
    }

    /// Non-strict containment. `F(r)` lies inside a region iff `r` does.
    pub fn is_subset(&self, other: &ConeRegion) -> bool {
        self.apices.iter().all(|r| other.contains(r))
    }

    pub fn is_proper_subset(&self, other: &ConeRegion) -> bool {
        self.is_subset(other) && !other.is_subset(self)
    }

    pub fn union(&self, other: &ConeRegion) -> ConeRegion {
        future_closure(self.apices.iter().chain(&other.apices))
    }
}

impl fmt::Display for ConeRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.apices.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, apex) in self.apices.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "F{apex}")?;
        }
        Ok(())
    }
}

/// Union of the forward cones of `points`, in canonical form.
///
/// The apices are the causally minimal input points; duplicates collapse.
pub fn future_closure<'a, I>(points: I) -> ConeRegion
where
    I: IntoIterator<Item = &'a SpacetimePoint>,
{
    let mut candidates: Vec<&SpacetimePoint> = points.into_iter().collect();
    candidates.sort();
    candidates.dedup();
    let apices = candidates
        .iter()
        .filter(|p| {
            !candidates
                .iter()
                .any(|q| q != *p && q.spatial_dim() == p.spatial_dim() && q.precedes(p))
        })
        .map(|p| (*p).clone())
        .collect();
    ConeRegion { apices }
}

/// A Lorentz boost along the single spatial axis of 1+1 space-time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boost {
    v: Rational,
}

impl Boost {
    pub fn new(v: Rational) -> Result<Self, GeometryError> {
        if v.abs() >= Rational::one() {
            return Err(GeometryError::SuperluminalBoost(v));
        }
        Ok(Boost { v })
    }

    pub fn identity() -> Self {
        Boost {
            v: Rational::zero(),
        }
    }

    pub fn velocity(&self) -> &Rational {
        &self.v
    }

    /// `γ² = 1 / (1 - v²)`.
    pub fn gamma_squared(&self) -> Rational {
        (Rational::one() - &self.v * &self.v).recip()
    }

    /// `t - v·x`, the boosted time divided by `γ`.
    ///
    /// Comparing these values orders events in the boosted frame exactly.
    pub fn time_key(&self, r: &SpacetimePoint) -> Result<Rational, GeometryError> {
        if r.spatial_dim() != 1 {
            return Err(GeometryError::UnsupportedDimension(r.spatial_dim()));
        }
        Ok(&r.t - &self.v * &r.x[0])
    }
}

/// Image of a point under a boost, kept as `γ · scaled` with `γ` factored out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoostedPoint {
    scaled: SpacetimePoint,
    gamma_squared: Rational,
}

impl BoostedPoint {
    /// `(t - v·x, x - v·t)`; the true image is this point times `γ`.
    pub fn scaled(&self) -> &SpacetimePoint {
        &self.scaled
    }

    pub fn gamma_squared(&self) -> &Rational {
        &self.gamma_squared
    }

    /// The exact image, when `γ` happens to be rational (e.g. `v = 3/5`).
    pub fn exact(&self) -> Option<SpacetimePoint> {
        let gamma = rational_sqrt(&self.gamma_squared)?;
        Some(SpacetimePoint {
            t: self.scaled.t() * &gamma,
            x: self.scaled.x().iter().map(|c| c * &gamma).collect(),
        })
    }

    /// Time order in the boosted frame. `γ > 0` is common to both sides.
    pub fn cmp_time(&self, other: &BoostedPoint) -> Ordering {
        self.scaled.t().cmp(other.scaled.t())
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

pub fn apply_boost(b: &Boost, r: &SpacetimePoint) -> Result<BoostedPoint, GeometryError> {
    let t = b.time_key(r)?;
    let x = &r.x[0] - &b.v * &r.t;
    Ok(BoostedPoint {
        scaled: SpacetimePoint { t, x: vec![x] },
        gamma_squared: b.gamma_squared(),
    })
}

/// Groups point indices by boosted time, earliest first.
///
/// Indices within a group share the same time and stay in input order.
pub fn time_order(points: &[SpacetimePoint], b: &Boost) -> Result<Vec<Vec<usize>>, GeometryError> {
    let keys = points
        .iter()
        .map(|p| b.time_key(p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| keys[i].cmp(&keys[j]).then(i.cmp(&j)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match groups.last_mut() {
            Some(g) if keys[g[0]] == keys[i] => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    Ok(groups)
}

/// A strict time ordering of a point list realized by some boost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameOrdering {
    /// Input indices, earliest boosted time first.
    pub order: Vec<usize>,
    pub velocity: Rational,
}

/// Every total time ordering of `points` reachable by a boost with `|v| < 1`.
///
/// The order of a space-like pair flips only at `v = Δt/Δx`, so one sample
/// from each open interval between those critical velocities covers every
/// ordering. Results are sorted by witness velocity.
pub fn enumerate_orderings(points: &[SpacetimePoint]) -> Result<Vec<FrameOrdering>, GeometryError> {
    for p in points {
        if p.spatial_dim() != 1 {
            return Err(GeometryError::UnsupportedDimension(p.spatial_dim()));
        }
    }
    let mut critical = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (p, q) = (&points[i], &points[j]);
            if p == q {
                return Err(GeometryError::CoincidentPoints {
                    first: i,
                    second: j,
                });
            }
            let dx = &q.x[0] - &p.x[0];
            if dx.is_zero() {
                continue;
            }
            let v = (&q.t - &p.t) / dx;
            if v.abs() < Rational::one() {
                critical.push(v);
            }
        }
    }
    critical.sort();
    critical.dedup();

    let mut bounds = Vec::with_capacity(critical.len() + 2);
    bounds.push(-Rational::one());
    bounds.extend(critical);
    bounds.push(Rational::one());

    let mut out: Vec<FrameOrdering> = Vec::new();
    for w in bounds.windows(2) {
        let v = (&w[0] + &w[1]) / Rational::from_integer(2.into());
        let boost = Boost::new(v.clone())?;
        let groups = time_order(points, &boost)?;
        debug_assert!(groups.iter().all(|g| g.len() == 1));
        let order: Vec<usize> = groups.into_iter().flatten().collect();
        if !out.iter().any(|o| o.order == order) {
            out.push(FrameOrdering { order, velocity: v });
        }
    }
    Ok(out)
}
