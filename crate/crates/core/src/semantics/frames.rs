//! The frame-dependent alternatives to DSTC.
//!
//! In a fixed frame the most similar φ-worlds are those whose first
//! deviation from the actual world happens latest. The actual world never
//! deviates and counts as deviating at +∞.

use crate::geometry::{enumerate_orderings, time_order, Boost, Rational, SpacetimePoint};
use crate::worlds::{PointId, Scenario};

use super::dstc::phi_indices;
use super::{Evaluator, FrameWitness, Proposition, SemanticsError, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum FirstDeviation {
    At(Rational),
    Never,
}

fn require_1plus1(s: &Scenario) -> Result<(), SemanticsError> {
    match s.spatial_dim() {
        1 => Ok(()),
        d => Err(SemanticsError::FramesRequire1Plus1(d)),
    }
}

fn frame_witness(s: &Scenario, b: &Boost) -> Result<FrameWitness, SemanticsError> {
    let points: Vec<SpacetimePoint> = s.points().iter().map(|(_, p)| p.clone()).collect();
    let order = time_order(&points, b)?
        .into_iter()
        .map(|g| g.into_iter().map(PointId).collect())
        .collect();
    Ok(FrameWitness {
        velocity: b.velocity().clone(),
        order,
    })
}

/// ψ holds in every φ-world whose first deviation is latest in frame `b`.
/// Ties all count as most similar.
pub fn frame_eval(
    s: &Scenario,
    phi: &Proposition,
    psi: &Proposition,
    b: &Boost,
) -> Result<Verdict, SemanticsError> {
    require_1plus1(s)?;
    let phi = phi.compile(s)?;
    let psi = psi.compile(s)?;
    let evaluator = Evaluator::Frame(b.velocity().clone());
    let frame = Some(frame_witness(s, b)?);
    let table = s.world_table();
    let idx = phi_indices(table, &phi);
    if idx.is_empty() {
        return Ok(Verdict {
            frame,
            ..Verdict::vacuous(evaluator)
        });
    }

    let mut first = Vec::with_capacity(idx.len());
    for &i in &idx {
        let times = table.worlds[i]
            .diff
            .iter()
            .map(|&p| b.time_key(s.point(p)))
            .collect::<Result<Vec<_>, _>>()?;
        first.push(
            times
                .into_iter()
                .min()
                .map_or(FirstDeviation::Never, FirstDeviation::At),
        );
    }
    let latest = first.iter().max().expect("non-empty");
    let best: Vec<usize> = idx
        .iter()
        .zip(&first)
        .filter(|(_, f)| *f == latest)
        .map(|(&i, _)| i)
        .collect();
    let holds = |i: usize| psi.holds(&table.worlds[i].world);

    Ok(Verdict {
        evaluator,
        truth: best.iter().all(|&i| holds(i)),
        vacuous: false,
        primaries: best
            .iter()
            .map(|&i| table.worlds[i].world.clone())
            .collect(),
        witnesses: best
            .iter()
            .filter(|&&i| !holds(i))
            .map(|&i| Witness {
                falsifier: table.worlds[i].world.clone(),
                dominated_by: None,
            })
            .collect(),
        frame,
    })
}

/// One realizable time ordering of the scenario's points and the verdict in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameRow {
    pub velocity: Rational,
    pub verdict: Verdict,
}

/// [`frame_eval`] once per realizable ordering, in increasing witness velocity.
///
/// Points sharing coordinates are ordered as one.
pub fn frame_table(
    s: &Scenario,
    phi: &Proposition,
    psi: &Proposition,
) -> Result<Vec<FrameRow>, SemanticsError> {
    require_1plus1(s)?;
    let mut distinct: Vec<SpacetimePoint> = s.points().iter().map(|(_, p)| p.clone()).collect();
    distinct.sort();
    distinct.dedup();
    enumerate_orderings(&distinct)?
        .into_iter()
        .map(|o| {
            let b = Boost::new(o.velocity.clone())?;
            Ok(FrameRow {
                velocity: o.velocity,
                verdict: frame_eval(s, phi, psi, &b)?,
            })
        })
        .collect()
}

/// True iff some Lorentz frame verifies `φ => ψ`. The verdict carries the
/// first verifying frame, or the first frame tried when none verifies.
pub fn any_frame_eval(
    s: &Scenario,
    phi: &Proposition,
    psi: &Proposition,
) -> Result<Verdict, SemanticsError> {
    let rows = frame_table(s, phi, psi)?;
    let chosen = rows
        .iter()
        .find(|r| r.verdict.truth)
        .or_else(|| rows.first())
        .expect("at least one ordering");
    Ok(Verdict {
        evaluator: Evaluator::AnyFrame,
        ..chosen.verdict.clone()
    })
}
