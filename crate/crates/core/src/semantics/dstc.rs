use crate::worlds::{Scenario, World, WorldTable};

use super::{CompiledProposition, Evaluator, Proposition, SemanticsError, Verdict, Witness};

/// Indices into the scenario's world table of the worlds satisfying `phi`.
pub(super) fn phi_indices(table: &WorldTable, phi: &CompiledProposition) -> Vec<usize> {
    (0..table.worlds.len())
        .filter(|&i| phi.holds(&table.worlds[i].world))
        .collect()
}

/// Members of `idx` with no strictly more similar member.
pub(super) fn minimal(table: &WorldTable, idx: &[usize]) -> Vec<usize> {
    idx.iter()
        .copied()
        .filter(|&i| !idx.iter().any(|&j| table.closer(j, i)))
        .collect()
}

fn worlds(table: &WorldTable, idx: &[usize]) -> Vec<World> {
    idx.iter().map(|&i| table.worlds[i].world.clone()).collect()
}

pub fn phi_worlds(s: &Scenario, phi: &Proposition) -> Result<Vec<World>, SemanticsError> {
    let phi = phi.compile(s)?;
    let table = s.world_table();
    Ok(worlds(table, &phi_indices(table, &phi)))
}

/// `w` is a φ-world and no φ-world has a deviation region properly inside its own.
pub fn is_primary(s: &Scenario, phi: &Proposition, w: &World) -> Result<bool, SemanticsError> {
    let phi = phi.compile(s)?;
    let table = s.world_table();
    let i = table
        .worlds
        .iter()
        .position(|pw| &pw.world == w)
        .filter(|&i| phi.holds(&table.worlds[i].world))
        .ok_or(SemanticsError::NotAPhiWorld)?;
    let idx = phi_indices(table, &phi);
    Ok(!idx.iter().any(|&j| table.closer(j, i)))
}

/// Every φ-world is primary or strictly out-ranked by a primary φ-world.
///
/// Always true on a finite world set; kept as an explicit check of the
/// precondition under which the evaluators are meaningful.
pub fn is_closed(s: &Scenario, phi: &Proposition) -> Result<bool, SemanticsError> {
    let phi = phi.compile(s)?;
    let table = s.world_table();
    Ok(closed(table, &phi_indices(table, &phi)))
}

fn closed(table: &WorldTable, idx: &[usize]) -> bool {
    let primaries = minimal(table, idx);
    idx.iter()
        .all(|&q| primaries.contains(&q) || primaries.iter().any(|&p| table.closer(p, q)))
}

/// DSTC: true iff there are no φ-worlds or ψ holds in every primary φ-world.
pub fn dstc_eval(
    s: &Scenario,
    phi: &Proposition,
    psi: &Proposition,
) -> Result<Verdict, SemanticsError> {
    let phi_c = phi.compile(s)?;
    let psi_c = psi.compile(s)?;
    let table = s.world_table();
    let idx = phi_indices(table, &phi_c);
    if idx.is_empty() {
        return Ok(Verdict::vacuous(Evaluator::Dstc));
    }
    if !closed(table, &idx) {
        return Err(SemanticsError::NotClosed);
    }
    let holds = |i: usize| psi_c.holds(&table.worlds[i].world);

    let primaries = minimal(table, &idx);
    let truth = primaries.iter().all(|&p| holds(p));
    let witnesses = idx
        .iter()
        .filter(|&&q| !holds(q))
        .map(|&q| {
            let by = primaries
                .iter()
                .chain(&idx)
                .find(|&&p| holds(p) && table.closer(p, q));
            Witness {
                falsifier: table.worlds[q].world.clone(),
                dominated_by: by.map(|&p| table.worlds[p].world.clone()),
            }
        })
        .collect();

    debug_assert_eq!(truth, clause2_truth(table, &idx, &psi_c));
    Ok(Verdict {
        evaluator: Evaluator::Dstc,
        truth,
        vacuous: false,
        primaries: worlds(table, &primaries),
        witnesses,
        frame: None,
    })
}

fn clause2_truth(table: &WorldTable, idx: &[usize], psi: &CompiledProposition) -> bool {
    let holds = |i: usize| psi.holds(&table.worlds[i].world);
    idx.iter()
        .filter(|&&q| !holds(q))
        .all(|&q| idx.iter().any(|&p| holds(p) && table.closer(p, q)))
}

/// DSTC's second clause read literally: for every φ-world `q` where ψ fails
/// there is a φ-world `p` where ψ holds whose region is properly inside `q`'s.
///
/// Primaries are never computed for the truth value. When false, the
/// verdict lists the minimal un-out-ranked falsifiers, which are primary.
pub fn dstc_eval_via_clause2(
    s: &Scenario,
    phi: &Proposition,
    psi: &Proposition,
) -> Result<Verdict, SemanticsError> {
    let phi = phi.compile(s)?;
    let psi = psi.compile(s)?;
    let table = s.world_table();
    let idx = phi_indices(table, &phi);
    if idx.is_empty() {
        return Ok(Verdict::vacuous(Evaluator::Clause2));
    }
    let holds = |i: usize| psi.holds(&table.worlds[i].world);

    let mut witnesses = Vec::new();
    let mut undominated = Vec::new();
    for &q in idx.iter().filter(|&&q| !holds(q)) {
        let by = idx.iter().find(|&&p| holds(p) && table.closer(p, q));
        if by.is_none() {
            undominated.push(q);
        }
        witnesses.push(Witness {
            falsifier: table.worlds[q].world.clone(),
            dominated_by: by.map(|&p| table.worlds[p].world.clone()),
        });
    }
    Ok(Verdict {
        evaluator: Evaluator::Clause2,
        truth: undominated.is_empty(),
        vacuous: false,
        primaries: worlds(table, &minimal(table, &undominated)),
        witnesses,
        frame: None,
    })
}

/// The existential-first variant: some ψ-world out-ranks every φ-world
/// where ψ fails. Agrees with DSTC under a total order, not under inclusion.
///
/// `primaries` holds the uniform out-ranking world when one exists.
pub fn lewis_alt_eval(
    s: &Scenario,
    phi: &Proposition,
    psi: &Proposition,
) -> Result<Verdict, SemanticsError> {
    let phi = phi.compile(s)?;
    let psi = psi.compile(s)?;
    let table = s.world_table();
    let idx = phi_indices(table, &phi);
    if idx.is_empty() {
        return Ok(Verdict::vacuous(Evaluator::Footnote));
    }
    let holds = |i: usize| psi.holds(&table.worlds[i].world);
    let falsifiers: Vec<usize> = idx.iter().copied().filter(|&q| !holds(q)).collect();
    let uniform = idx
        .iter()
        .copied()
        .find(|&p| holds(p) && falsifiers.iter().all(|&q| table.closer(p, q)));
    let witnesses = falsifiers
        .iter()
        .map(|&q| Witness {
            falsifier: table.worlds[q].world.clone(),
            dominated_by: idx
                .iter()
                .find(|&&p| holds(p) && table.closer(p, q))
                .map(|&p| table.worlds[p].world.clone()),
        })
        .collect();
    Ok(Verdict {
        evaluator: Evaluator::Footnote,
        truth: uniform.is_some(),
        vacuous: false,
        primaries: uniform
            .map(|p| vec![table.worlds[p].world.clone()])
            .unwrap_or_default(),
        witnesses,
        frame: None,
    })
}
