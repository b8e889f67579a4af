use crate::geometry::ConeRegion;
use crate::worlds::Scenario;

use super::dstc::{minimal, phi_indices};
use super::{Proposition, SemanticsError};

/// A deduplicated family of φ-regions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportSet {
    regions: Vec<ConeRegion>,
}

impl SupportSet {
    /// Keeps the first occurrence of each region.
    pub fn new(regions: impl IntoIterator<Item = ConeRegion>) -> Self {
        let mut out: Vec<ConeRegion> = Vec::new();
        for r in regions {
            if !out.contains(&r) {
                out.push(r);
            }
        }
        SupportSet { regions: out }
    }

    pub fn regions(&self) -> &[ConeRegion] {
        &self.regions
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }
}

/// The minimal deviation regions among φ-worlds, in world enumeration order.
///
/// On a finite model this is the smallest coinitial family of φ-regions.
pub fn compute_support(s: &Scenario, phi: &Proposition) -> Result<SupportSet, SemanticsError> {
    let phi = phi.compile(s)?;
    let table = s.world_table();
    let idx = phi_indices(table, &phi);
    Ok(SupportSet::new(
        minimal(table, &idx)
            .into_iter()
            .map(|i| table.worlds[i].region.clone()),
    ))
}

/// Each member of `sigma` is the region of some φ-world, and every φ-world's
/// region contains some member.
pub fn supports(
    s: &Scenario,
    sigma: &SupportSet,
    phi: &Proposition,
) -> Result<bool, SemanticsError> {
    let phi = phi.compile(s)?;
    let table = s.world_table();
    let regions: Vec<&ConeRegion> = phi_indices(table, &phi)
        .into_iter()
        .map(|i| &table.worlds[i].region)
        .collect();
    let members_are_phi_regions = sigma.regions.iter().all(|d| regions.contains(&d));
    let coinitial = regions
        .iter()
        .all(|r| sigma.regions.iter().any(|d| d.is_subset(r)));
    Ok(members_are_phi_regions && coinitial)
}
