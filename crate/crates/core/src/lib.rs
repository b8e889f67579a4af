//! Space-time counterfactuals over finite models of localized events.
//!
//! A [`worlds::Scenario`] places event variables at points of Minkowski
//! space-time and lists the physical constraints that decide which worlds
//! are possible. A world's similarity to the actual world is measured by
//! the future closure of the points where it deviates; the counterfactual
//! `φ => ψ` holds when there are no φ-worlds or ψ holds in every φ-world
//! whose deviation region is minimal under set inclusion.

pub mod bundled;
pub mod dsl;
pub mod geometry;
pub mod report;
pub mod semantics;
pub mod worlds;
