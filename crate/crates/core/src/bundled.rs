//! Worked scenarios shipped with the crate.

use crate::dsl::{parse_scenario, ScenarioDocument};

/// Names accepted by [`source`], in listing order.
pub const NAMES: [&str; 5] = ["epr", "vaidman", "ghz-fig1", "ghz-fig2", "divergence"];

/// File text of a bundled scenario.
pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "epr" => include_str!("../scenarios/epr.stc"),
        "vaidman" => include_str!("../scenarios/vaidman.stc"),
        "ghz-fig1" => include_str!("../scenarios/ghz-fig1.stc"),
        "ghz-fig2" => include_str!("../scenarios/ghz-fig2.stc"),
        "divergence" => include_str!("../scenarios/divergence.stc"),
        _ => return None,
    })
}

/// Parsed bundled scenario. Panics only if a shipped file is broken.
pub fn load(name: &str) -> Option<ScenarioDocument> {
    source(name).map(|text| {
        parse_scenario(text)
            .unwrap_or_else(|d| panic!("bundled scenario {name} is invalid: {}", d[0]))
    })
}
