//! The named example structures shipped with the crate.

use super::cgs::Cgs;
use super::format::load_cgs;
use crate::error::{Error, Result};

/// Paper, rock, scissors.
pub const PRS: &str = include_str!("../../fixtures/prs.cgs");
/// Qualitative prisoner's dilemma.
pub const PD: &str = include_str!("../../fixtures/pd.cgs");
/// Shared-variable game.
pub const SV: &str = include_str!("../../fixtures/sv.cgs");
/// One-agent structure used by the QPTL reduction.
pub const RDC: &str = include_str!("../../fixtures/rdc.cgs");
/// Three agents over actions {0,1}.
pub const G1: &str = include_str!("../../fixtures/g1.cgs");
/// Three agents over actions {0,1,2}.
pub const G2: &str = include_str!("../../fixtures/g2.cgs");

/// Names accepted by [`fixture`], in a stable order.
pub const FIXTURE_NAMES: [&str; 6] = ["prs", "pd", "sv", "rdc", "g1", "g2"];

/// Source text of a named fixture.
pub fn fixture_source(name: &str) -> Option<&'static str> {
    match name.to_ascii_lowercase().as_str() {
        "prs" => Some(PRS),
        "pd" => Some(PD),
        "sv" => Some(SV),
        "rdc" => Some(RDC),
        "g1" => Some(G1),
        "g2" => Some(G2),
        _ => None,
    }
}

/// Loads a named fixture.
pub fn fixture(name: &str) -> Result<Cgs> {
    let text = fixture_source(name).ok_or_else(|| Error::UndeclaredName {
        kind: "fixture",
        name: name.to_string(),
    })?;
    load_cgs(text)
}

/// All fixtures keyed by name.
pub fn fixtures() -> Vec<(&'static str, Cgs)> {
    FIXTURE_NAMES
        .iter()
        .map(|&n| (n, fixture(n).expect("shipped fixtures are valid")))
        .collect()
}
