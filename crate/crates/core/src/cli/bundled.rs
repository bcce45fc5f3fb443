use super::scenario::{parse_scenario, Scenario};
use crate::error::Result;

/// The example library shipped with the binary, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("E1-F2", include_str!("../../scenarios/e1-f2.phl")),
    ("E1-Q", include_str!("../../scenarios/e1-q.phl")),
    ("E1-F101", include_str!("../../scenarios/e1-f101.phl")),
    ("E2", include_str!("../../scenarios/e2.phl")),
    ("E3", include_str!("../../scenarios/e3.phl")),
    ("E4", include_str!("../../scenarios/e4.phl")),
];

pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

/// Source text of a bundled scenario; names are case-insensitive.
pub fn source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, t)| *t)
}

pub fn bundled(name: &str) -> Option<Result<Scenario>> {
    source(name).map(parse_scenario)
}
