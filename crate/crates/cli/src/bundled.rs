//! Scenario files shipped inside the binary.

use std::path::Path;

use crate::error::CliResult;
use crate::scenario_file::{load_str, read_scenario, LoadedScenario};

pub const BUNDLED: [(&str, &str); 5] = [
    (
        "table1.scenario",
        include_str!("../fixtures/table1.scenario"),
    ),
    ("case1.scenario", include_str!("../fixtures/case1.scenario")),
    ("case2.scenario", include_str!("../fixtures/case2.scenario")),
    ("case3.scenario", include_str!("../fixtures/case3.scenario")),
    (
        "table6.scenario",
        include_str!("../fixtures/table6.scenario"),
    ),
];

pub const DEFAULT_SCENARIO: &str = "table1.scenario";

/// Text of a bundled scenario, matched with or without the `.scenario` suffix.
pub fn bundled(name: &str) -> Option<(&'static str, &'static str)> {
    BUNDLED
        .iter()
        .find(|(file, _)| *file == name || file.strip_suffix(".scenario") == Some(name))
        .copied()
}

pub fn load_bundled(name: &str) -> CliResult<LoadedScenario> {
    let (file, text) = bundled(name).expect("bundled scenario name");
    load_str(file.trim_end_matches(".scenario"), text)
}

/// An existing file wins over a bundled scenario of the same name.
pub fn resolve(spec: &str) -> CliResult<LoadedScenario> {
    let path = Path::new(spec);
    if !path.exists() {
        if let Some((file, text)) = bundled(spec) {
            return load_str(file.trim_end_matches(".scenario"), text);
        }
    }
    read_scenario(path)
}
