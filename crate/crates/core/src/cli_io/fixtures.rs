use std::path::Path;

use super::dataset::{load_dataset, Dataset, Format};
use crate::error::{Error, Result};

/// Environment variable naming a directory whose `<name>.json` files
/// replace the built-in fixtures.
pub const FIXTURE_DIR_ENV: &str = "ALGCURVE_FIXTURES";

macro_rules! fixture {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!("../../fixtures/", $name, ".json")),
        )
    };
}

pub const FIXTURES: &[(&str, &str)] = &[
    fixture!("approx8"),
    fixture!("barycenters16"),
    fixture!("circle6"),
    fixture!("ellipse16"),
    fixture!("example1_22"),
    fixture!("kepler38"),
    fixture!("kepler_boxes"),
    fixture!("lines10"),
    fixture!("planets6"),
];

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}

/// A built-in fixture, or its replacement from `dir` when present there.
pub fn fixture(name: &str, dir: Option<&Path>) -> Result<Dataset> {
    if let Some(dir) = dir {
        for (ext, fmt) in [("json", Format::Json), ("csv", Format::Csv)] {
            let p = dir.join(format!("{name}.{ext}"));
            if p.is_file() {
                return load_dataset(&p, Some(fmt));
            }
        }
    }
    let (_, text) = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Invalid(format!("unknown fixture {name:?}")))?;
    Dataset::from_json(text)
}

/// `fixtures:<name>` or a file path.
pub fn resolve_dataset(spec: &str, dir: Option<&Path>) -> Result<Dataset> {
    match spec.strip_prefix("fixtures:") {
        Some(name) => fixture(name, dir),
        None => load_dataset(Path::new(spec), None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_loads_and_round_trips() {
        for name in fixture_names() {
            let d = fixture(name, None).unwrap();
            assert_eq!(d.metadata.name, name);
            assert_eq!(Dataset::from_json(&d.to_json()).unwrap(), d, "{name}");
            assert_eq!(Dataset::from_csv(&d.to_csv()).unwrap(), d, "{name}");
        }
    }

    #[test]
    fn unknown_fixture() {
        assert!(fixture("nope", None).is_err());
        assert!(resolve_dataset("fixtures:nope", None).is_err());
        assert!(resolve_dataset("/no/such/file.json", None).is_err());
    }
}
