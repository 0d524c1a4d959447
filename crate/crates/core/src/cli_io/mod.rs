//! Dataset files, built-in fixtures and the command-line front end.

pub mod commands;
pub mod dataset;
pub mod fixtures;

pub use commands::{run, Cli, Command, EXIT_ERROR, EXIT_OK, EXIT_UNKNOWN};
pub use dataset::{load_dataset, Coord, Dataset, DatasetKind, Entries, Format, Metadata};
pub use fixtures::{fixture, fixture_names, resolve_dataset, FIXTURE_DIR_ENV};
