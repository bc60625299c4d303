//! Instance format, seeded generators, operations and suites for the `asymlin` CLI.

pub mod format;
pub mod generate;
pub mod ops;
pub mod suite;
