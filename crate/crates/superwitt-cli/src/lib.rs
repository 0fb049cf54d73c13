//! Command-line front end: expression grammar, JSON/CSV forms, and the
//! seeded verification suites behind `verify`.

pub mod forms;
pub mod parse;
pub mod suites;
