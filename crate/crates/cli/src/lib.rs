//! Command-line front end for `ifs-codings`: reads IFS description files,
//! runs the analyses and renders text, JSON and DOT output.

pub mod app;
pub mod parse;
pub mod report;
