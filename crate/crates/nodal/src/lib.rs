//! Command-line front-end for `nodal-core`: JSON encodings, reports with
//! content hashes, and the `nodal` binary's argument handling.

pub mod cli;
pub mod json;
pub mod report;
pub mod text;

pub use cli::run;
pub use report::Report;
