//! IO for `cmk3-core`: JSON encodings, the example catalog and the command
//! line front end.

pub mod catalog;
pub mod cli;
pub mod json;

pub use cli::{run, Outcome};
