//! One-form DSL and report rendering backing the `suq2` binary.

pub mod parser;
pub mod report;
