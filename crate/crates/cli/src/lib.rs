//! Query-document handling and the named verification suites behind the
//! `genspectra` command-line tool.

pub mod document;
pub mod suites;

pub use document::{run_check, run_oracle_dump, run_witness, CheckOutput, QueryDocument};
pub use suites::{run_suite, suite_ids, Scale, SuiteResult};
