//! Grid files, verification suites, a results cache and the `lt` command.

pub mod cache;
pub mod cli;
pub mod format;
pub mod parallel;
pub mod report;
pub mod suites;
