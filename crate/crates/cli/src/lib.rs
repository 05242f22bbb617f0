//! Scenario files, fixtures, reports, and execution plumbing for the
//! `margins` command-line tool.
//!
//! The decision calculus itself lives in the [`margins`] crate and is
//! `no_std`; this companion crate carries everything that needs an
//! operating system: the scenario file format ([`scenario`]), the bundled
//! 27-alternative example generator ([`fixture`]), multi-worker evaluation
//! ([`exec`]), and the text/CSV report emitters ([`report`]). The `margins`
//! binary in this package is a thin argument-parsing shell over these
//! modules.

pub mod exec;
pub mod fixture;
pub mod report;
pub mod scenario;
