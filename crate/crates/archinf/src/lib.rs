//! Command-line front end for [`archinf_core`].
//!
//! This crate carries everything that needs the standard library — argument
//! parsing, configuration files, JSON/CSV serialization, atomic file output,
//! and thread-pool plumbing — while all numerical content lives in the
//! `no_std`-compatible core crate.
//!
//! Five subcommands:
//!
//! * `check` — existence verdict for a coefficient/innovation pair,
//! * `dstar` — critical memory parameter for an innovation law,
//! * `simulate` — a single path by either engine, written as CSV,
//! * `verify` — Monte Carlo suites (`bounds`, `equivalence`, `divergence`),
//! * `coeffs` — materialized coefficients as CSV.
//!
//! Exit codes: `0` success/exists, `2` inconclusive (including verification
//! suites that complete but do not confirm), `3` rejected input, `4` runtime
//! failure, `64` usage error.

#![deny(unsafe_code)]
#![warn(missing_docs)]

pub mod config;
pub mod csv_io;
pub mod report;
pub mod run;
