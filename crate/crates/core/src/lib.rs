//! Competing first-passage growth on the square lattice.
//!
//! Every site starts empty or colored by one of a few species. Each species
//! has a finite offset neighborhood and a rational update period; at each of
//! its update times every empty site that sees the species' color through one
//! of its offsets adopts that color, with simultaneous claims split by a fair
//! stateless coin. Sites change state at most once, so every run reaches a
//! final configuration.
//!
//! Modules:
//! - [`lattice`]: neighborhoods, species, the counter-based coin and initial sampling.
//! - [`dynamics`]: the frontier engine, the brute-force reference engine and the
//!   dependence radius used to size finite windows.
//! - [`continuum`]: the `(f, g, h)` recurrence and obstacle breakthrough times.
//! - [`blocking`]: layered blocking scaffolds, success indicators, gaps and
//!   protection certificates checked against the engine.
//! - [`harness`]: Monte Carlo fate estimates, phase scans, exponent fits and
//!   the red-wins / three-color experiments.
//! - [`io`]: config files, PPM rendering and CSV rows.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blocking;
pub mod continuum;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod io;
pub mod lattice;

pub use error::{Error, Result};
