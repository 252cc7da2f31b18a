//! Exact-arithmetic analyzer for the integer-graded structure of three
//! related families of rings:
//!
//! * path-pair algebras of finite directed graphs ([`lpa`]), graded by
//!   path-length difference;
//! * bimodule pairing systems over a finite-dimensional coefficient ring
//!   ([`rsystem`]), with their tensor powers, rank-one operator spans,
//!   and graph-induced examples;
//! * corner skew Laurent polynomial rings ([`cslp`]) built from a corner
//!   isomorphism, with a free-word rewriting oracle.
//!
//! All arithmetic is exact (arbitrary-precision rationals); every verdict
//! the analyzers emit is either certified by an explicit witness, refuted
//! by one, or reported as inconclusive with the bound that was exhausted.
//! Nothing here samples floating point or trusts a heuristic.
//!
//! The [`cli`] module exposes the same analyses as the `zgrade` binary,
//! reporting in a line-oriented TSV format that round-trips.

pub mod cli;
pub mod cslp;
pub mod error;
pub mod fdalg;
pub mod grading;
pub mod graph;
pub mod linalg;
pub mod lpa;
pub mod rational;
pub mod report;
pub mod rsystem;

pub use error::{Error, Result};
