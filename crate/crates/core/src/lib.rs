//! Exact verification of supercongruences for the truncated series
//! `3F2(1/2, -a, a+1; 1, 1; 1)` modulo `p^2`, together with the combinatorial
//! identities and auxiliary congruences their proofs pass through.
//!
//! Everything is exact: rationals are arbitrary precision and congruences are
//! checked as equalities of residues modulo `p` or `p^2`.

pub mod arith;
pub mod congruences;
pub mod error;
pub mod hyperseries;
pub mod identities;
pub mod padic;
pub mod report;
pub mod selftest;
pub mod theorems;

pub use arith::{BigInt, BigRational, PadicContext, Residue};
pub use congruences::CongruenceCase;
pub use error::{Error, Result};
pub use padic::{Parity, SpecialValue};
pub use report::{emit_report, run_grid, CheckRecord, Report, RunConfig, Status};
pub use theorems::{Theorem, TheoremCase};
