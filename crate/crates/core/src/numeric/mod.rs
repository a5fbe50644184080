//! Finite-dimensional numeric backend at roots of unity.

pub mod braid;
pub mod rep;
pub mod word;

pub use braid::{braid_checks, braid_phi, BraidChecks};
pub use rep::{build_rep, measure_commutation, ClockShiftRep, CMat, Measured, MonomialOp};
pub use word::{word_chart, ReducedWord, WordChart};
