//! Quantum predicative programming.
//!
//! Programs and specifications denote probability distributions over program
//! states: classical variables, an optional quantum register, and a time
//! value that may be infinite. This crate evaluates that semantics exactly
//! on finite supports and checks refinement `S ⇐ P` exhaustively over
//! declared finite windows of prestates.
//!
//! Modules, bottom up:
//! - [`qstate`]: amplitude vectors, basis kets, inner and tensor products.
//! - [`qops`]: unitary operators with structured fast forms and a dense fallback.
//! - [`qmeasure`]: general, projective, basis and computational measurement.
//! - [`semantics`]: program states, distributions, the program AST, the
//!   evaluator and the refinement checker.
//! - [`algorithms`]: Deutsch-Jozsa, Grover, the random walk and mixed-state
//!   identities, each checked against its closed form.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]
// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;

pub mod algorithms;
mod error;
pub mod matrix;
pub mod qmeasure;
pub mod qops;
pub mod qstate;
pub mod semantics;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use qops::Operator;
pub use qstate::{Amplitude, QuantumState};

/// Support entries and measurement outcomes at or below this probability are dropped.
pub const PROB_EPS: f64 = 1e-12;
