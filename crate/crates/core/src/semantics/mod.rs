//! Programs and specifications as distributions over program states.
//!
//! A [`ProgramState`] holds the classical variables, an optional quantum
//! register and the time. A [`Program`] denotes, for each prestate, a finite
//! [`Distribution`] of poststates, computed exactly by [`eval`].

mod dist;
mod eval;
mod expr;
mod kernel;
mod program;
mod refine;
mod state;

pub use dist::{superposition, Distribution, MERGE_TOL};
pub use eval::{eval, eval_state, sample, EvalResult, DEFAULT_FUEL, PRUNE_EPS, REPORT_EPS};
pub use expr::{binomial, BinOp, CmpOp, Expr, Func, Value};
pub use kernel::{prob_if, seq_compose, Kernel, ProbIfKernel, ProgramKernel, SeqKernel, SpecKernel};
pub use program::{Measurement, Program, Stmt};
pub use refine::{
    check_refinement, check_timed_refinement, CheckOptions, Counterexample, PrestateVerdict, RefinementChecker,
    RefinementReport, Spec, MAX_COUNTEREXAMPLES, REFINE_TOL,
};
pub use state::{
    format_ket_sum, Domain, ProgramState, Scalar, Schema, Time, VarDecl, MAX_DOMAIN_SIZE, MAX_STATE_SPACE, TIME_NAME,
};
