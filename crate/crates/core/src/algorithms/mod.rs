//! Executable versions of the worked examples, each checked against a closed
//! form: Deutsch-Jozsa (quantum and classical), Grover search, the
//! probabilistic countdown walk, and identities about mixed states.

mod dj;
mod grover;
mod mixed;
mod oracle;
mod report;
mod walk;

pub use dj::{
    classical_one_query_fails, deutsch_jozsa_classical, deutsch_jozsa_program, deutsch_jozsa_quantum,
    deutsch_jozsa_report, DjClassical, DjQuantum,
};
pub use grover::{
    grover_optimal_iterations, grover_program, grover_report, grover_run, grover_spec, GroverAnalysis, GroverOptimum,
};
pub use mixed::{mixed_state_demos, MixedCheck, MixedReport, MIXED_TOL};
pub use oracle::{OracleClass, OracleFunction, MAX_BALANCED_QUBITS};
pub use report::AlgorithmReport;
pub use walk::{negative_binomial_pmf, probabilistic_walk, walk_program, walk_report, walk_spec};
