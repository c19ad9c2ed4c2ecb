//! Surface language, file formats and command-line interface for quantum
//! predicative programs.

pub mod ast;
pub mod cli;
pub mod diag;
pub mod lexer;
pub mod lower;
pub mod output;
pub mod parser;
pub mod printer;

pub use diag::Diagnostic;
pub use lower::{load, lower, Lowered};
pub use parser::parse;
pub use printer::print_program;
