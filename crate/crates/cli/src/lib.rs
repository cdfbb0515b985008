//! Library surface of the circuit CLI: DSL parsing, execution, reporting,
//! and the golden verification suite. The `majsim` binary is a thin wrapper.

pub mod ast;
pub mod parser;
pub mod report;
pub mod runner;
pub mod verify;
