//! Library surface of the command-line tool; `main` is a thin wrapper so
//! the command logic stays testable in-process.

pub mod commands;
pub mod io;
pub mod report;

pub use commands::run;
