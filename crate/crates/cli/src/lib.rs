//! Library surface of the command-line front end: the document format and
//! the five batch workflows, shared by the binary and the test suites.

pub mod commands;
pub mod document;
pub mod error;
