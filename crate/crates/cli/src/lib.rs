//! Library side of the `bas` command line tool: the algebra document
//! format, reports and command implementations.

pub mod commands;
pub mod document;
pub mod report;

pub use document::AlgebraDocument;
pub use report::Report;
