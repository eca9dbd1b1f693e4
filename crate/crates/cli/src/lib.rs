//! Command-line front end for `su2lift`: JSON matrix documents in, JSON
//! documents out, with stable exit codes (0 ok, 2 malformed input, 3 invariant
//! violation, 4 internal inconsistency).

pub mod commands;
pub mod document;
pub mod error;
pub mod format;

pub use commands::{run, Command, Options};
pub use document::{parse_document, parse_documents, Kind, MatrixDocument, Payload};
pub use error::CliError;
pub use format::{format_f64, to_stable_string};
