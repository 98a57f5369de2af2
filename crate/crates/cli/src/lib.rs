//! Library half of the `cremona` binary: input documents, reports and
//! the numerical map checker.

pub mod report;
pub mod schema;
pub mod verify;
