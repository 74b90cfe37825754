//! Command-line front end: synthesis, checking, benchmark suites and
//! dataset generation.
//!
//! Exit codes: 0 success, 1 check found violations or disagreement,
//! 2 input or specification error, 3 timeout.

pub mod bench;
pub mod commands;

use std::fmt;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_SPEC: u8 = 2;
pub const EXIT_TIMEOUT: u8 = 3;

/// A failure carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        let code = match error.downcast_ref::<lattice_select::Error>() {
            Some(lattice_select::Error::Timeout | lattice_select::Error::Cancelled) => EXIT_TIMEOUT,
            _ => EXIT_SPEC,
        };
        Failure { code, error }
    }
}

pub type CliResult<T = u8> = Result<T, Failure>;
