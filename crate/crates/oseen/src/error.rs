//! Error taxonomy shared by the library and the CLI.
//!
//! Every failure is classified as either a *validation* problem (bad
//! arguments, mismatched grids, malformed input files, violated theorem
//! hypotheses) or a *numerical* problem (a computation that ran but did not
//! meet its tolerance). The CLI maps the former to exit code 2 and the
//! latter to exit code 3.

use thiserror::Error;

/// All errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on arguments failed (sizes, signs, ranges).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two objects that must share a discretization do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// An operation was invoked outside the parameter regime it is valid in
    /// (e.g. a trace formula that requires a2 < 0).
    #[error("regime violation: {0}")]
    RegimeViolation(String),

    /// A computation ran but failed numerically (tolerance, divergence,
    /// insufficient data for a fit).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A config file could not be parsed; `line` is 1-based.
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    /// An input CSV could not be parsed; `line` is 1-based.
    #[error("csv format error at line {line}: {message}")]
    CsvFormat { line: usize, message: String },

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error: 2 for usage/validation problems,
    /// 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Numerical(_) => 3,
            _ => 2,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_validation_vs_numerical_split() {
        assert_eq!(Error::InvalidArgument("x".into()).exit_code(), 2);
        assert_eq!(Error::GridMismatch("x".into()).exit_code(), 2);
        assert_eq!(Error::RegimeViolation("x".into()).exit_code(), 2);
        assert_eq!(
            Error::Config {
                line: 3,
                message: "x".into()
            }
            .exit_code(),
            2
        );
        assert_eq!(
            Error::CsvFormat {
                line: 7,
                message: "x".into()
            }
            .exit_code(),
            2
        );
        assert_eq!(Error::Numerical("x".into()).exit_code(), 3);
    }

    #[test]
    fn messages_carry_line_numbers() {
        let e = Error::CsvFormat {
            line: 12,
            message: "expected two comma-separated fields".into(),
        };
        assert!(e.to_string().contains("line 12"));
    }
}
