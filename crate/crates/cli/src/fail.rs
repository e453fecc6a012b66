//! Stable exit-code contract: 0 success, 2 input validation, 3 numerical.

use clat_core::Error;

#[derive(Debug)]
pub struct Failure {
    pub exit_code: i32,
    pub message: String,
}

pub type CliResult<T> = Result<T, Failure>;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit_code = match &e {
            Error::InvalidParameter(_)
            | Error::Domain(_)
            | Error::SizeLimit(_)
            | Error::LengthMismatch(_) => 2,
            Error::Undefined(_) | Error::Degenerate(_) | Error::Numerical(_) => 3,
        };
        Failure {
            exit_code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            exit_code: 2,
            message: e.to_string(),
        }
    }
}
