use std::fmt;

use warpdens::Error;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_OPTIMIZATION: u8 = 3;
pub const EXIT_DOMAIN: u8 = 4;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::DegenerateSample(_) => EXIT_INPUT,
            Error::OptimizationFailed(_) => EXIT_OPTIMIZATION,
            Error::Config(_) => EXIT_USAGE,
            Error::InvalidWarp(_)
            | Error::InvalidSrsf(_)
            | Error::Domain(_)
            | Error::Constraint(_)
            | Error::Shape(_)
            | Error::Range(_)
            | Error::OutsideSupport(_) => EXIT_DOMAIN,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}
