// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared generator `{name}` at line {line}")]
    UndeclaredGenerator { name: String, line: usize },

    #[error("degree {degree} out of range [2, 9]")]
    DegreeOutOfRange { degree: usize },

    #[error("duplicate generator name `{name}` at line {line}")]
    DuplicateGenerator { name: String, line: usize },

    #[error("invalid word `{text}`: {message}")]
    InvalidWord { text: String, message: String },

    #[error("invalid vertex `{text}`: {message}")]
    InvalidVertex { text: String, message: String },

    #[error("invalid ray `{text}`: {message}")]
    InvalidRay { text: String, message: String },

    #[error("unknown catalog group `{key}`")]
    UnknownGroup { key: String },

    /// A level or group enumeration would exceed its configured cap.
    #[error("size cap exceeded: {what} needs {requested} but the cap is {cap}")]
    SizeCap {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    /// Exhaustive enumeration stopped at its cap.
    #[error("enumeration cap {cap} reached after {partial} elements")]
    EnumerationCap { partial: usize, cap: usize },

    #[error("action on level {level} is not transitive: orbit of the base point has {reached} of {total} points")]
    NotTransitive {
        level: usize,
        reached: usize,
        total: usize,
    },

    #[error("integrity failure: {0}")]
    Integrity(String),

    #[error("intersection matrices do not commute: B_{i} B_{j} != B_{j} B_{i}")]
    NonCommuting { i: usize, j: usize },

    #[error("eigenvalues could not be separated after {attempts} seeds")]
    DegenerateSpectrum { attempts: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by malformed user input rather than by a
    /// computation that ran out of room or failed an internal check.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UndeclaredGenerator { .. }
                | Error::DegreeOutOfRange { .. }
                | Error::DuplicateGenerator { .. }
                | Error::InvalidWord { .. }
                | Error::InvalidVertex { .. }
                | Error::InvalidRay { .. }
                | Error::UnknownGroup { .. }
        )
    }
}
