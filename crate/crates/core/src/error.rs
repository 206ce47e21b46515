//! Error and three-valued verdict types shared across the crate.

use thiserror::Error;

/// Three-valued outcome of a decision procedure.
///
/// `No` is only ever produced together with a checkable reason (an exhausted
/// enumeration or a failed necessary condition); searches that merely run out
/// of budget report `Undecided`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Undecided,
}

impl Decision {
    pub fn is_yes(self) -> bool {
        self == Decision::Yes
    }

    pub fn is_no(self) -> bool {
        self == Decision::No
    }

    pub fn is_decided(self) -> bool {
        self != Decision::Undecided
    }

    /// Three-valued conjunction: `No` dominates, then `Undecided`.
    pub fn and(self, other: Decision) -> Decision {
        use Decision::*;
        match (self, other) {
            (No, _) | (_, No) => No,
            (Undecided, _) | (_, Undecided) => Undecided,
            (Yes, Yes) => Yes,
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Decision::Yes => write!(f, "yes"),
            Decision::No => write!(f, "no"),
            Decision::Undecided => write!(f, "undecided"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different fields or algebras")]
    MixedOperands,

    #[error("element is not a member of the field: {0}")]
    NotInField(String),

    #[error("{0}")]
    InvalidField(String),

    #[error("operation requires characteristic 2")]
    RequiresCharTwo,

    #[error("operation requires characteristic different from 2")]
    RequiresCharNotTwo,

    #[error("field tower has no quadratic extension configured")]
    NoExtension,

    #[error("form is not regular")]
    NotRegular,

    #[error("{0}")]
    InvalidInput(String),

    #[error("excluded case: {0}")]
    ExcludedCase(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("undecided: {0}")]
    Undecided(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Collapses a `Result` into a `Decision`, turning `Undecided` errors into
    /// `Decision::Undecided` and propagating everything else.
    pub fn decision_from<T>(res: Result<T>, f: impl FnOnce(T) -> Decision) -> Result<Decision> {
        match res {
            Ok(v) => Ok(f(v)),
            Err(Error::Undecided(_)) => Ok(Decision::Undecided),
            Err(e) => Err(e),
        }
    }
}
