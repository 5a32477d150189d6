use thiserror::Error;

use crate::reconstruction::Stage;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("set of width {found} used with a space of {expected} points")]
    WidthMismatch { expected: usize, found: usize },

    #[error("point {point} out of range for a space of {n} points")]
    PointOutOfRange { point: usize, n: usize },

    #[error("{0} points requested, at most 64 are supported")]
    TooManyPoints(usize),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("{0:?} is not regularly open")]
    NotRegularOpen(Vec<usize>),

    #[error("{0:?} is not regularly closed")]
    NotRegularClosed(Vec<usize>),

    #[error("{found} values given for a space of {expected} points")]
    LengthMismatch { expected: usize, found: usize },

    #[error("discontinuous function: fiber {fiber:?} of value {value} is not open")]
    Discontinuous { value: String, fiber: Vec<usize> },

    #[error("functions are defined on different spaces")]
    SpaceMismatch,

    #[error("invalid value grid: {0}")]
    InvalidGrid(String),

    #[error("family would hold {count} functions, above the cap of {cap}")]
    FamilyOverflow { count: String, cap: usize },

    #[error("functions are not orthogonal")]
    NotOrthogonal,

    #[error("cannot parse {0:?} as a rational number")]
    ParseRational(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("lattice is not distributive")]
    NotDistributive,

    #[error("map is not a bijection: {0}")]
    NotBijective(String),

    #[error("function {0} is not a member of the family")]
    NotInFamily(String),

    #[error("not a compatibility isomorphism: {0}")]
    NotAnIsomorphism(String),

    #[error("set map is not well defined: {0}")]
    WellDefinedness(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("stage `{stage}` failed: {detail}")]
    Pipeline { stage: Stage, detail: String },

    #[error("json: {0}")]
    Json(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
