use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator `{name}` has degree {degree}; generators must have degree at least 2")]
    LowDegree { name: String, degree: u32 },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("degree mismatch for {what}: expected {expected}, found {found}")]
    DegreeMismatch {
        what: String,
        expected: u32,
        found: u32,
    },
    #[error("{0} is not homogeneous")]
    Inhomogeneous(String),
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("odd generator `{name}` raised to power {exp}")]
    OddPower { name: String, exp: u32 },
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("hypotheses unmet: {0}")]
    HypothesesUnmet(String),
    #[error("obstruction: {0}")]
    Obstruction(String),
    #[error("invalid: {0}")]
    Invalid(String),
    #[error("inconsistent homology bracket: {0}")]
    InconsistentBracket(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
