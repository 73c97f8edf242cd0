use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },

    #[error("field mismatch: GF(2^{left}) vs GF(2^{right})")]
    FieldMismatch { left: u32, right: u32 },

    #[error("element is not a unit")]
    NotUnit,

    #[error("matrix is not in SL2 (determinant != 1)")]
    NotSpecialLinear,

    #[error("level {level} too deep for modulus degree {modulus}")]
    LevelTooDeep { level: usize, modulus: usize },

    #[error("element has level {found}, need at least {needed}")]
    InsufficientLevel { found: usize, needed: usize },

    #[error("schedule stalls at beta = {beta} (step {step})")]
    ScheduleStall { beta: usize, step: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("no chain step with index {0}")]
    InvalidLevel(i64),

    #[error("unsupported field degree {0}")]
    UnsupportedField(u32),

    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },

    #[error("root label is {0}, element is not in the first level stabiliser")]
    NotInStabiliser(u8),

    #[error("element is not in {0}")]
    NotInSubgroup(String),

    #[error("element not found in the closure table")]
    NotInClosure,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("size {size} exceeds threshold {threshold}")]
    Threshold { size: u128, threshold: u128 },

    #[error("generating set does not generate the group ({reached} of {expected} elements reached)")]
    NotGenerating { reached: usize, expected: usize },

    #[error("base case failed: {0}")]
    BaseFailure(String),

    #[error("oracle congruence violated at level {level}")]
    OracleViolation { level: usize },

    #[error("navigation congruence violated at level {level}")]
    CongruenceViolation { level: usize },

    #[error("i/o: {0}")]
    Io(String),

    #[error("no meet-in-the-middle match within radius {radius}")]
    NoMatch { radius: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
