use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("image {value} at position {position} is outside 1..={n}")]
    OutOfRange { position: usize, value: usize, n: usize },
    #[error("expected {expected} images, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("ground sets differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("ground set size {0} is not supported (must be 1..=32)")]
    UnsupportedSize(usize),
    #[error("position {position} is outside 1..={count}")]
    PositionOutOfRange { position: usize, count: usize },
    #[error("level {level} is invalid for n = {n}")]
    LevelOutOfRange { level: usize, n: usize },
    #[error("vector is not supported on preserved sets of color {color}")]
    NotCompatible { color: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("weights must be positive and sum to 1")]
    InvalidWeights,
    #[error("color system needs at least one color")]
    NoColors,
    #[error("semigroup exceeds the cap of {cap} elements")]
    ExplosionGuard { cap: usize },
    #[error("element is not in the kernel")]
    NotInKernel,
    #[error("sandwich product left the base group")]
    SandwichEscape,
    #[error("kernel cell ({partition}, {range}) is empty")]
    EmptyCell { partition: usize, range: usize },
    #[error("minimal-rank elements do not form a completely simple kernel")]
    NotCompletelySimple,
    #[error("linear system has no unique solution")]
    SingularSystem,
    #[error("measure is not of product form at kernel element {element}")]
    NotProductForm { element: usize },
    #[error("matrix is not substochastic")]
    NotSubstochastic,
    #[error("I - sP is numerically singular at s = {s}")]
    NearSingular { s: f64 },
    #[error("chain is not irreducible")]
    NotIrreducible,
    #[error("chain is periodic with period {period}")]
    NotAperiodic { period: usize },
    #[error("rank witness vector is not constant")]
    NotConstant,
    #[error("kernel rank {rank} is not n - 1 = {expected}")]
    NotRankNMinusOne { rank: usize, expected: usize },
    #[error("kernel rank {rank} does not match the required {expected}")]
    RankMismatch { rank: usize, expected: usize },
    #[error("vertex 1 carries no loop")]
    NoLoopAtVertexOne,
    #[error("more than one loop in the precursor system")]
    MultipleLoops,
    #[error("precursor system has a loop")]
    HasLoop,
    #[error("color {0} is not a permutation")]
    NotPermutation(usize),
    #[error("expected {expected} colors, got {actual}")]
    ColorCount { expected: usize, actual: usize },
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
}
