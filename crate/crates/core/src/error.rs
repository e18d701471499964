use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: need m > n >= 1, got n = {n}, m = {m}")]
    InvalidDimensions { n: usize, m: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vector of length {len} is not a bijection of 1..={len}")]
    NotAPermutation { len: usize },

    #[error("ground-truth vector has zero norm; relative error undefined")]
    ZeroGroundTruth,

    #[error("generated matrix failed the column-rank check {attempts} times")]
    RankCheckFailed { attempts: usize },

    #[error("system size {count} exceeds the number of measurements m = {m}")]
    CountExceedsMeasurements { count: usize, m: usize },

    #[error("constraint of half-degree {d} exceeds relaxation order t = {t}")]
    OrderTooSmall { d: usize, t: usize },

    #[error("moment sequence has length {got}, structure expects {expected}")]
    SequenceLengthMismatch { expected: usize, got: usize },

    #[error("matrix contains non-finite entries")]
    NonFiniteMatrix,

    #[error("matrix is rank deficient; least squares needs full column rank")]
    RankDeficient,

    #[error("leading eigenvector entry is numerically zero; cannot normalize")]
    LeadingEntryDegenerate,

    #[error("m = {m} exceeds the enumeration cap max_m = {max_m}")]
    TooManyPermutations { m: usize, max_m: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed instance file: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
