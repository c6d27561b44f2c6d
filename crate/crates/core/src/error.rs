//! Crate-wide error type.

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("position {pos} out of range 1..={n}")]
    PositionOutOfRange { pos: usize, n: usize },
    #[error("shift index {index} out of range for length {n}")]
    ShiftOutOfRange { index: usize, n: usize },
    #[error("index set must be strictly increasing and within 1..={n}")]
    BadIndexSet { n: usize },
    #[error("map is not a permutation of 1..={n}")]
    BadPermutation { n: usize },
    #[error("noise rate {value} outside [0, 1/2]")]
    NoiseRateOutOfRange { value: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("dimension {required} exceeds cap {cap}")]
    DimensionCap { required: u128, cap: u128 },
    #[error("state norm drifted to {norm_sqr} (squared)")]
    NormDrift { norm_sqr: f64 },
    #[error("projection outcome has vanishing probability")]
    VanishingOutcome,
    #[error("conditioning event has probability zero")]
    EmptyConditioningEvent,
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
    #[error("{m} bits exceeds the {cap}-bit cap")]
    SizeCap { m: u32, cap: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
