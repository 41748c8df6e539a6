//! Crate-wide error type. Everything fallible funnels into [`Error`] so the
//! CLI can map failures onto its exit-code contract in one place.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("path has {got} values but the grid has {want} steps")]
    LengthMismatch { got: usize, want: usize },

    #[error("alpha = {0} is outside (0, 2]")]
    InvalidAlpha(f64),

    #[error("mu0 = {0} is too close to zero; |mu0| must exceed 1/2")]
    InvalidMuZero(f64),

    #[error("sign sequence entry {value} at index {index} is not +1 or -1")]
    InvalidSign { index: usize, value: f64 },

    #[error("pauli index {0} is outside {{1, 2, 3}}")]
    InvalidPauliIndex(u8),

    #[error("pauli pair needs two distinct indices, got ({0}, {0})")]
    DegeneratePauliPair(u8),

    #[error("paths live on different grids: {0}")]
    GridMismatch(String),

    #[error("square-root recovery needs mu0")]
    MissingMuZero,

    #[error("path index {index} is out of range for an ensemble of {paths} paths")]
    PathIndexOutOfRange { index: u64, paths: u64 },

    #[error("invalid ensemble config: {0}")]
    InvalidConfig(String),
}
