//! Gabidulin codes, their decoder, and Kronecker product codes built on them.

mod gabidulin;
mod kronecker;
mod linearized;

use thiserror::Error;

use crate::ranklinalg::LinalgError;

pub use gabidulin::{gab_decode, gab_encode, gab_new, GabidulinCode};
pub use kronecker::{kron_block_decode, kron_product, subcode_membership, KroneckerCode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("evaluation vector has rank weight {rank}, needs {needed}")]
    DeficientEvaluationPoints { rank: usize, needed: usize },
    #[error("invalid code dimensions: {0}")]
    Dimensions(String),
    #[error("G1 has rank {rank}, needs {needed}")]
    RankDeficientG1 { rank: usize, needed: usize },
    #[error("expanded G1 has rank {rank}, expected {expected}")]
    ExpandedRank { rank: usize, expected: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeFailure {
    #[error("received word has length {got}, code length is {expected}")]
    Length { got: usize, expected: usize },
    #[error("no interpolating pair found")]
    NoInterpolant,
    #[error("interpolant does not divide")]
    InexactDivision,
    #[error("residual error has rank {rank}, radius is {radius}")]
    BeyondRadius { rank: usize, radius: usize },
    #[error("no information set among decoded blocks (failed blocks: {failed_blocks:?})")]
    NoInformationSet { failed_blocks: Vec<usize> },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
