//! The GabKron encryption scheme: parameters, key material constructions,
//! KeyGen/Encrypt/Decrypt and the GKPC file format.

pub mod codec;
mod construct;
pub mod params;
mod scheme;

use thiserror::Error;

use crate::gabcodes::{CodeError, DecodeFailure};
use crate::ranklinalg::LinalgError;

pub use construct::{construct_p, construct_x, sample_rank_error, PMatrix, SubspaceSpec, XWitness};
pub use params::{lookup, registry, setup, setup_named, NamedSet, ParamError, ParamSet, RawParams, Variant};
pub use scheme::{
    decrypt, encrypt, encrypt_with_error, field_for, inner_support, keygen, keygen_with_witness, secret_code,
    KeyPair, KeyWitness, PublicKey, SecretKey,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("decryption failed: {0}")]
    Decrypt(#[from] DecodeFailure),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("retry budget exhausted while drawing {0}")]
    RetryExhausted(&'static str),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("structure check failed: {0}")]
    Structure(String),
    #[error("{what} has length {got}, expected {expected}")]
    Length { what: &'static str, got: usize, expected: usize },
    #[error("malformed file: {0}")]
    Malformed(String),
}
