//! Exact combinatorics of Arthur packets: parameters of real unitary groups
//! and p-adic symplectic/orthogonal groups, the explicit correspondence
//! between them, orbit combinatorics on the parameter spaces, and a symbolic
//! translation-functor calculus. All arithmetic is exact; no floating point.

use thiserror::Error;

pub mod arith;
pub mod check;
pub mod coherent;
pub mod correspond;
pub mod orbits;
pub mod packets;
pub mod params;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("verification mismatch: {0}")]
    Mismatch(String),
}

impl From<Error> for String {
    fn from(e: Error) -> String {
        e.to_string()
    }
}

pub type Result<T> = std::result::Result<T, Error>;
