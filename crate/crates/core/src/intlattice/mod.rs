//! Integer and rational lattice algebra.

pub mod lattice;
pub mod matrix;
pub mod normal;

pub use lattice::{
    primitive_integer_vector, quotient_invariants, rational_nullspace, rational_rank, QLattice, QuotientInvariants,
};
pub use matrix::IntMatrix;
pub use normal::{hnf, snf, solve_in_hnf, HnfResult, SnfResult};

use num_bigint::BigInt;
use serde::Serializer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("E is not contained in I")]
    NotSublattice,
}

pub(crate) fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}
