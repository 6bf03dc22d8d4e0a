//! Exact arithmetic over a word-sized prime field.
//!
//! Every rank, determinant and Pfaffian in the crate is computed here. Matrices
//! are plain row-major grids of [`Fe`]; the [`PrimeField`] they live in is passed
//! explicitly to each operation.

mod field;
mod matrix;
mod pfaffian;
mod rng;

pub use field::{Fe, PrimeField};
pub use matrix::{DenseMatrix, EchelonBasis};
pub use rng::{stream_seed, SeededRng, COEFF_BOUND};
