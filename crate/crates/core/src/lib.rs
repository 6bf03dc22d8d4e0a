//! Secant varieties of Segre-Veronese varieties `P^m × P^n` embedded by `O(1, d)`:
//! exact rank certificates over a prime field, the splitting-theorem prover and
//! the parameter scanner.

pub mod abundance;
pub mod error;
pub mod field_linalg;
pub mod prover;
pub mod scan;
pub mod segre_veronese;
pub mod strassen;
pub mod terracini;

pub use abundance::{AbundanceClass, Statement};
pub use error::{Error, Result};
pub use field_linalg::{DenseMatrix, Fe, PrimeField};
