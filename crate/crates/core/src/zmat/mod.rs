//! Exact integer linear algebra.

mod directed;
mod matrix;
mod presentation;
mod quotient;
mod snf;
pub mod sparse;

use thiserror::Error;

pub use directed::{colimit_stabilize, induced_matrix, is_isomorphism, DirectedGroupSystem};
pub use matrix::IntMatrix;
pub use presentation::{cokernel_presentation, AbelianGroupPresentation, BasisWitness, SparseRow};
pub use quotient::{narrow, sparse_cokernel, widen, CycleQuotient, SparseQuotient};
pub use snf::{kernel_basis, smith_normal_form, solve_integer, solve_with, SmithDecomposition};


#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZmatError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid invariant factors: {0}")]
    InvalidInvariants(String),
    #[error("no window of {window} isomorphisms within {stages} stages")]
    Unstabilized { stages: usize, window: usize },
    #[error("machine integer overflow")]
    Overflow,
    #[error("vector is not a cycle")]
    NotACycle,
}
