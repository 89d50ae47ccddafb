//! Shifts of finite type: words, cylinder sets, tableaux and groupoid homology.

mod system;
mod tableau;
mod homology;
mod reduced;
mod search;
mod truncation;

pub use system::{canonical_clopen, refine_clopen, MatrixDocument, SftSystem, Symbol, Word};
pub use tableau::{CylinderBisection, Side, Tableau, TableauDocument, TableauViolation};
pub use homology::{index_of, truncated_homology, HomologyTower, StableHomology, FIRST_DEPTH, STABILITY_WINDOW};
pub use reduced::ReducedLevel;
pub use search::{find_with_index, prefix_codes, random_code, random_system, random_tableau, SearchBounds};
pub use truncation::{ChainTruncation, Window, WordTable};

use crate::zmat::ZmatError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SftError {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("word {0} is not admissible")]
    InadmissibleWord(Word),
    #[error("invalid tableau: {0}")]
    InvalidTableau(TableauViolation),
    #[error("infeasible truncation bounds k = {k}, m = {m}")]
    InfeasibleBounds { k: usize, m: usize },
    #[error("bisection ({mu}, {nu}) does not fit the truncation window")]
    OutsideWindow { mu: Word, nu: Word },
    #[error("boundary identity fails on column {column}")]
    BoundaryIdentity { column: usize },
    #[error("refinement does not commute with the degree-{degree} boundary at element {element}")]
    RefinementMismatch { degree: u32, element: usize },
    #[error("homology in degree {0} is not computed")]
    UnsupportedDegree(u32),
    #[error("tower did not stabilize by depth {max_depth}")]
    Unstabilized { max_depth: usize },
    #[error("no tableau with the requested index among {examined} candidates")]
    NotFound { examined: usize },
    #[error("budget of {budget} exhausted")]
    ExceedsBudget { budget: usize },
    #[error(transparent)]
    Zmat(#[from] ZmatError),
}
