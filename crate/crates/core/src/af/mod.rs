//! AF groupoids from Bratteli diagrams: the dimension group, clopen transport and
//! vanishing of higher homology.

mod diagram;
mod homology;
mod transport;

pub use diagram::{
    class_of_clopen, classes_equal, positivity_check, BratteliDiagram, Decision, DiagramDocument, DimensionGroupElement,
    LevelDocument, PathCylinder,
};
pub use homology::{af_h1_check, level_h1, AfH1Report, LevelH1};
pub use transport::{certified_le, path_tableau_apply, riesz_interpolate, transport_hopf2, PathTableau};

use crate::zmat::ZmatError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AfError {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("cylinders overlap at {0:?}")]
    Overlap(Vec<[u32; 2]>),
    #[error("path {0:?} straddles tableau cylinders")]
    NeedsRefinement(Vec<[u32; 2]>),
    #[error("classes differ (certified at level {level})")]
    ClassesDiffer { level: usize },
    #[error("undecided after {levels_examined} levels")]
    Undecided { levels_examined: usize },
    #[error("order relations not certified within budget")]
    PreconditionUncertified,
    #[error(transparent)]
    Zmat(#[from] ZmatError),
}
