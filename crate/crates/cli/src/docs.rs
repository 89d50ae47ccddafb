use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use ghom_core::af::{AfError, DimensionGroupElement, PathCylinder, PathTableau};
use ghom_core::sft::Word;

/// Reads and parses a JSON document, citing path, line and column on failure.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse { path: shown.clone(), message: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: format!("{shown}:{}:{}", e.line(), e.column()),
        message: e.to_string(),
    })
}

/// `{"words": [[symbols…],…]}` with 1-based symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClopenDocument {
    pub words: Vec<Vec<u32>>,
}

impl ClopenDocument {
    pub fn to_words(&self) -> Result<Vec<Word>, CliError> {
        self.words.iter().map(|w| Word::from_one_based(w).map_err(CliError::from)).collect()
    }
}

/// `{"paths": [[[vertex, edge],…],…]}` with 1-based entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSetDocument {
    pub paths: Vec<Vec<[u32; 2]>>,
}

impl PathSetDocument {
    pub fn to_paths(&self) -> Result<Vec<PathCylinder>, CliError> {
        self.paths.iter().map(|p| PathCylinder::from_document(p).map_err(CliError::from)).collect()
    }
}

type PathDocument = Vec<[u32; 2]>;

/// `{"pairs": [[p, q],…]}`: each `q·x ↦ p·x`, paths 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathTableauDocument {
    pub pairs: Vec<(PathDocument, PathDocument)>,
}

impl From<&PathTableau> for PathTableauDocument {
    fn from(t: &PathTableau) -> Self {
        PathTableauDocument { pairs: t.pairs.iter().map(|(p, q)| (p.to_document(), q.to_document())).collect() }
    }
}

/// `{"level": ℓ, "vector": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementDocument {
    pub level: usize,
    pub vector: Vec<i64>,
}

impl ElementDocument {
    pub fn to_element(&self) -> DimensionGroupElement {
        DimensionGroupElement::from_i64(self.level, &self.vector)
    }
}

/// Riesz instance `{"f": [f₁, f₂], "g": [g₁, g₂]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RieszDocument {
    pub f: [ElementDocument; 2],
    pub g: [ElementDocument; 2],
}

pub fn element_json(e: &DimensionGroupElement) -> serde_json::Value {
    serde_json::json!({ "level": e.level, "vector": crate::report::bigs(&e.vector) })
}

pub fn check_element(e: &DimensionGroupElement, b: &ghom_core::af::BratteliDiagram) -> Result<(), CliError> {
    e.check(b).map_err(|err: AfError| CliError::from(err))
}
