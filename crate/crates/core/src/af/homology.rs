use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::diagram::{BratteliDiagram, PathCylinder};
use super::AfError;
use crate::zmat::CycleQuotient;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelH1 {
    pub level: usize,
    pub units: usize,
    pub arrows: usize,
    pub triangles: usize,
    pub h1_trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AfH1Report {
    pub levels: Vec<LevelH1>,
}

impl AfH1Report {
    pub fn all_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.h1_trivial)
    }
}

/// `H₁` of the level-`ℓ` elementary subgroupoid, the equivalence relation "same
/// terminal vertex" on paths of length `ℓ`. Triangles are restricted to those through
/// the least path at each vertex; their boundaries span all others.
pub fn level_h1(b: &BratteliDiagram, level: usize) -> Result<LevelH1, AfError> {
    let paths = PathCylinder::root().refine(b, level);
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); b.vertices(level)];
    for (i, p) in paths.iter().enumerate() {
        by_vertex[p.terminal()].push(i);
    }
    let mut arrows: Vec<(usize, usize)> = Vec::new();
    for group in &by_vertex {
        for &r in group {
            for &s in group {
                arrows.push((r, s));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut triangles = Vec::new();
    for group in by_vertex.iter().filter(|g| !g.is_empty()) {
        let base = group[0];
        for &x in group {
            for &y in group {
                // (x,y)∘(y,base) composable; boundary (y,base) − (x,base) + (x,y)
                triangles.push(vec![(index[&(y, base)], 1i64), (index[&(x, base)], -1), (index[&(x, y)], 1)]);
            }
        }
    }
    let rels: Vec<Vec<(usize, i64)>> =
        triangles.iter().map(|t| crate::zmat::sparse::normalize(t.clone())).collect::<Result<_, _>>()?;
    let boundary = |i: usize| -> Vec<(usize, i64)> {
        let (r, s) = arrows[i];
        crate::zmat::sparse::normalize(vec![(s, 1), (r, -1)]).expect("small")
    };
    let q = CycleQuotient::new(arrows.len(), paths.len(), rels, boundary, &|_| 0)?;
    Ok(LevelH1 {
        level,
        units: paths.len(),
        arrows: arrows.len(),
        triangles: triangles.len(),
        h1_trivial: q.group().is_trivial(),
    })
}

pub fn af_h1_check(b: &BratteliDiagram, max_level: usize) -> Result<AfH1Report, AfError> {
    let levels = (0..=max_level).filter(|&l| b.has_level(l)).map(|l| level_h1(b, l)).collect::<Result<_, _>>()?;
    Ok(AfH1Report { levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uhf_levels_vanish() {
        let r = af_h1_check(&BratteliDiagram::uhf(2), 4).unwrap();
        assert_eq!(r.levels.len(), 5);
        assert!(r.all_trivial());
        assert_eq!(r.levels[4].units, 16);
        assert_eq!(r.levels[4].arrows, 256);
    }
}
