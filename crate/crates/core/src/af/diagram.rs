use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::AfError;
use crate::zmat::{kernel_basis, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDocument {
    pub vertices: usize,
    #[serde(default)]
    pub incidence: Vec<Vec<u32>>,
}

/// `{"levels":[{"vertices":k,"incidence":[[…]]},…]}`. A square incidence on the last
/// level repeats forever; an empty one ends the diagram there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDocument {
    pub levels: Vec<LevelDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BratteliDiagram {
    vertices: Vec<usize>,
    incidence: Vec<Vec<Vec<u32>>>,
    stationary: bool,
}

impl BratteliDiagram {
    pub fn from_document(doc: &DiagramDocument) -> Result<Self, AfError> {
        let levels = &doc.levels;
        if levels.is_empty() || levels[0].vertices != 1 {
            return Err(AfError::InvalidDiagram("level 0 must have exactly one vertex".into()));
        }
        let vertices: Vec<usize> = levels.iter().map(|l| l.vertices).collect();
        if let Some(l) = vertices.iter().position(|&v| v == 0) {
            return Err(AfError::InvalidDiagram(format!("level {l} has no vertices")));
        }
        let last = levels.len() - 1;
        let mut incidence = Vec::new();
        for (l, lev) in levels.iter().enumerate() {
            if l == last && lev.incidence.is_empty() {
                break;
            }
            let cols = if l == last { lev.vertices } else { vertices[l + 1] };
            if lev.incidence.len() != lev.vertices || lev.incidence.iter().any(|r| r.len() != cols) {
                return Err(AfError::InvalidDiagram(format!("incidence at level {l} must be {}×{cols}", lev.vertices)));
            }
            if let Some(v) = lev.incidence.iter().position(|r| r.iter().all(|&x| x == 0)) {
                return Err(AfError::InvalidDiagram(format!("vertex {} at level {l} has no edges down", v + 1)));
            }
            if let Some(w) = (0..cols).find(|&w| lev.incidence.iter().all(|r| r[w] == 0)) {
                return Err(AfError::InvalidDiagram(format!("vertex {} below level {l} is unreachable", w + 1)));
            }
            incidence.push(lev.incidence.clone());
        }
        let stationary = incidence.len() == levels.len();
        Ok(BratteliDiagram { vertices, incidence, stationary })
    }

    pub fn to_document(&self) -> DiagramDocument {
        DiagramDocument {
            levels: self
                .vertices
                .iter()
                .enumerate()
                .map(|(l, &v)| LevelDocument { vertices: v, incidence: self.incidence.get(l).cloned().unwrap_or_default() })
                .collect(),
        }
    }

    /// `n`-adic UHF diagram: one vertex per level, `n` edges.
    pub fn uhf(n: u32) -> Self {
        BratteliDiagram { vertices: vec![1], incidence: vec![vec![vec![n]]], stationary: true }
    }

    /// Explicit levels with up to `max_vertices` vertices and multiplicities up to `max_mult`,
    /// then a stationary square tail.
    pub fn random<R: Rng>(rng: &mut R, explicit: usize, max_vertices: usize, max_mult: u32) -> Self {
        let mut vertices = vec![1];
        for _ in 0..explicit {
            vertices.push(rng.gen_range(1..=max_vertices));
        }
        let mut incidence = Vec::new();
        for l in 0..vertices.len() {
            let cols = if l + 1 < vertices.len() { vertices[l + 1] } else { vertices[l] };
            incidence.push(random_incidence(rng, vertices[l], cols, max_mult));
        }
        BratteliDiagram { vertices, incidence, stationary: true }
    }

    pub fn is_finite(&self) -> bool {
        !self.stationary
    }

    /// Last level, for diagrams that end.
    pub fn last_level(&self) -> Option<usize> {
        (!self.stationary).then(|| self.vertices.len() - 1)
    }

    /// First level from which the diagram repeats, for stationary diagrams.
    pub fn tail_start(&self) -> Option<usize> {
        self.stationary.then(|| self.vertices.len() - 1)
    }

    pub fn vertices(&self, level: usize) -> usize {
        self.vertices[level.min(self.vertices.len() - 1)]
    }

    /// Multiplicities from level `level` to `level + 1`.
    pub fn incidence(&self, level: usize) -> Option<&Vec<Vec<u32>>> {
        if self.stationary {
            Some(&self.incidence[level.min(self.incidence.len() - 1)])
        } else {
            self.incidence.get(level)
        }
    }

    pub fn has_level(&self, level: usize) -> bool {
        self.stationary || level < self.vertices.len()
    }

    pub fn edges(&self, level: usize, from: usize, to: usize) -> u32 {
        self.incidence(level).map_or(0, |m| m[from][to])
    }

    /// `M_ℓᵗ` as a map on vertex vectors.
    pub fn push_matrix(&self, level: usize) -> Option<IntMatrix> {
        let m = self.incidence(level)?;
        let rows: Vec<Vec<i64>> =
            (0..self.vertices(level + 1)).map(|w| (0..self.vertices(level)).map(|v| i64::from(m[v][w])).collect()).collect();
        Some(IntMatrix::from_rows(&rows).expect("rectangular"))
    }

    pub fn push(&self, level: usize, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let m = self.incidence(level)?;
        Some(
            (0..self.vertices(level + 1))
                .map(|w| v.iter().zip(m).filter(|(_, r)| r[w] != 0).map(|(x, r)| x * BigInt::from(r[w])).sum())
                .collect(),
        )
    }

    pub fn is_injective_at(&self, level: usize) -> bool {
        self.push_matrix(level).is_some_and(|m| kernel_basis(&m).is_empty())
    }

    /// Number of paths from the root to each vertex of `level`.
    pub fn path_counts(&self, level: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::from(1)];
        for l in 0..level {
            v = self.push(l, &v).expect("level exists");
        }
        v
    }
}

fn random_incidence<R: Rng>(rng: &mut R, rows: usize, cols: usize, max_mult: u32) -> Vec<Vec<u32>> {
    loop {
        let m: Vec<Vec<u32>> =
            (0..rows).map(|_| (0..cols).map(|_| if rng.gen_bool(0.6) { rng.gen_range(1..=max_mult) } else { 0 }).collect()).collect();
        let rows_ok = m.iter().all(|r| r.iter().any(|&x| x > 0));
        let cols_ok = (0..cols).all(|w| m.iter().any(|r| r[w] > 0));
        if rows_ok && cols_ok {
            return m;
        }
    }
}

/// Finite path from the root: one `(vertex, edge)` choice per level, both 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathCylinder(pub Vec<(u32, u32)>);

impl PathCylinder {
    pub fn root() -> Self {
        PathCylinder(Vec::new())
    }

    /// From `[[vertex, edge], …]` with 1-based entries.
    pub fn from_document(steps: &[[u32; 2]]) -> Result<Self, AfError> {
        steps
            .iter()
            .map(|[v, e]| {
                if *v == 0 || *e == 0 {
                    Err(AfError::InvalidPath("vertices and edges are numbered from 1".into()))
                } else {
                    Ok((v - 1, e - 1))
                }
            })
            .collect::<Result<_, _>>()
            .map(PathCylinder)
    }

    pub fn to_document(&self) -> Vec<[u32; 2]> {
        self.0.iter().map(|&(v, e)| [v + 1, e + 1]).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terminal(&self) -> usize {
        self.0.last().map_or(0, |s| s.0 as usize)
    }

    pub fn is_prefix_of(&self, other: &PathCylinder) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn concat(&self, tail: &[(u32, u32)]) -> PathCylinder {
        PathCylinder(self.0.iter().chain(tail).copied().collect())
    }

    pub fn validate(&self, b: &BratteliDiagram) -> Result<(), AfError> {
        let mut prev = 0usize;
        for (l, &(v, e)) in self.0.iter().enumerate() {
            if !b.has_level(l + 1) || v as usize >= b.vertices(l + 1) || e >= b.edges(l, prev, v as usize) {
                return Err(AfError::InvalidPath(format!("step {} of {:?} is not an edge", l + 1, self.to_document())));
            }
            prev = v as usize;
        }
        Ok(())
    }

    /// All extensions to `level`, in lexicographic order.
    pub fn refine(&self, b: &BratteliDiagram, level: usize) -> Vec<PathCylinder> {
        let mut out = vec![self.clone()];
        for l in self.len()..level {
            let mut next = Vec::new();
            for p in out {
                let from = p.terminal();
                for w in 0..b.vertices(l + 1) {
                    for e in 0..b.edges(l, from, w) {
                        next.push(p.concat(&[(w as u32, e)]));
                    }
                }
            }
            out = next;
        }
        out
    }
}

/// Element `(level, vector)` of the inductive limit of `ℤ^{V_ℓ}` under `M_ℓᵗ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionGroupElement {
    pub level: usize,
    pub vector: Vec<BigInt>,
}

impl DimensionGroupElement {
    pub fn new(level: usize, vector: Vec<BigInt>) -> Self {
        DimensionGroupElement { level, vector }
    }

    pub fn from_i64(level: usize, v: &[i64]) -> Self {
        DimensionGroupElement { level, vector: v.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn unit() -> Self {
        DimensionGroupElement::from_i64(0, &[1])
    }

    pub fn zero(b: &BratteliDiagram, level: usize) -> Self {
        DimensionGroupElement { level, vector: vec![BigInt::zero(); b.vertices(level)] }
    }

    pub fn check(&self, b: &BratteliDiagram) -> Result<(), AfError> {
        if !b.has_level(self.level) || self.vector.len() != b.vertices(self.level) {
            return Err(AfError::InvalidElement(format!("level {} needs {} coordinates", self.level, b.vertices(self.level))));
        }
        Ok(())
    }

    pub fn push_to(&self, b: &BratteliDiagram, level: usize) -> Result<Self, AfError> {
        self.check(b)?;
        let mut v = self.vector.clone();
        for l in self.level..level {
            v = b.push(l, &v).ok_or(AfError::InvalidElement(format!("diagram ends before level {level}")))?;
        }
        Ok(DimensionGroupElement { level: level.max(self.level), vector: v })
    }

    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.vector.iter().any(Signed::is_negative)
    }

    pub fn sub(&self, b: &BratteliDiagram, other: &Self) -> Result<Self, AfError> {
        let level = self.level.max(other.level);
        let (x, y) = (self.push_to(b, level)?, other.push_to(b, level)?);
        Ok(DimensionGroupElement { level, vector: x.vector.iter().zip(&y.vector).map(|(a, c)| a - c).collect() })
    }

    pub fn add(&self, b: &BratteliDiagram, other: &Self) -> Result<Self, AfError> {
        let level = self.level.max(other.level);
        let (x, y) = (self.push_to(b, level)?, other.push_to(b, level)?);
        Ok(DimensionGroupElement { level, vector: x.vector.iter().zip(&y.vector).map(|(a, c)| a + c).collect() })
    }

    pub fn scale(&self, k: i64) -> Self {
        DimensionGroupElement { level: self.level, vector: self.vector.iter().map(|x| x * k).collect() }
    }
}

/// Three-valued answer for inductive-limit questions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum Decision {
    /// Holds, witnessed at `level`.
    True { level: usize },
    /// Fails for every later level, certified at `level`.
    False { level: usize, certificate: String },
    Undecided { levels_examined: usize },
}

impl Decision {
    pub fn is_true(&self) -> bool {
        matches!(self, Decision::True { .. })
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Decision::False { .. })
    }
}

/// `[1_U]`: number of paths of `U` ending at each vertex of the deepest level in `U`.
pub fn class_of_clopen(b: &BratteliDiagram, u: &[PathCylinder]) -> Result<DimensionGroupElement, AfError> {
    let level = u.iter().map(PathCylinder::len).max().unwrap_or(0);
    let mut counts = vec![BigInt::zero(); b.vertices(level)];
    let mut seen = std::collections::BTreeSet::new();
    for p in u {
        p.validate(b)?;
        for q in p.refine(b, level) {
            counts[q.terminal()] += 1;
            if !seen.insert(q) {
                return Err(AfError::Overlap(p.to_document()));
            }
        }
    }
    Ok(DimensionGroupElement::new(level, counts))
}

/// Whether `(M_tailᵗ)^n` has the same kernel for all large `n`, reached after `V` steps.
fn stationary_nonvanishing(b: &BratteliDiagram, level: usize, d: &[BigInt]) -> bool {
    let mut v = d.to_vec();
    for l in level..level + b.vertices(level) {
        v = b.push(l, &v).expect("stationary");
    }
    v.iter().any(|x| !x.is_zero())
}

pub fn classes_equal(
    b: &BratteliDiagram,
    u: &DimensionGroupElement,
    v: &DimensionGroupElement,
    budget: usize,
) -> Result<Decision, AfError> {
    let mut d = u.sub(b, v)?;
    for step in 0..=budget {
        let level = d.level;
        if d.is_zero() {
            return Ok(Decision::True { level });
        }
        if b.last_level() == Some(level) {
            return Ok(Decision::False { level, certificate: "diagram ends with a nonzero difference".into() });
        }
        if let Some(t) = b.tail_start() {
            if level >= t && stationary_nonvanishing(b, level, &d.vector) {
                return Ok(Decision::False {
                    level,
                    certificate: format!("difference survives {} pushes through the stationary tail", b.vertices(level)),
                });
            }
            if (level..=t).all(|l| b.is_injective_at(l)) {
                return Ok(Decision::False { level, certificate: "all later connecting maps are injective".into() });
            }
        }
        if step == budget {
            break;
        }
        d = d.push_to(b, level + 1)?;
    }
    Ok(Decision::Undecided { levels_examined: budget + 1 })
}

/// Nonnegative eigenvectors `M y = λ y` (`λ > 0` an integer) of the stationary tail.
/// Pairing with `y` is preserved up to the factor `λ` by every push, so a negative
/// pairing rules out positivity for good.
fn tail_states(b: &BratteliDiagram) -> Vec<Vec<BigInt>> {
    let Some(t) = b.tail_start() else { return Vec::new() };
    let m = b.incidence(t).expect("tail");
    let n = m.len();
    let max_row: u32 = m.iter().map(|r| r.iter().sum::<u32>()).max().unwrap_or(0);
    let mut out = Vec::new();
    for lambda in 1..=i64::from(max_row) {
        let rows: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| i64::from(m[i][j]) - if i == j { lambda } else { 0 }).collect()).collect();
        let ker = kernel_basis(&IntMatrix::from_rows(&rows).expect("square"));
        if ker.len() != 1 {
            continue;
        }
        let y = &ker[0];
        if y.iter().all(|x| !x.is_negative()) {
            out.push(y.clone());
        } else if y.iter().all(|x| !x.is_positive()) {
            out.push(y.iter().map(|x| -x).collect());
        }
    }
    out
}

pub fn positivity_check(b: &BratteliDiagram, u: &DimensionGroupElement, budget: usize) -> Result<Decision, AfError> {
    let states = tail_states(b);
    let mut x = u.clone();
    x.check(b)?;
    for step in 0..=budget {
        let level = x.level;
        if x.is_nonnegative() {
            return Ok(Decision::True { level });
        }
        if b.last_level() == Some(level) {
            return Ok(Decision::False { level, certificate: "negative coordinate at the last level".into() });
        }
        if b.tail_start().is_some_and(|t| level >= t) {
            for y in &states {
                let pairing: BigInt = y.iter().zip(&x.vector).map(|(a, c)| a * c).sum();
                if pairing.is_negative() {
                    return Ok(Decision::False { level, certificate: format!("negative pairing with invariant state {y:?}") });
                }
            }
        }
        if step == budget {
            break;
        }
        x = x.push_to(b, level + 1)?;
    }
    Ok(Decision::Undecided { levels_examined: budget + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(steps: &[(u32, u32)]) -> PathCylinder {
        PathCylinder(steps.to_vec())
    }

    #[test]
    fn documents_round_trip() {
        let doc: DiagramDocument = serde_json::from_str(r#"{"levels":[{"vertices":1,"incidence":[[2]]}]}"#).unwrap();
        let b = BratteliDiagram::from_document(&doc).unwrap();
        assert_eq!(b, BratteliDiagram::uhf(2));
        assert_eq!(b.to_document(), doc);
        let bad = DiagramDocument { levels: vec![LevelDocument { vertices: 1, incidence: vec![vec![0]] }] };
        assert!(BratteliDiagram::from_document(&bad).is_err());
    }

    #[test]
    fn clopen_classes() {
        let b = BratteliDiagram::uhf(2);
        assert!(class_of_clopen(&b, &[]).unwrap().is_zero());
        assert_eq!(class_of_clopen(&b, &[p(&[(0, 0)])]).unwrap(), DimensionGroupElement::from_i64(1, &[1]));
        let both = class_of_clopen(&b, &[p(&[(0, 0)]), p(&[(0, 1)])]).unwrap();
        assert_eq!(both, DimensionGroupElement::unit().push_to(&b, 1).unwrap());
        assert!(class_of_clopen(&b, &[p(&[(0, 0)]), p(&[(0, 0), (0, 1)])]).is_err());
        let deep = class_of_clopen(&b, &p(&[(0, 0)]).refine(&b, 3)).unwrap();
        assert!(classes_equal(&b, &deep, &class_of_clopen(&b, &[p(&[(0, 0)])]).unwrap(), 4).unwrap().is_true());
    }

    #[test]
    fn equality_decisions() {
        let b = BratteliDiagram::uhf(2);
        let one = DimensionGroupElement::from_i64(1, &[1]);
        assert!(classes_equal(&b, &one, &one, 0).unwrap().is_true());
        assert!(classes_equal(&b, &one, &DimensionGroupElement::from_i64(1, &[2]), 3).unwrap().is_false());
        // two vertices merging into one kill (1, −1)
        let doc = DiagramDocument {
            levels: vec![
                LevelDocument { vertices: 1, incidence: vec![vec![1, 1]] },
                LevelDocument { vertices: 2, incidence: vec![vec![1], vec![1]] },
                LevelDocument { vertices: 1, incidence: vec![vec![2]] },
            ],
        };
        let m = BratteliDiagram::from_document(&doc).unwrap();
        let u = DimensionGroupElement::from_i64(1, &[1, 0]);
        let v = DimensionGroupElement::from_i64(1, &[0, 1]);
        assert_eq!(classes_equal(&m, &u, &v, 3).unwrap(), Decision::True { level: 2 });
        assert!(matches!(classes_equal(&m, &u, &v, 0).unwrap(), Decision::Undecided { .. }));
    }

    #[test]
    fn positivity_decisions() {
        let b = BratteliDiagram::uhf(2);
        assert!(positivity_check(&b, &DimensionGroupElement::unit(), 0).unwrap().is_true());
        assert!(positivity_check(&b, &DimensionGroupElement::from_i64(2, &[0]), 0).unwrap().is_true());
        assert!(positivity_check(&b, &DimensionGroupElement::from_i64(1, &[-1]), 5).unwrap().is_false());
        // golden-mean tail: (1, −1) becomes positive after pushes
        let doc = DiagramDocument {
            levels: vec![
                LevelDocument { vertices: 1, incidence: vec![vec![1, 1]] },
                LevelDocument { vertices: 2, incidence: vec![vec![1, 1], vec![1, 0]] },
            ],
        };
        let g = BratteliDiagram::from_document(&doc).unwrap();
        let x = DimensionGroupElement::from_i64(1, &[2, -1]);
        assert!(positivity_check(&g, &x, 4).unwrap().is_true());
    }
}
