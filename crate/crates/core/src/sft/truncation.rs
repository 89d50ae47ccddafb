use std::collections::HashMap;

use super::system::{SftSystem, Symbol, Word};
use super::SftError;
use crate::zmat::sparse::{normalize, SparseVec};
use crate::zmat::IntMatrix;

/// Words indexed by position.
#[derive(Clone, Debug, Default)]
pub struct WordTable {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl WordTable {
    pub fn new(words: Vec<Word>) -> Self {
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        WordTable { words, index }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }
}

/// Truncation window: `|ν| = k`, lags in `[−m, m]`, unit-space words of length `k + m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Window {
    pub k: usize,
    pub m: usize,
}

impl Window {
    pub fn new(k: usize, m: usize) -> Result<Self, SftError> {
        if m < 1 || k < m + 1 {
            return Err(SftError::InfeasibleBounds { k, m });
        }
        Ok(Window { k, m })
    }

    /// Window used at a given unit-space depth `d ≥ 3`: lag bound grows every other step.
    pub fn for_depth(d: usize) -> Result<Self, SftError> {
        if d < 3 {
            return Err(SftError::InfeasibleBounds { k: d, m: 0 });
        }
        let m = (d - 1) / 2;
        Window::new(d - m, m)
    }

    pub fn depth(&self) -> usize {
        self.k + self.m
    }

    pub fn contains_lag(&self, len: usize) -> bool {
        len + self.m >= self.k && len <= self.k + self.m
    }
}

pub(crate) fn add_to(v: &mut SparseVec<i64>, i: usize, c: i64) {
    v.push((i, c));
}

/// `1_[w]` written at unit-space depth `depth`.
pub(crate) fn cylinder(sys: &SftSystem, c0: &WordTable, w: &Word, depth: usize, coeff: i64, out: &mut SparseVec<i64>) {
    for t in sys.extensions(w.last(), depth - w.len()) {
        let idx = c0.get(&w.concat(&t)).expect("extension lies in the depth table");
        add_to(out, idx, coeff);
    }
}

pub(crate) fn base_words(sys: &SftSystem, len: usize) -> Result<Vec<Word>, SftError> {
    sys.symbols()
        .map(|a| sys.least_word_ending(a, len).ok_or(SftError::InfeasibleBounds { k: len, m: 0 }))
        .collect()
}

/// Finite piece of the groupoid chain complex `C_c(G⁽²⁾) → C_c(G⁽¹⁾) → C_c(G⁽⁰⁾)`.
///
/// * `C⁰`: cylinders `[w]`, `|w| = k + m`.
/// * `C¹`: bisections `Z(μ,ν)` with `|ν| = k`, `|μ| ∈ [k−m, k+m]`, equal terminal symbols.
/// * `C²`: composable pairs `Z(x,y) × Z(y,β)` where `β` is the fixed length-`k` base
///   word for the common terminal symbol, `|y| ∈ [k−m, k]` and `|x| − |y| ∈ [−m, m]`.
///
/// Any triangle `(x,y,z)` has the same boundary as
/// `(y,z,β) − (x,z,β) + (x,y,β)`, so these cone triangles already span the boundaries.
#[derive(Clone, Debug)]
pub struct ChainTruncation {
    pub window: Window,
    pub c0: WordTable,
    pub c1: Vec<(Word, Word)>,
    pub c2: Vec<(Word, Word, Symbol)>,
    c1_index: HashMap<(Word, Word), usize>,
    c2_index: HashMap<(Word, Word, Symbol), usize>,
    pub beta: Vec<Word>,
    pub delta1: Vec<SparseVec<i64>>,
    pub delta2: Vec<SparseVec<i64>>,
}

impl ChainTruncation {
    pub fn new(sys: &SftSystem, window: Window) -> Result<Self, SftError> {
        let Window { k, m } = window;
        let depth = window.depth();
        let c0 = WordTable::new(sys.words(depth));
        let beta = base_words(sys, k)?;

        let mut by_last: Vec<Vec<Word>> = vec![Vec::new(); sys.n()];
        for len in (k - m)..=(k + m) {
            for w in sys.words(len) {
                by_last[usize::from(w.last())].push(w);
            }
        }
        let mut c1 = Vec::new();
        for nu in sys.words(k) {
            for mu in &by_last[usize::from(nu.last())] {
                c1.push((mu.clone(), nu.clone()));
            }
        }
        let c1_index: HashMap<(Word, Word), usize> = c1.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

        let mut c2 = Vec::new();
        for a in sys.symbols() {
            let ending = &by_last[usize::from(a)];
            for y in ending.iter().filter(|y| y.len() <= k) {
                for x in ending.iter().filter(|x| x.len() + m >= y.len() && x.len() <= y.len() + m) {
                    c2.push((x.clone(), y.clone(), a));
                }
            }
        }
        let c2_index = c2.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();

        let mut tr = ChainTruncation {
            window,
            c0,
            c1,
            c2,
            c1_index,
            c2_index,
            beta,
            delta1: Vec::new(),
            delta2: Vec::new(),
        };
        tr.delta1 = (0..tr.c1.len())
            .map(|i| {
                let (mu, nu) = &tr.c1[i];
                let mut v = Vec::new();
                cylinder(sys, &tr.c0, nu, depth, 1, &mut v);
                cylinder(sys, &tr.c0, mu, depth, -1, &mut v);
                normalize(v)
            })
            .collect::<Result<_, _>>()?;
        tr.delta2 = (0..tr.c2.len())
            .map(|i| {
                let (x, y, a) = tr.c2[i].clone();
                let b = tr.beta[usize::from(a)].clone();
                let mut v = Vec::new();
                tr.pair_into(sys, &y, &b, 1, &mut v)?;
                tr.pair_into(sys, &x, &b, -1, &mut v)?;
                tr.pair_into(sys, &x, &y, 1, &mut v)?;
                Ok(normalize(v)?)
            })
            .collect::<Result<_, SftError>>()?;
        tr.verify_boundary_identity()?;
        Ok(tr)
    }

    pub fn depth(&self) -> usize {
        self.window.depth()
    }

    pub fn c1_position(&self, mu: &Word, nu: &Word) -> Option<usize> {
        self.c1_index.get(&(mu.clone(), nu.clone())).copied()
    }

    pub fn c2_position(&self, x: &Word, y: &Word, a: Symbol) -> Option<usize> {
        self.c2_index.get(&(x.clone(), y.clone(), a)).copied()
    }

    /// `1_{Z(μ,ν)}` in the `C¹` basis, for `|ν| ≤ k` and lag within the window.
    pub fn pair_into(&self, sys: &SftSystem, mu: &Word, nu: &Word, coeff: i64, out: &mut SparseVec<i64>) -> Result<(), SftError> {
        if nu.len() > self.window.k || mu.last() != nu.last() {
            return Err(SftError::OutsideWindow { mu: mu.clone(), nu: nu.clone() });
        }
        for t in sys.extensions(nu.last(), self.window.k - nu.len()) {
            let idx = self
                .c1_position(&mu.concat(&t), &nu.concat(&t))
                .ok_or_else(|| SftError::OutsideWindow { mu: mu.clone(), nu: nu.clone() })?;
            add_to(out, idx, coeff);
        }
        Ok(())
    }

    /// Checks `δ₁ ∘ δ₂ = 0` column by column in exact arithmetic.
    pub fn verify_boundary_identity(&self) -> Result<(), SftError> {
        for (j, col) in self.delta2.iter().enumerate() {
            let mut acc = Vec::new();
            for (i, c) in col {
                for (r, d) in &self.delta1[*i] {
                    acc.push((*r, c * d));
                }
            }
            if !normalize(acc)?.is_empty() {
                return Err(SftError::BoundaryIdentity { column: j });
            }
        }
        Ok(())
    }

    pub fn delta1_matrix(&self) -> IntMatrix {
        dense(self.c0.len(), &self.delta1)
    }

    pub fn delta2_matrix(&self) -> IntMatrix {
        dense(self.c1.len(), &self.delta2)
    }

    /// Image of `C⁰` basis element `i` in the next truncation (one symbol deeper).
    pub fn refine0(&self, sys: &SftSystem, next: &ChainTruncation, i: usize) -> SparseVec<i64> {
        let w = self.c0.word(i);
        let mut v = Vec::new();
        cylinder(sys, &next.c0, w, next.depth(), 1, &mut v);
        normalize(v).expect("small coefficients")
    }

    /// Image of `C¹` basis element `i` in the next truncation.
    pub fn refine1(&self, sys: &SftSystem, next: &ChainTruncation, i: usize) -> Result<SparseVec<i64>, SftError> {
        let (mu, nu) = &self.c1[i];
        let mut v = Vec::new();
        next.pair_into(sys, mu, nu, 1, &mut v)?;
        Ok(normalize(v)?)
    }

    /// Image of `C²` basis element `i` in the next truncation. When `k` grows the base
    /// word changes, and the refined triangle is rewritten through the new cone.
    pub fn refine2(&self, sys: &SftSystem, next: &ChainTruncation, i: usize) -> Result<SparseVec<i64>, SftError> {
        let (x, y, a) = &self.c2[i];
        let missing = || SftError::OutsideWindow { mu: x.clone(), nu: y.clone() };
        let mut v = Vec::new();
        if next.window.k == self.window.k {
            v.push((next.c2_position(x, y, *a).ok_or_else(missing)?, 1));
            return Ok(v);
        }
        let beta = &self.beta[usize::from(*a)];
        for &b in sys.successors(*a) {
            let (xb, yb, zb) = (x.push(b), y.push(b), beta.push(b));
            for (p, q, c) in [(&yb, &zb, 1), (&xb, &zb, -1), (&xb, &yb, 1)] {
                v.push((next.c2_position(p, q, b).ok_or_else(missing)?, c));
            }
        }
        Ok(normalize(v)?)
    }

    /// Checks that refinement into `next` commutes with both boundaries on every basis element.
    pub fn verify_refinement(&self, sys: &SftSystem, next: &ChainTruncation) -> Result<(), SftError> {
        let apply = |cols: &[SparseVec<i64>], v: &SparseVec<i64>| -> Result<SparseVec<i64>, SftError> {
            let mut acc = Vec::new();
            for (i, c) in v {
                acc.extend(cols[*i].iter().map(|(r, d)| (*r, c * d)));
            }
            Ok(normalize(acc)?)
        };
        let r0: Vec<SparseVec<i64>> = (0..self.c0.len()).map(|i| self.refine0(sys, next, i)).collect();
        let r1: Vec<SparseVec<i64>> = (0..self.c1.len()).map(|i| self.refine1(sys, next, i)).collect::<Result<_, _>>()?;
        for i in 0..self.c1.len() {
            if apply(&next.delta1, &r1[i])? != apply(&r0, &self.delta1[i])? {
                return Err(SftError::RefinementMismatch { degree: 1, element: i });
            }
        }
        for i in 0..self.c2.len() {
            let r2 = self.refine2(sys, next, i)?;
            if apply(&next.delta2, &r2)? != apply(&r1, &self.delta2[i])? {
                return Err(SftError::RefinementMismatch { degree: 2, element: i });
            }
        }
        Ok(())
    }
}

fn dense(rows: usize, cols: &[SparseVec<i64>]) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            m.set(*i, j, (*c).into());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_space_counts() {
        let t = ChainTruncation::new(&SftSystem::full_shift(2), Window::new(2, 1).unwrap()).unwrap();
        assert_eq!(t.c0.len(), 8);
        let t = ChainTruncation::new(&SftSystem::golden_mean(), Window::new(2, 1).unwrap()).unwrap();
        assert_eq!(t.c0.len(), 5);
        assert!(Window::new(1, 1).is_err());
    }

    #[test]
    fn dense_boundaries_compose_to_zero() {
        let s = SftSystem::designated();
        let t = ChainTruncation::new(&s, Window::new(2, 1).unwrap()).unwrap();
        let prod = &t.delta1_matrix() * &t.delta2_matrix();
        assert!(prod.is_zero());
    }

    #[test]
    fn schedule() {
        let w: Vec<(usize, usize)> = (3..=8).map(|d| Window::for_depth(d).unwrap()).map(|w| (w.k, w.m)).collect();
        assert_eq!(w, vec![(2, 1), (3, 1), (3, 2), (4, 2), (4, 3), (5, 3)]);
    }

    #[test]
    fn refinement_commutes() {
        for s in [SftSystem::full_shift(2), SftSystem::golden_mean(), SftSystem::designated()] {
            let levels: Vec<ChainTruncation> =
                (3..=5).map(|d| ChainTruncation::new(&s, Window::for_depth(d).unwrap()).unwrap()).collect();
            for pair in levels.windows(2) {
                pair[0].verify_refinement(&s, &pair[1]).unwrap();
            }
        }
    }
}
