use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::SftError;
use crate::zmat::{cokernel_presentation, kernel_basis, AbelianGroupPresentation, IntMatrix};

pub type Symbol = u8;

/// Finite admissible word. Symbols are stored 0-based and printed 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    /// Builds a word from 1-based symbols as they appear in documents.
    pub fn from_one_based(symbols: &[u32]) -> Result<Self, SftError> {
        symbols
            .iter()
            .map(|&s| {
                s.checked_sub(1)
                    .and_then(|v| Symbol::try_from(v).ok())
                    .ok_or_else(|| SftError::InvalidWord(format!("symbol {s} out of range")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn to_one_based(&self) -> Vec<u32> {
        self.0.iter().map(|&s| u32::from(s) + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Symbol {
        *self.0.last().expect("words are nonempty")
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn concat(&self, tail: &[Symbol]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(tail);
        Word(v)
    }

    pub fn push(&self, s: Symbol) -> Word {
        self.concat(&[s])
    }

    pub fn drop_last(&self) -> Word {
        Word(self.0[..self.0.len() - 1].to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.to_one_based().iter().map(ToString::to_string).collect();
        write!(f, "[{}]", s.join(" "))
    }
}

/// Matrix document `{"n": 3, "rows": [[1,1,0],…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub rows: Vec<Vec<u8>>,
}

/// One-sided vertex shift given by a 0-1 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SftSystem {
    n: usize,
    adj: Vec<Vec<bool>>,
    successors: Vec<Vec<Symbol>>,
    irreducible: bool,
}

impl SftSystem {
    pub fn new(rows: &[Vec<u8>]) -> Result<Self, SftError> {
        let n = rows.len();
        if n == 0 || n > usize::from(Symbol::MAX) {
            return Err(SftError::InvalidMatrix(format!("alphabet size {n} unsupported")));
        }
        let mut adj = vec![vec![false; n]; n];
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(SftError::InvalidMatrix(format!("row {} has length {}, expected {n}", i + 1, r.len())));
            }
            for (j, &v) in r.iter().enumerate() {
                adj[i][j] = match v {
                    0 => false,
                    1 => true,
                    _ => return Err(SftError::InvalidMatrix(format!("entry ({},{}) is {v}, not 0 or 1", i + 1, j + 1))),
                };
            }
        }
        for i in 0..n {
            if !adj[i].iter().any(|&b| b) {
                return Err(SftError::InvalidMatrix(format!("row {} is zero", i + 1)));
            }
            if !(0..n).any(|r| adj[r][i]) {
                return Err(SftError::InvalidMatrix(format!("column {} is zero", i + 1)));
            }
        }
        let successors =
            adj.iter().map(|r| (0..n).filter(|&j| r[j]).map(|j| j as Symbol).collect()).collect();
        let irreducible = strongly_connected(&adj);
        Ok(SftSystem { n, adj, successors, irreducible })
    }

    pub fn from_document(doc: &MatrixDocument) -> Result<Self, SftError> {
        if doc.rows.len() != doc.n {
            return Err(SftError::InvalidMatrix(format!("n = {} but {} rows given", doc.n, doc.rows.len())));
        }
        Self::new(&doc.rows)
    }

    pub fn to_document(&self) -> MatrixDocument {
        MatrixDocument { n: self.n, rows: self.adj.iter().map(|r| r.iter().map(|&b| u8::from(b)).collect()).collect() }
    }

    pub fn full_shift(n: usize) -> Self {
        Self::new(&vec![vec![1; n]; n]).expect("full shift is valid")
    }

    pub fn golden_mean() -> Self {
        Self::new(&[vec![1, 1], vec![1, 0]]).expect("valid")
    }

    /// The 3×3 example `[[1,1,0],[1,1,1],[0,1,1]]`, with H₀ ≅ H₁ ≅ ℤ.
    pub fn designated() -> Self {
        Self::new(&[vec![1, 1, 0], vec![1, 1, 1], vec![0, 1, 1]]).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn allowed(&self, a: Symbol, b: Symbol) -> bool {
        self.adj[usize::from(a)][usize::from(b)]
    }

    pub fn successors(&self, a: Symbol) -> &[Symbol] {
        &self.successors[usize::from(a)]
    }

    /// Whether `a` and `b` admit the same successors, so `[μ]` and `[ν]` with these
    /// terminal symbols carry the same tails.
    pub fn same_follower(&self, a: Symbol, b: Symbol) -> bool {
        a == b || self.successors(a) == self.successors(b)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.n).map(|s| s as Symbol)
    }

    pub fn is_admissible(&self, w: &Word) -> bool {
        !w.is_empty()
            && w.0.iter().all(|&s| usize::from(s) < self.n)
            && w.0.windows(2).all(|p| self.allowed(p[0], p[1]))
    }

    pub fn check_word(&self, w: &Word) -> Result<(), SftError> {
        if self.is_admissible(w) {
            Ok(())
        } else {
            Err(SftError::InadmissibleWord(w.clone()))
        }
    }

    pub fn matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self.adj.iter().map(|r| r.iter().map(|&b| i64::from(b)).collect()).collect();
        IntMatrix::from_rows(&rows).expect("square")
    }

    /// `I − Aᵗ`.
    pub fn i_minus_at(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let v = i64::from(i == j) - i64::from(self.adj[j][i]);
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    /// All admissible continuations of length `len` after `a` (not including `a`).
    pub fn extensions(&self, a: Symbol, len: usize) -> Vec<Vec<Symbol>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::new();
            for t in out {
                let last = t.last().copied().unwrap_or(a);
                for &b in self.successors(last) {
                    let mut u = t.clone();
                    u.push(b);
                    next.push(u);
                }
            }
            out = next;
        }
        out
    }

    /// All admissible words of length `len`, in lexicographic order.
    pub fn words(&self, len: usize) -> Vec<Word> {
        if len == 0 {
            return Vec::new();
        }
        let mut out: Vec<Word> = self.symbols().map(|s| Word(vec![s])).collect();
        for _ in 1..len {
            out = out.iter().flat_map(|w| self.successors(w.last()).iter().map(move |&b| w.push(b))).collect();
        }
        out
    }

    /// Lexicographically least admissible word of length `len` ending in `a`.
    pub fn least_word_ending(&self, a: Symbol, len: usize) -> Option<Word> {
        // backward reachability: can[j][s] = some admissible word of length j+1 ends in a and starts with s
        let mut can = vec![vec![false; self.n]; len];
        if len == 0 {
            return None;
        }
        can[0][usize::from(a)] = true;
        for j in 1..len {
            for s in 0..self.n {
                can[j][s] = self.successors[s].iter().any(|&b| can[j - 1][usize::from(b)]);
            }
        }
        let mut w = Vec::with_capacity(len);
        let mut prev: Option<Symbol> = None;
        for j in (0..len).rev() {
            let pick = (0..self.n)
                .map(|s| s as Symbol)
                .find(|&s| can[j][usize::from(s)] && prev.is_none_or(|p| self.allowed(p, s)))?;
            w.push(pick);
            prev = Some(pick);
        }
        Some(Word(w))
    }

    /// Number of admissible words of each length `1..=len`.
    pub fn word_count(&self, len: usize) -> usize {
        let mut counts = vec![1usize; self.n];
        for _ in 1..len {
            counts = (0..self.n).map(|s| self.successors[s].iter().map(|&b| counts[usize::from(b)]).sum()).collect();
        }
        if len == 0 {
            0
        } else {
            counts.iter().sum()
        }
    }

    pub fn h0_group(&self) -> AbelianGroupPresentation {
        cokernel_presentation(&self.i_minus_at())
    }

    pub fn h1_group(&self) -> AbelianGroupPresentation {
        AbelianGroupPresentation::free(kernel_basis(&self.i_minus_at()).len())
    }

    /// Class of `1_U` in `coker(I − Aᵗ)`: each cylinder `[w]` contributes `e_{last(w)}`.
    pub fn h0_class(&self, clopen: &[Word]) -> Result<Vec<BigInt>, SftError> {
        let mut v = vec![BigInt::from(0); self.n];
        for w in clopen {
            self.check_word(w)?;
            v[usize::from(w.last())] += 1;
        }
        Ok(self.h0_group().reduce_element(&v)?)
    }
}

fn strongly_connected(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..n {
                let edge = if forward { adj[v][u] } else { adj[u][v] };
                if edge && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.iter().all(|&b| b)
    };
    reach(true) && reach(false)
}

/// Prefix-free form of a clopen set given as a union of cylinders.
///
/// Words with a proper prefix in the set are absorbed; the result is sorted.
/// Cylinders are never merged into coarser ones.
pub fn canonical_clopen(sys: &SftSystem, words: &[Word]) -> Result<Vec<Word>, SftError> {
    for w in words {
        sys.check_word(w)?;
    }
    let mut sorted: Vec<Word> = words.to_vec();
    sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sorted.dedup();
    let mut kept: Vec<Word> = Vec::new();
    for w in sorted {
        if !kept.iter().any(|k| k.is_prefix_of(&w)) {
            kept.push(w);
        }
    }
    kept.sort();
    Ok(kept)
}

/// Expands a prefix-free clopen set so that every word has length exactly `depth`.
pub fn refine_clopen(sys: &SftSystem, words: &[Word], depth: usize) -> Vec<Word> {
    let mut out: Vec<Word> = words
        .iter()
        .flat_map(|w| {
            if w.len() >= depth {
                vec![w.clone()]
            } else {
                sys.extensions(w.last(), depth - w.len()).into_iter().map(|t| w.concat(&t)).collect()
            }
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmat::AbelianGroupPresentation as G;

    fn w(s: &[u32]) -> Word {
        Word::from_one_based(s).unwrap()
    }

    #[test]
    fn validation() {
        assert!(SftSystem::new(&[vec![1, 0], vec![1, 0]]).is_err());
        assert!(SftSystem::new(&[vec![2]]).is_err());
        assert!(SftSystem::new(&[vec![0, 1], vec![1, 0]]).unwrap().is_irreducible());
        assert!(!SftSystem::new(&[vec![1, 1], vec![0, 1]]).unwrap().is_irreducible());
    }

    #[test]
    fn closed_forms() {
        for n in 2..=6 {
            let g = SftSystem::full_shift(n).h0_group();
            if n == 2 {
                assert!(g.is_trivial());
            } else {
                assert_eq!(g, G::from_invariants(vec![BigInt::from(n - 1)], 0).unwrap());
            }
            assert!(SftSystem::full_shift(n).h1_group().is_trivial());
        }
        assert!(SftSystem::golden_mean().h0_group().is_trivial());
        assert!(SftSystem::golden_mean().h1_group().is_trivial());
        assert_eq!(SftSystem::designated().h0_group(), G::free(1));
        assert_eq!(SftSystem::designated().h1_group(), G::free(1));
    }

    #[test]
    fn classes_of_designated() {
        let s = SftSystem::designated();
        assert_eq!(s.h0_class(&[]).unwrap(), vec![BigInt::from(0)]);
        assert_eq!(s.h0_class(&[w(&[2])]).unwrap(), vec![BigInt::from(0)]);
        assert_eq!(s.h0_class(&[w(&[1]), w(&[2, 3])]).unwrap(), vec![BigInt::from(0)]);
        assert_ne!(s.h0_class(&[w(&[1])]).unwrap(), vec![BigInt::from(0)]);
        assert!(s.h0_class(&[w(&[1, 3])]).is_err());
    }

    #[test]
    fn counting() {
        let g = SftSystem::golden_mean();
        assert_eq!(g.word_count(3), 5);
        assert_eq!(g.words(3).len(), 5);
        assert_eq!(SftSystem::full_shift(2).words(3).len(), 8);
        assert_eq!(g.least_word_ending(1, 3), Some(w(&[1, 1, 2])));
        assert_eq!(g.least_word_ending(0, 1), Some(w(&[1])));
    }

    #[test]
    fn clopen_normal_form() {
        let s = SftSystem::full_shift(2);
        assert_eq!(canonical_clopen(&s, &[w(&[1]), w(&[1, 2])]).unwrap(), vec![w(&[1])]);
        assert!(canonical_clopen(&s, &[]).unwrap().is_empty());
        let fine = vec![w(&[1, 1]), w(&[1, 2]), w(&[2])];
        assert_eq!(canonical_clopen(&s, &fine).unwrap(), fine);
        let again = canonical_clopen(&s, &fine).unwrap();
        assert_eq!(canonical_clopen(&s, &again).unwrap(), again);
    }
}
