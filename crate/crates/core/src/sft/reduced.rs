//! Reduced model of one truncation level.
//!
//! Every bisection `Z(μ,ν)` is written as `E_μ' − E_ν'` where `E_x = Z(x, β_a)` joins a
//! cylinder to the fixed base word of its terminal symbol. The `E_x` span a complex
//! quasi-isomorphic to the full truncation in degrees 0 and 1, with two families of
//! relations: `E_β = 0`, and the shift relations identifying `G_t(u)` across words `u`
//! with the same terminal symbol.
//!
//! Coordinates are the tree basis `T_x = E_x − Σ_b E_xb` for `|x| < k + m` and
//! `T_x = E_x` at full depth, which makes the shift relations short and every
//! `δ₁(T_x)` with `|x| < k + m` depend only on the terminal symbol.

use num_bigint::BigInt;

use super::system::{SftSystem, Symbol, Word};
use super::truncation::{base_words, cylinder, Window, WordTable};
use super::SftError;
use crate::zmat::sparse::{normalize, SparseVec};
use crate::zmat::{CycleQuotient, SparseQuotient, ZmatError};

#[derive(Clone, Debug)]
pub struct ReducedLevel {
    pub window: Window,
    c0: WordTable,
    tree: WordTable,
    beta: Vec<Word>,
    // lowest-priority representatives u₀(a,t), indexed [a][t-1]
    reps: Vec<Vec<Word>>,
    beta_cylinder: Vec<SparseVec<i64>>,
    inner_boundary: Vec<SparseVec<i64>>,
}

impl ReducedLevel {
    pub fn new(sys: &SftSystem, window: Window) -> Result<Self, SftError> {
        let Window { k, m } = window;
        let depth = window.depth();
        let c0 = WordTable::new(sys.words(depth));
        let mut tree_words = Vec::new();
        for len in (k - m)..=depth {
            tree_words.extend(sys.words(len));
        }
        let tree = WordTable::new(tree_words);
        let beta = base_words(sys, k)?;
        let reps = sys
            .symbols()
            .map(|a| {
                (1..=m)
                    .map(|t| sys.least_word_ending(a, k - t).ok_or(SftError::InfeasibleBounds { k, m }))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let beta_cylinder: Vec<SparseVec<i64>> = beta
            .iter()
            .map(|b| {
                let mut v = Vec::new();
                cylinder(sys, &c0, b, depth, 1, &mut v);
                normalize(v)
            })
            .collect::<Result<_, _>>()?;
        let inner_boundary = sys
            .symbols()
            .map(|a| {
                let mut v = beta_cylinder[usize::from(a)].clone();
                for &b in sys.successors(a) {
                    v.extend(beta_cylinder[usize::from(b)].iter().map(|(i, c)| (*i, -c)));
                }
                normalize(v)
            })
            .collect::<Result<_, _>>()?;
        Ok(ReducedLevel { window, c0, tree, beta, reps, beta_cylinder, inner_boundary })
    }

    pub fn depth(&self) -> usize {
        self.window.depth()
    }

    pub fn c0(&self) -> &WordTable {
        &self.c0
    }

    pub fn tree(&self) -> &WordTable {
        &self.tree
    }

    pub fn beta(&self, a: Symbol) -> &Word {
        &self.beta[usize::from(a)]
    }

    /// `δ₁` of tree coordinate `i`, in the cylinder basis of `C⁰`.
    pub fn boundary(&self, i: usize) -> SparseVec<i64> {
        let x = self.tree.word(i);
        let a = usize::from(x.last());
        if x.len() < self.depth() {
            return self.inner_boundary[a].clone();
        }
        let mut v = self.beta_cylinder[a].clone();
        v.push((self.c0.get(x).expect("full-depth word"), -1));
        normalize(v).expect("small coefficients")
    }

    /// Pivot preference: representatives last, full-depth coordinates first.
    pub fn priority(&self, i: usize) -> i64 {
        let x = self.tree.word(i);
        if x.len() == self.depth() {
            2
        } else if self.reps[usize::from(x.last())].contains(x) {
            0
        } else {
            1
        }
    }

    /// `Σ T_v` over admissible `v ⊒ z` with `lo ≤ |v| ≤ depth`.
    fn subtree(&self, sys: &SftSystem, z: &Word, lo: usize, coeff: i64, out: &mut SparseVec<i64>) {
        for len in lo.max(z.len())..=self.depth() {
            for t in sys.extensions(z.last(), len - z.len()) {
                out.push((self.tree.get(&z.concat(&t)).expect("tree word"), coeff));
            }
        }
    }

    /// `E_z` in tree coordinates.
    pub fn e_coordinate(&self, sys: &SftSystem, z: &Word, coeff: i64, out: &mut SparseVec<i64>) {
        self.subtree(sys, z, z.len(), coeff, out);
    }

    /// Image of `1_{Z(μ,ν)}` in tree coordinates. Pairs whose terminal symbols only
    /// share a follower set are split one symbol deeper first.
    pub fn pair_into(&self, sys: &SftSystem, mu: &Word, nu: &Word, coeff: i64, out: &mut SparseVec<i64>) -> Result<(), SftError> {
        if mu.last() != nu.last() {
            if !sys.same_follower(mu.last(), nu.last()) {
                return Err(SftError::OutsideWindow { mu: mu.clone(), nu: nu.clone() });
            }
            for &b in sys.successors(nu.last()) {
                self.pair_into(sys, &mu.push(b), &nu.push(b), coeff, out)?;
            }
            return Ok(());
        }
        let Window { k, m } = self.window;
        if nu.len() > k || mu.len() + k - nu.len() + m < k || mu.len() + k - nu.len() > k + m {
            return Err(SftError::OutsideWindow { mu: mu.clone(), nu: nu.clone() });
        }
        self.subtree(sys, mu, mu.len() + k - nu.len(), coeff, out);
        self.subtree(sys, nu, k, -coeff, out);
        Ok(())
    }

    /// Tree coordinate `i` written as a combination of bisections.
    pub fn as_bisections(&self, sys: &SftSystem, i: usize) -> Vec<(Word, Word, i64)> {
        let x = self.tree.word(i);
        let mut out = vec![(x.clone(), self.beta[usize::from(x.last())].clone(), 1)];
        if x.len() < self.depth() {
            for &b in sys.successors(x.last()) {
                out.push((x.push(b), self.beta[usize::from(b)].clone(), -1));
            }
        }
        out
    }

    /// Generators of the image of `δ₂`, already pushed through the reduction.
    pub fn relations(&self, sys: &SftSystem) -> Vec<SparseVec<i64>> {
        let Window { k, m } = self.window;
        let mut out = Vec::new();
        for b in &self.beta {
            let mut v = Vec::new();
            self.e_coordinate(sys, b, 1, &mut v);
            out.push(v);
        }
        for a in sys.symbols() {
            let ending: Vec<Vec<Word>> = ((k - m)..=(k + m - 1))
                .map(|len| sys.words(len).into_iter().filter(|w| w.last() == a).collect())
                .collect();
            for t in 1..=m {
                let rep = &self.reps[usize::from(a)][t - 1];
                for len in (k - m)..=(k + m - t) {
                    for u in &ending[len - (k - m)] {
                        if u == rep {
                            continue;
                        }
                        let mut v = Vec::new();
                        for j in 0..t {
                            for w in sys.extensions(a, j) {
                                v.push((self.tree.get(&u.concat(&w)).expect("tree word"), 1));
                                v.push((self.tree.get(&rep.concat(&w)).expect("tree word"), -1));
                            }
                        }
                        out.push(v);
                    }
                }
            }
        }
        out.into_iter().map(|v| normalize(v).expect("small coefficients")).collect()
    }

    /// Cokernel of `δ₁`.
    pub fn h0(&self) -> Result<SparseQuotient<i64>, SftError> {
        let mut gens: Vec<SparseVec<i64>> = self.inner_boundary.clone();
        for i in 0..self.tree.len() {
            if self.tree.word(i).len() == self.depth() {
                gens.push(self.boundary(i));
            }
        }
        Ok(SparseQuotient::new(self.c0.len(), gens, &|_| 0)?)
    }

    /// `ker δ₁ / Im δ₂`.
    pub fn h1(&self, sys: &SftSystem) -> Result<CycleQuotient<i64>, SftError> {
        let rels = self.relations(sys);
        Ok(CycleQuotient::new(self.tree.len(), self.c0.len(), rels, |i| self.boundary(i), &|i| self.priority(i))?)
    }

    /// Sum of `δ₁` over a tree-coordinate chain.
    pub fn apply_boundary(&self, z: &[(usize, BigInt)]) -> SparseVec<BigInt> {
        let mut acc: SparseVec<BigInt> = Vec::new();
        for (i, c) in z {
            acc.extend(self.boundary(*i).into_iter().map(|(r, d)| (r, c * d)));
        }
        normalize(acc).expect("arbitrary precision")
    }

    /// Cylinder-basis vector of `1_U`, `U` a union of cylinders of length at most the depth.
    pub fn clopen_vector(&self, sys: &SftSystem, words: &[Word]) -> Result<SparseVec<i64>, ZmatError> {
        let mut v = Vec::new();
        for w in words {
            cylinder(sys, &self.c0, w, self.depth(), 1, &mut v);
        }
        normalize(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::truncation::ChainTruncation;
    use crate::zmat::sparse_cokernel;
    use crate::AbelianGroupPresentation;

    fn full_h1(sys: &SftSystem, t: &ChainTruncation) -> AbelianGroupPresentation {
        let cq = CycleQuotient::new(t.c1.len(), t.c0.len(), t.delta2.clone(), |i| t.delta1[i].clone(), &|_| 0).unwrap();
        let _ = sys;
        cq.group().clone()
    }

    #[test]
    fn matches_full_truncation() {
        let systems = [
            SftSystem::full_shift(2),
            SftSystem::golden_mean(),
            SftSystem::designated(),
            SftSystem::new(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap(),
        ];
        for s in &systems {
            for d in 3..=5 {
                let w = Window::for_depth(d).unwrap();
                let full = ChainTruncation::new(s, w).unwrap();
                let red = ReducedLevel::new(s, w).unwrap();
                let rows: Vec<_> = full.delta1.iter().map(|v| crate::zmat::widen(v)).collect();
                let full_h0 = sparse_cokernel(full.c0.len(), &rows);
                assert_eq!(red.h0().unwrap().group(), &full_h0, "H0 depth {d}");
                assert_eq!(red.h1(s).unwrap().group(), &full_h1(s, &full), "H1 depth {d}");
            }
        }
    }

    #[test]
    fn relations_are_cycles() {
        let s = SftSystem::designated();
        let red = ReducedLevel::new(&s, Window::for_depth(6).unwrap()).unwrap();
        for r in red.relations(&s) {
            assert!(red.apply_boundary(&crate::zmat::widen(&r)).is_empty());
        }
    }

    #[test]
    fn projection_is_a_chain_map() {
        let s = SftSystem::golden_mean();
        let w = Window::for_depth(5).unwrap();
        let full = ChainTruncation::new(&s, w).unwrap();
        let red = ReducedLevel::new(&s, w).unwrap();
        for (i, (mu, nu)) in full.c1.iter().enumerate() {
            let mut v = Vec::new();
            red.pair_into(&s, mu, nu, 1, &mut v).unwrap();
            let v = normalize(v).unwrap();
            assert_eq!(red.apply_boundary(&crate::zmat::widen(&v)), crate::zmat::widen(&full.delta1[i]));
        }
    }
}
