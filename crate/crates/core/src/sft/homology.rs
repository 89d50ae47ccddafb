use num_bigint::BigInt;
use num_traits::Zero;

use super::reduced::ReducedLevel;
use super::system::{SftSystem, Word};
use super::tableau::Tableau;
use super::truncation::Window;
use super::SftError;
use crate::zmat::sparse::{normalize, SparseVec};
use crate::zmat::{
    colimit_stabilize, is_isomorphism, narrow, solve_integer, AbelianGroupPresentation, CycleQuotient,
    DirectedGroupSystem, IntMatrix, SparseQuotient, ZmatError,
};

/// Default number of consecutive isomorphisms required before a tower counts as stable.
pub const STABILITY_WINDOW: usize = 3;
/// Shallowest depth with a feasible window.
pub const FIRST_DEPTH: usize = 3;

#[derive(Clone, Debug)]
enum LevelQuotient {
    Zero(SparseQuotient<i64>),
    One(CycleQuotient<i64>),
}

#[derive(Clone, Debug)]
struct TowerLevel {
    red: ReducedLevel,
    quotient: LevelQuotient,
}

impl TowerLevel {
    fn group(&self) -> &AbelianGroupPresentation {
        match &self.quotient {
            LevelQuotient::Zero(q) => q.group(),
            LevelQuotient::One(q) => q.group(),
        }
    }

    fn representative(&self, i: usize) -> Result<SparseVec<BigInt>, SftError> {
        Ok(match &self.quotient {
            LevelQuotient::Zero(q) => q.generator(i),
            LevelQuotient::One(q) => q.generator(i)?,
        })
    }

    fn reduce(&self, v: &SparseVec<i64>) -> Result<Vec<BigInt>, SftError> {
        Ok(match &self.quotient {
            LevelQuotient::Zero(q) => q.reduce(v)?,
            LevelQuotient::One(q) => q.reduce_cycle(v)?,
        })
    }
}

/// Homology of successively deeper truncations together with the connecting maps.
/// Level `i` is built at depth `FIRST_DEPTH + i`.
#[derive(Clone, Debug)]
pub struct HomologyTower {
    sys: SftSystem,
    degree: u32,
    levels: Vec<TowerLevel>,
    system: Option<DirectedGroupSystem>,
}

impl HomologyTower {
    pub fn new(sys: &SftSystem, degree: u32, max_depth: usize) -> Result<Self, SftError> {
        if degree > 1 {
            return Err(SftError::UnsupportedDegree(degree));
        }
        let mut tower = HomologyTower { sys: sys.clone(), degree, levels: Vec::new(), system: None };
        tower.extend_to(max_depth)?;
        Ok(tower)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn system(&self) -> &SftSystem {
        &self.sys
    }

    pub fn max_depth(&self) -> usize {
        FIRST_DEPTH + self.levels.len() - 1
    }

    pub fn groups(&self) -> &[AbelianGroupPresentation] {
        self.system.as_ref().map_or(&[], |s| s.groups())
    }

    pub fn maps(&self) -> &[IntMatrix] {
        self.system.as_ref().map_or(&[], |s| s.maps())
    }

    pub fn group_at(&self, depth: usize) -> &AbelianGroupPresentation {
        self.levels[depth - FIRST_DEPTH].group()
    }

    pub fn extend_to(&mut self, depth: usize) -> Result<(), SftError> {
        if depth < FIRST_DEPTH {
            return Err(SftError::InfeasibleBounds { k: depth, m: 0 });
        }
        while self.levels.is_empty() || self.max_depth() < depth {
            let d = FIRST_DEPTH + self.levels.len();
            let red = ReducedLevel::new(&self.sys, Window::for_depth(d)?)?;
            let quotient = match self.degree {
                0 => LevelQuotient::Zero(red.h0()?),
                _ => LevelQuotient::One(red.h1(&self.sys)?),
            };
            let level = TowerLevel { red, quotient };
            match self.levels.last() {
                None => self.system = Some(DirectedGroupSystem::new(level.group().clone())),
                Some(prev) => {
                    let map = self.connecting_map(prev, &level)?;
                    self.system.as_mut().expect("started").push(level.group().clone(), map)?;
                }
            }
            self.levels.push(level);
        }
        Ok(())
    }

    fn connecting_map(&self, from: &TowerLevel, to: &TowerLevel) -> Result<IntMatrix, SftError> {
        let cols = (0..from.group().num_coords())
            .map(|i| {
                let image = self.push_forward(from, to, &from.representative(i)?)?;
                to.reduce(&image)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntMatrix::from_columns(to.group().num_coords(), &cols)?)
    }

    /// Refines a chain of one level into the next.
    fn push_forward(&self, from: &TowerLevel, to: &TowerLevel, v: &SparseVec<BigInt>) -> Result<SparseVec<i64>, SftError> {
        let mut acc: SparseVec<BigInt> = Vec::new();
        let mut scratch = Vec::new();
        for (i, c) in v {
            scratch.clear();
            if self.degree == 0 {
                let w = from.red.c0().word(*i);
                scratch.extend(to.red.clopen_vector(&self.sys, std::slice::from_ref(w))?);
            } else {
                for (mu, nu, s) in from.red.as_bisections(&self.sys, *i) {
                    to.red.pair_into(&self.sys, &mu, &nu, s, &mut scratch)?;
                }
            }
            acc.extend(scratch.iter().map(|(r, d)| (*r, c * d)));
        }
        Ok(narrow(&normalize(acc)?)?)
    }

    /// Stabilized group and the depth at which stabilization began.
    pub fn stabilize(&self, window: usize) -> Result<(AbelianGroupPresentation, usize), SftError> {
        let sys = self.system.as_ref().ok_or(SftError::Unstabilized { max_depth: FIRST_DEPTH })?;
        match colimit_stabilize(sys, window) {
            Ok((g, level)) => Ok((g, FIRST_DEPTH + level)),
            Err(ZmatError::Unstabilized { .. }) => Err(SftError::Unstabilized { max_depth: self.max_depth() }),
            Err(e) => Err(e.into()),
        }
    }

    /// Reduces a chain given at `depth` and pulls the class back to `target` depth.
    fn class_at(&mut self, target: usize, depth: usize, chain: &SparseVec<i64>) -> Result<Vec<BigInt>, SftError> {
        self.extend_to(depth)?;
        let y = self.levels[depth - FIRST_DEPTH].reduce(chain)?;
        self.pull_back(target, depth, y)
    }

    /// Finds `x` in the group at `target` whose image at `depth` is `y`.
    fn pull_back(&self, target: usize, depth: usize, y: Vec<BigInt>) -> Result<Vec<BigInt>, SftError> {
        let src = self.group_at(target);
        if depth == target {
            return Ok(y);
        }
        let maps = self.maps();
        let mut m = IntMatrix::identity(src.num_coords());
        for d in target..depth {
            let f = &maps[d - FIRST_DEPTH];
            if !is_isomorphism(self.group_at(d), self.group_at(d + 1), f) {
                return Err(SftError::Unstabilized { max_depth: depth });
            }
            m = f * &m;
        }
        let dst = self.group_at(depth);
        let mut tors = IntMatrix::zeros(dst.num_coords(), dst.torsion().len());
        for (j, t) in dst.torsion().iter().enumerate() {
            tors.set(j, j, t.clone());
        }
        let x = solve_integer(&m.hcat(&tors)?, &y)?.ok_or(SftError::Unstabilized { max_depth: depth })?;
        Ok(src.reduce_element(&x[..src.num_coords()])?)
    }
}

/// Colimit of the truncated homology groups in degree 0 or 1.
pub fn truncated_homology(sys: &SftSystem, degree: u32, max_depth: usize) -> Result<AbelianGroupPresentation, SftError> {
    let tower = HomologyTower::new(sys, degree, max_depth)?;
    Ok(tower.stabilize(STABILITY_WINDOW)?.0)
}

/// Stabilized `H₀` or `H₁` tower with its reference depth, reused across many
/// class and index computations.
#[derive(Clone, Debug)]
pub struct StableHomology {
    tower: HomologyTower,
    group: AbelianGroupPresentation,
    stable_depth: usize,
}

impl StableHomology {
    pub fn new(sys: &SftSystem, degree: u32, max_depth: usize) -> Result<Self, SftError> {
        let tower = HomologyTower::new(sys, degree, max_depth)?;
        let (group, stable_depth) = tower.stabilize(STABILITY_WINDOW)?;
        Ok(StableHomology { tower, group, stable_depth })
    }

    pub fn group(&self) -> &AbelianGroupPresentation {
        &self.group
    }

    pub fn stable_depth(&self) -> usize {
        self.stable_depth
    }

    pub fn tower(&self) -> &HomologyTower {
        &self.tower
    }

    /// Class of `1_U` in the stabilized `H₀`.
    pub fn clopen_class(&mut self, words: &[Word]) -> Result<Vec<BigInt>, SftError> {
        if self.tower.degree != 0 {
            return Err(SftError::UnsupportedDegree(self.tower.degree));
        }
        let sys = self.tower.sys.clone();
        for w in words {
            sys.check_word(w)?;
        }
        let longest = words.iter().map(Word::len).max().unwrap_or(0);
        let depth = self.stable_depth.max(longest);
        self.tower.extend_to(depth)?;
        let v = self.tower.levels[depth - FIRST_DEPTH].red.clopen_vector(&sys, words)?;
        self.tower.class_at(self.stable_depth, depth, &v)
    }

    /// Index of a tableau in the stabilized `H₁`.
    pub fn index_of(&mut self, t: &Tableau) -> Result<Vec<BigInt>, SftError> {
        if self.tower.degree != 1 {
            return Err(SftError::UnsupportedDegree(self.tower.degree));
        }
        let sys = self.tower.sys.clone();
        t.validate(&sys).map_err(SftError::InvalidTableau)?;
        let split = t.pairs.iter().any(|p| p.mu.last() != p.nu.last());
        let need_k = t.pairs.iter().map(|p| p.nu.len()).max().unwrap_or(1) + usize::from(split);
        let need_m = t.max_abs_lag().max(1);
        let mut depth = self.stable_depth;
        loop {
            let w = Window::for_depth(depth)?;
            if w.k >= need_k && w.m >= need_m {
                break;
            }
            depth += 1;
        }
        self.tower.extend_to(depth)?;
        let red = &self.tower.levels[depth - FIRST_DEPTH].red;
        let mut z = Vec::new();
        for p in &t.pairs {
            red.pair_into(&sys, &p.mu, &p.nu, 1, &mut z)?;
        }
        let z = normalize(z)?;
        if !red.apply_boundary(&crate::zmat::widen(&z)).is_empty() {
            return Err(SftError::Zmat(ZmatError::NotACycle));
        }
        self.tower.class_at(self.stable_depth, depth, &z)
    }

    pub fn is_zero(&self, coords: &[BigInt]) -> bool {
        coords.iter().all(Zero::is_zero)
    }
}

/// Index of `t` in the stabilized `H₁` computed within `max_depth`.
pub fn index_of(sys: &SftSystem, t: &Tableau, max_depth: usize) -> Result<Vec<BigInt>, SftError> {
    StableHomology::new(sys, 1, max_depth)?.index_of(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_shifts_by_both_methods() {
        for n in 2..=4 {
            let s = SftSystem::full_shift(n);
            assert_eq!(truncated_homology(&s, 0, 6).unwrap(), s.h0_group());
            assert_eq!(truncated_homology(&s, 1, 6).unwrap(), s.h1_group());
        }
    }

    #[test]
    fn designated_homology() {
        let s = SftSystem::designated();
        assert_eq!(truncated_homology(&s, 0, 7).unwrap(), AbelianGroupPresentation::free(1));
        assert_eq!(truncated_homology(&s, 1, 7).unwrap(), AbelianGroupPresentation::free(1));
        assert!(matches!(truncated_homology(&s, 1, 5), Err(SftError::Unstabilized { .. })));
        assert!(matches!(truncated_homology(&s, 2, 6), Err(SftError::UnsupportedDegree(2))));
    }

    #[test]
    fn swap_index_vanishes_on_full_shift() {
        let s = SftSystem::full_shift(2);
        let t = Tableau::from_pairs(vec![(Word::new(vec![0]), Word::new(vec![1])), (Word::new(vec![1]), Word::new(vec![0]))]);
        assert!(index_of(&s, &t, 6).unwrap().is_empty());
    }

    #[test]
    fn clopen_classes_agree_with_closed_form_order() {
        let s = SftSystem::full_shift(3);
        let mut h = StableHomology::new(&s, 0, 6).unwrap();
        let one = h.clopen_class(&[Word::new(vec![0])]).unwrap();
        let all = h.clopen_class(&[Word::new(vec![0]), Word::new(vec![1]), Word::new(vec![2])]).unwrap();
        // [X] = 3[1_[a]] = [1_[a]] in Z/2Z
        assert_eq!(all, one);
        assert!(!h.is_zero(&one));
    }
}
