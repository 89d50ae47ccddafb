use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::system::{SftSystem, Symbol, Word};
use super::SftError;

/// Compact open bisection `Z(μ,ν) = {(μx, |μ|−|ν|, νx)}`: maps `νx ↦ μx`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CylinderBisection {
    pub mu: Word,
    pub nu: Word,
}

impl CylinderBisection {
    pub fn new(mu: Word, nu: Word) -> Self {
        CylinderBisection { mu, nu }
    }

    pub fn lag(&self) -> i64 {
        self.mu.len() as i64 - self.nu.len() as i64
    }
}

/// Full-group element as a finite list of cylinder bisections whose sources
/// and ranges each partition the shift space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tableau {
    pub pairs: Vec<CylinderBisection>,
}

/// Tableau document `{"pairs": [[[μ…],[ν…]],…]}` with 1-based symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauDocument {
    pub pairs: Vec<(Vec<u32>, Vec<u32>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableauViolation {
    Empty,
    Inadmissible(Word),
    TerminalMismatch { mu: Word, nu: Word },
    Overlap { side: Side, first: Word, second: Word },
    Gap { side: Side, at: Word },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Source,
    Range,
}

impl fmt::Display for TableauViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableauViolation::Empty => write!(f, "no pairs"),
            TableauViolation::Inadmissible(w) => write!(f, "inadmissible word {w}"),
            TableauViolation::TerminalMismatch { mu, nu } => {
                write!(f, "terminal symbols of ({mu}, {nu}) have different followers")
            }
            TableauViolation::Overlap { side, first, second } => {
                write!(f, "{side:?} cylinders {first} and {second} overlap")
            }
            TableauViolation::Gap { side, at } => write!(f, "{side:?} cylinders leave a gap at {at}"),
        }
    }
}

/// Checks that `words` is a complete prefix code of the shift space.
fn check_partition(sys: &SftSystem, words: &[&Word], side: Side) -> Result<(), TableauViolation> {
    let mut sorted: Vec<&Word> = words.to_vec();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0].is_prefix_of(pair[1]) {
            return Err(TableauViolation::Overlap { side, first: pair[0].clone(), second: pair[1].clone() });
        }
    }
    fn covered(sys: &SftSystem, prefix: &Word, words: &[&Word], side: Side) -> Result<(), TableauViolation> {
        if words.contains(&prefix) {
            return Ok(());
        }
        let below: Vec<&Word> = words.iter().copied().filter(|w| prefix.is_prefix_of(w)).collect();
        if below.is_empty() {
            return Err(TableauViolation::Gap { side, at: prefix.clone() });
        }
        for &b in sys.successors(prefix.last()) {
            covered(sys, &prefix.push(b), &below, side)?;
        }
        Ok(())
    }
    for s in sys.symbols() {
        covered(sys, &Word(vec![s]), &sorted, side)?;
    }
    Ok(())
}

impl Tableau {
    pub fn new(pairs: Vec<CylinderBisection>) -> Self {
        Tableau { pairs }
    }

    pub fn from_pairs(pairs: Vec<(Word, Word)>) -> Self {
        Tableau { pairs: pairs.into_iter().map(|(mu, nu)| CylinderBisection { mu, nu }).collect() }
    }

    pub fn from_document(doc: &TableauDocument) -> Result<Self, SftError> {
        let pairs: Result<Vec<_>, SftError> = doc
            .pairs
            .iter()
            .map(|(m, n)| Ok(CylinderBisection { mu: Word::from_one_based(m)?, nu: Word::from_one_based(n)? }))
            .collect();
        Ok(Tableau { pairs: pairs? })
    }

    pub fn to_document(&self) -> TableauDocument {
        TableauDocument { pairs: self.pairs.iter().map(|p| (p.mu.to_one_based(), p.nu.to_one_based())).collect() }
    }

    pub fn identity(sys: &SftSystem) -> Self {
        Tableau { pairs: sys.symbols().map(|s| CylinderBisection::new(Word(vec![s]), Word(vec![s]))).collect() }
    }

    pub fn validate(&self, sys: &SftSystem) -> Result<(), TableauViolation> {
        if self.pairs.is_empty() {
            return Err(TableauViolation::Empty);
        }
        for p in &self.pairs {
            for w in [&p.mu, &p.nu] {
                if !sys.is_admissible(w) {
                    return Err(TableauViolation::Inadmissible(w.clone()));
                }
            }
            if !sys.same_follower(p.mu.last(), p.nu.last()) {
                return Err(TableauViolation::TerminalMismatch { mu: p.mu.clone(), nu: p.nu.clone() });
            }
        }
        let nus: Vec<&Word> = self.pairs.iter().map(|p| &p.nu).collect();
        check_partition(sys, &nus, Side::Source)?;
        let mus: Vec<&Word> = self.pairs.iter().map(|p| &p.mu).collect();
        check_partition(sys, &mus, Side::Range)
    }

    pub fn is_valid(&self, sys: &SftSystem) -> bool {
        self.validate(sys).is_ok()
    }

    fn require_valid(&self, sys: &SftSystem) -> Result<(), SftError> {
        self.validate(sys).map_err(SftError::InvalidTableau)
    }

    pub fn max_source_len(&self) -> usize {
        self.pairs.iter().map(|p| p.nu.len()).max().unwrap_or(0)
    }

    pub fn max_abs_lag(&self) -> usize {
        self.pairs.iter().map(|p| p.lag().unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn total_lag(&self) -> i64 {
        self.pairs.iter().map(CylinderBisection::lag).sum()
    }

    pub fn is_lag_zero(&self) -> bool {
        self.pairs.iter().all(|p| p.lag() == 0)
    }

    /// Image of a finite word lying inside one source cylinder.
    pub fn apply(&self, w: &Word) -> Option<Word> {
        let p = self.pairs.iter().find(|p| p.nu.is_prefix_of(w))?;
        Some(p.mu.concat(&w.0[p.nu.len()..]))
    }

    pub fn invert(&self) -> Tableau {
        Tableau {
            pairs: self.pairs.iter().map(|p| CylinderBisection { mu: p.nu.clone(), nu: p.mu.clone() }).collect(),
        }
    }

    /// `self ∘ other`: first apply `other`, then `self`.
    pub fn compose(&self, sys: &SftSystem, other: &Tableau) -> Result<Tableau, SftError> {
        self.require_valid(sys)?;
        other.require_valid(sys)?;
        Ok(compose_unchecked(sys, self, other))
    }

    /// Unique form: all pairs merged as far as the cylinder structure allows, then sorted.
    pub fn canonical(&self, sys: &SftSystem) -> Tableau {
        canonicalize(sys, &self.pairs)
    }

    pub fn equals(&self, sys: &SftSystem, other: &Tableau) -> bool {
        self.canonical(sys) == other.canonical(sys)
    }

    pub fn is_identity(&self, sys: &SftSystem) -> bool {
        self.canonical(sys) == Tableau::identity(sys)
    }

    /// Least `p ≤ budget` with `selfᵖ = id`.
    pub fn order(&self, sys: &SftSystem, budget: usize) -> Result<usize, SftError> {
        self.require_valid(sys)?;
        let id = Tableau::identity(sys);
        let mut power = self.canonical(sys);
        for p in 1..=budget {
            if power == id {
                return Ok(p);
            }
            power = compose_unchecked(sys, self, &power);
        }
        Err(SftError::ExceedsBudget { budget })
    }
}

fn compose_unchecked(sys: &SftSystem, t1: &Tableau, t2: &Tableau) -> Tableau {
    let mut pairs = Vec::new();
    for p2 in &t2.pairs {
        for p1 in &t1.pairs {
            if p1.nu.is_prefix_of(&p2.mu) {
                let t = &p2.mu.0[p1.nu.len()..];
                pairs.push(CylinderBisection::new(p1.mu.concat(t), p2.nu.clone()));
            } else if p2.mu.is_prefix_of(&p1.nu) {
                let t = &p1.nu.0[p2.mu.len()..];
                pairs.push(CylinderBisection::new(p1.mu.clone(), p2.nu.concat(t)));
            }
        }
    }
    canonicalize(sys, &pairs)
}

fn canonicalize(sys: &SftSystem, pairs: &[CylinderBisection]) -> Tableau {
    let depth = pairs.iter().map(|p| p.nu.len()).max().unwrap_or(0);
    // keyed by source word; every source has length `depth` after expansion
    let mut level: BTreeMap<Word, Word> = BTreeMap::new();
    let mut done: Vec<CylinderBisection> = Vec::new();
    for p in pairs {
        for t in sys.extensions(p.nu.last(), depth - p.nu.len()) {
            level.insert(p.nu.concat(&t), p.mu.concat(&t));
        }
    }
    for len in (2..=depth).rev() {
        let mut parents: BTreeMap<Word, Vec<(Symbol, Word, Word)>> = BTreeMap::new();
        let mut next: BTreeMap<Word, Word> = BTreeMap::new();
        for (nu, mu) in std::mem::take(&mut level) {
            if nu.len() != len {
                next.insert(nu, mu);
                continue;
            }
            parents.entry(nu.drop_last()).or_default().push((nu.last(), nu, mu));
        }
        for (parent, kids) in parents {
            let a = parent.last();
            let succ = sys.successors(a);
            let mergeable = kids.len() == succ.len()
                && kids[0].2.len() >= 2
                && kids.iter().all(|(b, _, mu)| mu.len() == kids[0].2.len() && mu.last() == *b)
                && kids.iter().all(|(_, _, mu)| mu.drop_last() == kids[0].2.drop_last())
                && sys.same_follower(kids[0].2.drop_last().last(), a);
            if mergeable {
                next.insert(parent, kids[0].2.drop_last());
            } else {
                done.extend(kids.into_iter().map(|(_, nu, mu)| CylinderBisection::new(mu, nu)));
            }
        }
        level = next;
    }
    done.extend(level.into_iter().map(|(nu, mu)| CylinderBisection::new(mu, nu)));
    done.sort_by(|a, b| a.nu.cmp(&b.nu));
    Tableau { pairs: done }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[u32]) -> Word {
        Word::from_one_based(s).unwrap()
    }

    fn t(pairs: &[(&[u32], &[u32])]) -> Tableau {
        Tableau::from_pairs(pairs.iter().map(|(m, n)| (w(m), w(n))).collect())
    }

    #[test]
    fn validation_cases() {
        let s = SftSystem::full_shift(2);
        assert!(Tableau::identity(&s).is_valid(&s));
        assert!(t(&[(&[1], &[2]), (&[2], &[1])]).is_valid(&s));
        let g = SftSystem::golden_mean();
        assert!(matches!(
            t(&[(&[1], &[2]), (&[2], &[1])]).validate(&g),
            Err(TableauViolation::TerminalMismatch { .. })
        ));
        let swap = t(&[(&[1, 1], &[2, 1]), (&[1, 2], &[2, 2]), (&[2, 1], &[1, 1]), (&[2, 2], &[1, 2])]);
        assert!(swap.is_valid(&s));
        assert_eq!(
            t(&[(&[1], &[1])]).validate(&s),
            Err(TableauViolation::Gap { side: Side::Source, at: w(&[2]) })
        );
        assert!(matches!(
            t(&[(&[1], &[1]), (&[1, 2], &[1, 2]), (&[2], &[2])]).validate(&s),
            Err(TableauViolation::Overlap { .. })
        ));
    }

    #[test]
    fn swap_squares_to_identity() {
        let s = SftSystem::full_shift(2);
        let swap = t(&[(&[1, 1], &[2, 1]), (&[1, 2], &[2, 2]), (&[2, 1], &[1, 1]), (&[2, 2], &[1, 2])]);
        let sq = swap.compose(&s, &swap).unwrap();
        assert!(sq.is_identity(&s));
        assert_eq!(swap.order(&s, 10).unwrap(), 2);
        assert!(swap.invert().equals(&s, &swap));
        let id = Tableau::identity(&s);
        assert!(swap.compose(&s, &id).unwrap().equals(&s, &swap));
        assert_eq!(id.order(&s, 3).unwrap(), 1);
    }

    #[test]
    fn canonical_merges_children() {
        let s = SftSystem::full_shift(2);
        let fine = t(&[(&[1, 1], &[1, 1]), (&[1, 2], &[1, 2]), (&[2], &[2])]);
        assert_eq!(fine.canonical(&s), Tableau::identity(&s));
        let shift = odometer_like();
        assert!(shift.is_valid(&s));
        assert_eq!(shift.total_lag(), 1);
        assert_eq!(shift.canonical(&s).canonical(&s), shift.canonical(&s));
        assert!(shift.compose(&s, &shift.invert()).unwrap().is_identity(&s));
    }

    fn odometer_like() -> Tableau {
        t(&[(&[1], &[1, 1]), (&[2, 1, 1], &[2, 1]), (&[2, 1, 2], &[1, 2]), (&[2, 2], &[2, 2])])
    }

    #[test]
    fn apply_follows_pairs() {
        let s = SftSystem::full_shift(2);
        let shift = odometer_like();
        assert_eq!(shift.apply(&w(&[1, 1, 2])), Some(w(&[1, 2])));
        assert_eq!(shift.apply(&w(&[2, 1])), Some(w(&[2, 1, 1])));
        let comp = shift.compose(&s, &shift).unwrap();
        for x in s.words(6) {
            let a = comp.apply(&x).unwrap();
            let b = shift.apply(&shift.apply(&x).unwrap()).unwrap();
            let n = a.len().min(b.len());
            assert_eq!(a.0[..n], b.0[..n]);
        }
    }
}
