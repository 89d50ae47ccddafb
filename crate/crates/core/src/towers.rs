//! Compact principal groupoids as finite tower partitions.
//!
//! Each class is one orbit type with floors `1..=k`; a clopen set is a union of
//! floors, and every invariant probability measure is a mix of the per-class
//! uniform measures.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub type ClassId = String;
pub type Floor = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TowersError {
    #[error("unknown class {0}")]
    UnknownClass(ClassId),
    #[error("duplicate class {0}")]
    DuplicateClass(ClassId),
    #[error("class {0} has orbit size 0")]
    EmptyOrbit(ClassId),
    #[error("floor {floor} outside 1..={size} in class {class}")]
    FloorOutOfRange { class: ClassId, floor: Floor, size: u32 },
    #[error("floor counts do not allow a matching in class {0}")]
    CountViolation(ClassId),
    #[error("range meets source in class {0}")]
    OverlapError(ClassId),
    #[error("partial map is not injective in class {0}")]
    NotInjective(ClassId),
    #[error("negative height in class {0}")]
    NegativeHeight(ClassId),
    #[error("heights for class {class} have length {found}, expected {expected}")]
    HeightShape { class: ClassId, expected: usize, found: usize },
    #[error("class {0} misses the set")]
    NotFull(ClassId),
    #[error("measure bound must be positive")]
    NonPositiveBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerClass {
    pub class_id: ClassId,
    pub orbit_size: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TowerPartition {
    classes: Vec<TowerClass>,
}

impl TowerPartition {
    pub fn new(classes: Vec<TowerClass>) -> Result<Self, TowersError> {
        let mut seen = BTreeSet::new();
        for c in &classes {
            if !seen.insert(c.class_id.clone()) {
                return Err(TowersError::DuplicateClass(c.class_id.clone()));
            }
            if c.orbit_size == 0 {
                return Err(TowersError::EmptyOrbit(c.class_id.clone()));
            }
        }
        Ok(TowerPartition { classes })
    }

    pub fn from_sizes(sizes: &[(&str, u32)]) -> Result<Self, TowersError> {
        Self::new(sizes.iter().map(|(c, k)| TowerClass { class_id: c.to_string(), orbit_size: *k }).collect())
    }

    pub fn classes(&self) -> &[TowerClass] {
        &self.classes
    }

    pub fn size(&self, class: &str) -> Result<u32, TowersError> {
        self.classes
            .iter()
            .find(|c| c.class_id == class)
            .map(|c| c.orbit_size)
            .ok_or_else(|| TowersError::UnknownClass(class.to_string()))
    }

    pub fn sizes(&self) -> Vec<u32> {
        self.classes.iter().map(|c| c.orbit_size).collect()
    }

    /// The set of all floors.
    pub fn full(&self) -> FloorSet {
        FloorSet(self.classes.iter().map(|c| (c.class_id.clone(), (1..=c.orbit_size).collect())).collect())
    }

    pub fn check(&self, u: &FloorSet) -> Result<(), TowersError> {
        for (c, floors) in &u.0 {
            let k = self.size(c)?;
            if let Some(&f) = floors.iter().find(|&&f| f == 0 || f > k) {
                return Err(TowersError::FloorOutOfRange { class: c.clone(), floor: f, size: k });
            }
        }
        Ok(())
    }
}

/// Union of floors, per class. Classes not listed contribute nothing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FloorSet(pub BTreeMap<ClassId, BTreeSet<Floor>>);

impl FloorSet {
    pub fn new() -> Self {
        FloorSet::default()
    }

    pub fn with(mut self, class: &str, floors: &[Floor]) -> Self {
        self.0.entry(class.to_string()).or_default().extend(floors.iter().copied());
        self
    }

    pub fn floors(&self, class: &str) -> Vec<Floor> {
        self.0.get(class).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }
}

/// Per class, a partial injection given as `(range floor, source floor)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TowerBisection(pub BTreeMap<ClassId, Vec<(Floor, Floor)>>);

impl TowerBisection {
    pub fn range(&self) -> FloorSet {
        FloorSet(self.0.iter().map(|(c, m)| (c.clone(), m.iter().map(|p| p.0).collect())).collect())
    }

    pub fn source(&self) -> FloorSet {
        FloorSet(self.0.iter().map(|(c, m)| (c.clone(), m.iter().map(|p| p.1).collect())).collect())
    }

    pub fn pairs(&self, class: &str) -> &[(Floor, Floor)] {
        self.0.get(class).map_or(&[], Vec::as_slice)
    }
}

/// Per class, a permutation: entry `j − 1` is the image of floor `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TowerElement(pub BTreeMap<ClassId, Vec<Floor>>);

impl TowerElement {
    pub fn identity(t: &TowerPartition) -> Self {
        TowerElement(t.classes.iter().map(|c| (c.class_id.clone(), (1..=c.orbit_size).collect())).collect())
    }

    pub fn apply(&self, class: &str, floor: Floor) -> Option<Floor> {
        self.0.get(class)?.get(floor as usize - 1).copied()
    }

    pub fn compose(&self, other: &TowerElement) -> TowerElement {
        TowerElement(
            other
                .0
                .iter()
                .map(|(c, p)| (c.clone(), p.iter().map(|&f| self.apply(c, f).unwrap_or(f)).collect()))
                .collect(),
        )
    }

    pub fn is_identity(&self) -> bool {
        self.0.values().all(|p| p.iter().enumerate().all(|(i, &f)| f as usize == i + 1))
    }

    pub fn image(&self, u: &FloorSet) -> FloorSet {
        FloorSet(
            u.0.iter()
                .map(|(c, s)| (c.clone(), s.iter().map(|&f| self.apply(c, f).unwrap_or(f)).collect()))
                .collect(),
        )
    }
}

pub fn orbit_count(t: &TowerPartition, u: &FloorSet, class: &str) -> Result<u32, TowersError> {
    t.size(class)?;
    t.check(u)?;
    Ok(u.0.get(class).map_or(0, |s| s.len() as u32))
}

/// Whether every invariant probability measure gives `u` mass strictly below `c`.
pub fn measure_sup_check(t: &TowerPartition, u: &FloorSet, c: &BigRational) -> Result<bool, TowersError> {
    if *c <= BigRational::from_integer(0.into()) {
        return Err(TowersError::NonPositiveBound);
    }
    for cl in &t.classes {
        let n = orbit_count(t, u, &cl.class_id)?;
        let ratio = BigRational::new(BigInt::from(n), BigInt::from(cl.orbit_size));
        if ratio >= *c {
            return Ok(false);
        }
    }
    Ok(true)
}

fn classes_of<'a>(t: &TowerPartition, sets: impl IntoIterator<Item = &'a FloorSet>) -> Result<BTreeSet<&'a str>, TowersError> {
    let mut out = BTreeSet::new();
    for s in sets {
        t.check(s)?;
        out.extend(s.0.keys().map(String::as_str));
    }
    Ok(out)
}

fn floors_in<'a>(s: &'a FloorSet, class: &str) -> impl Iterator<Item = Floor> + 'a {
    s.0.get(class).into_iter().flatten().copied()
}

fn count_in(s: &FloorSet, class: &str) -> usize {
    s.0.get(class).map_or(0, BTreeSet::len)
}

/// Bisections `C_i` with range `U_i` and pairwise disjoint sources inside `O`,
/// assigning the lowest free floors of `O` in order.
pub fn match_subsets(t: &TowerPartition, us: &[FloorSet], o: &FloorSet) -> Result<Vec<TowerBisection>, TowersError> {
    let classes = classes_of(t, us.iter().chain(std::iter::once(o)))?;
    for &c in &classes {
        let need: usize = us.iter().map(|u| count_in(u, c)).sum();
        if need > count_in(o, c) {
            return Err(TowersError::CountViolation(c.to_string()));
        }
    }
    let mut out = vec![TowerBisection::default(); us.len()];
    for &c in &classes {
        let mut pool = floors_in(o, c);
        for (u, b) in us.iter().zip(out.iter_mut()) {
            let pairs: Vec<(Floor, Floor)> = floors_in(u, c).map(|r| (r, pool.next().expect("counted"))).collect();
            if !pairs.is_empty() {
                b.0.insert(c.to_string(), pairs);
            }
        }
    }
    Ok(out)
}

/// Bisection with range exactly `U` and source exactly `V`, pairing floors in ascending order.
pub fn match_equal(t: &TowerPartition, u: &FloorSet, v: &FloorSet) -> Result<TowerBisection, TowersError> {
    let classes = classes_of(t, [u, v])?;
    let mut out = TowerBisection::default();
    for &c in &classes {
        if count_in(u, c) != count_in(v, c) {
            return Err(TowersError::CountViolation(c.to_string()));
        }
        if count_in(u, c) > 0 {
            out.0.insert(c.to_string(), floors_in(u, c).zip(floors_in(v, c)).collect());
        }
    }
    Ok(out)
}

/// Whether `[f]` lies in the positive cone: every orbit sum is non-negative.
/// Classes missing from `f` count as zero.
pub fn positive_cone_check(f: &BTreeMap<ClassId, Vec<i64>>) -> bool {
    f.values().all(|w| w.iter().map(|&x| i128::from(x)).sum::<i128>() >= 0)
}

/// The involution `C ∪ C⁻¹ ∪ id` off `r(C) ∪ s(C)`.
pub fn involution_from_bisection(t: &TowerPartition, b: &TowerBisection) -> Result<TowerElement, TowersError> {
    let mut g = TowerElement::identity(t);
    for (c, pairs) in &b.0 {
        let k = t.size(c)?;
        let range: BTreeSet<Floor> = pairs.iter().map(|p| p.0).collect();
        let source: BTreeSet<Floor> = pairs.iter().map(|p| p.1).collect();
        if range.len() != pairs.len() || source.len() != pairs.len() {
            return Err(TowersError::NotInjective(c.clone()));
        }
        if let Some(&f) = range.iter().chain(&source).find(|&&f| f == 0 || f > k) {
            return Err(TowersError::FloorOutOfRange { class: c.clone(), floor: f, size: k });
        }
        if !range.is_disjoint(&source) {
            return Err(TowersError::OverlapError(c.clone()));
        }
        let perm = g.0.get_mut(c).expect("identity covers every class");
        for &(r, s) in pairs {
            perm[r as usize - 1] = s;
            perm[s as usize - 1] = r;
        }
    }
    Ok(g)
}

/// Extra floors stacked on each floor, per class.
pub type FloorHeights = BTreeMap<ClassId, Vec<i64>>;

/// `G_f`: floor `j` of class `c` gets `heights[c][j−1]` extra copies.
pub fn tower_extend_floors(t: &TowerPartition, heights: &FloorHeights) -> Result<TowerPartition, TowersError> {
    let mut classes = t.classes.clone();
    for cl in &mut classes {
        let Some(h) = heights.get(&cl.class_id) else { continue };
        if h.len() != cl.orbit_size as usize {
            return Err(TowersError::HeightShape { class: cl.class_id.clone(), expected: cl.orbit_size as usize, found: h.len() });
        }
        if h.iter().any(|&x| x < 0) {
            return Err(TowersError::NegativeHeight(cl.class_id.clone()));
        }
        cl.orbit_size += h.iter().sum::<i64>() as u32;
    }
    for c in heights.keys() {
        t.size(c)?;
    }
    Ok(TowerPartition { classes })
}

/// `G_f` with one height per class: orbit size `k·(1 + f)`.
pub fn tower_extend(t: &TowerPartition, f: &BTreeMap<ClassId, i64>) -> Result<TowerPartition, TowersError> {
    let mut per_floor = FloorHeights::new();
    for (c, &h) in f {
        if h < 0 {
            return Err(TowersError::NegativeHeight(c.clone()));
        }
        per_floor.insert(c.clone(), vec![h; t.size(c)? as usize]);
    }
    tower_extend_floors(t, &per_floor)
}

/// Restriction to a full clopen `Y`, with the heights that rebuild `T` from `T|Y`.
/// Every floor outside `Y` is stacked on the lowest `Y`-floor of its class.
pub fn reduce_full_clopen(t: &TowerPartition, y: &FloorSet) -> Result<(TowerPartition, FloorHeights), TowersError> {
    t.check(y)?;
    let mut classes = Vec::new();
    let mut heights = FloorHeights::new();
    for cl in &t.classes {
        let n = y.floors(&cl.class_id).len() as u32;
        if n == 0 {
            return Err(TowersError::NotFull(cl.class_id.clone()));
        }
        let mut h = vec![0i64; n as usize];
        h[0] = i64::from(cl.orbit_size - n);
        heights.insert(cl.class_id.clone(), h);
        classes.push(TowerClass { class_id: cl.class_id.clone(), orbit_size: n });
    }
    Ok((TowerPartition { classes }, heights))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(k: u32) -> TowerPartition {
        TowerPartition::from_sizes(&[("a", k)]).unwrap()
    }

    fn set(floors: &[Floor]) -> FloorSet {
        FloorSet::new().with("a", floors)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn counting_and_measures() {
        let t = one(4);
        assert_eq!(orbit_count(&t, &FloorSet::new(), "a").unwrap(), 0);
        assert_eq!(orbit_count(&t, &set(&[1, 2]), "a").unwrap(), 2);
        assert_eq!(orbit_count(&one(5), &one(5).full(), "a").unwrap(), 5);
        assert!(orbit_count(&t, &set(&[5]), "a").is_err());
        assert!(measure_sup_check(&t, &set(&[1, 2]), &q(3, 5)).unwrap());
        assert!(!measure_sup_check(&t, &t.full(), &q(1, 1)).unwrap());
        let two = TowerPartition::from_sizes(&[("a", 3), ("b", 5)]).unwrap();
        let u = FloorSet::new().with("a", &[1]).with("b", &[1, 2, 3, 4]);
        assert!(!measure_sup_check(&two, &u, &q(1, 2)).unwrap());
    }

    #[test]
    fn matchings() {
        let t = one(4);
        let c = match_subsets(&t, &[set(&[1]), set(&[2])], &set(&[3, 4])).unwrap();
        assert_eq!(c[0].pairs("a"), &[(1, 3)]);
        assert_eq!(c[1].pairs("a"), &[(2, 4)]);
        assert!(match_subsets(&t, &[], &set(&[1])).unwrap().is_empty());
        assert_eq!(
            match_subsets(&one(3), &[set(&[1, 2])], &set(&[3])),
            Err(TowersError::CountViolation("a".into()))
        );
        assert_eq!(match_equal(&t, &set(&[1, 2]), &set(&[3, 4])).unwrap().pairs("a"), &[(1, 3), (2, 4)]);
        assert_eq!(match_equal(&t, &set(&[2]), &set(&[2])).unwrap().pairs("a"), &[(2, 2)]);
        assert!(matches!(match_equal(&t, &set(&[1]), &set(&[2, 3])), Err(TowersError::CountViolation(_))));
    }

    #[test]
    fn cone() {
        let f = |w: Vec<i64>| BTreeMap::from([("a".to_string(), w)]);
        assert!(positive_cone_check(&f(vec![0, 0])));
        assert!(positive_cone_check(&f(vec![1, -1, 1])));
        assert!(!positive_cone_check(&f(vec![1, -2])));
    }

    #[test]
    fn involutions() {
        let t = one(4);
        assert!(involution_from_bisection(&t, &TowerBisection::default()).unwrap().is_identity());
        let b = TowerBisection(BTreeMap::from([("a".to_string(), vec![(1, 3)])]));
        assert_eq!(involution_from_bisection(&t, &b).unwrap().0["a"], vec![3, 2, 1, 4]);
        let b = TowerBisection(BTreeMap::from([("a".to_string(), vec![(1, 2), (3, 4)])]));
        let g = involution_from_bisection(&t, &b).unwrap();
        assert_eq!(g.0["a"], vec![2, 1, 4, 3]);
        assert!(g.compose(&g).is_identity());
        let b = TowerBisection(BTreeMap::from([("a".to_string(), vec![(1, 2), (2, 3)])]));
        assert_eq!(involution_from_bisection(&t, &b), Err(TowersError::OverlapError("a".into())));
    }

    #[test]
    fn extension_and_reduction() {
        let t = TowerPartition::from_sizes(&[("a", 2), ("b", 3)]).unwrap();
        let f = |a: i64, b: i64| BTreeMap::from([("a".to_string(), a), ("b".to_string(), b)]);
        assert_eq!(tower_extend(&t, &f(0, 0)).unwrap(), t);
        assert_eq!(tower_extend(&t, &f(1, 0)).unwrap().sizes(), vec![4, 3]);
        assert_eq!(tower_extend(&t, &f(-1, 0)), Err(TowersError::NegativeHeight("a".into())));

        let (r, h) = reduce_full_clopen(&one(4), &set(&[1])).unwrap();
        assert_eq!((r.sizes(), h["a"].clone()), (vec![1], vec![3]));
        let (r, h) = reduce_full_clopen(&one(5), &set(&[1, 3])).unwrap();
        assert_eq!((r.sizes(), h["a"].clone()), (vec![2], vec![3, 0]));
        assert_eq!(tower_extend_floors(&r, &h).unwrap(), one(5));
        let (r, h) = reduce_full_clopen(&t, &t.full()).unwrap();
        assert_eq!(r, t);
        assert!(h.values().flatten().all(|&x| x == 0));
        assert_eq!(reduce_full_clopen(&t, &FloorSet::new().with("a", &[1])), Err(TowersError::NotFull("b".into())));
    }
}
