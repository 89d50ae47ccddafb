//! Sparse elimination over ℤ restricted to unit pivots.
//!
//! Boundary matrices of the truncated complexes are very sparse with ±1
//! entries, so most of the work is done by pivoting on units without any
//! fill-in control beyond a caller-supplied priority. Whatever cannot be
//! pivoted on a unit is handed to the dense Smith form.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ZmatError;

/// Coefficient ring used by the sparse engine. Machine integers report overflow
/// instead of wrapping so callers can retry with arbitrary precision.
pub trait Coeff: Clone + Debug + PartialEq {
    fn null() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn vanishes(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

impl Coeff for i64 {
    fn null() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn null() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Sorted sparse vector without explicit zeros.
pub type SparseVec<T> = Vec<(usize, T)>;

pub fn to_big<T: Coeff>(v: &[(usize, T)]) -> SparseVec<BigInt> {
    v.iter().map(|(i, c)| (*i, c.to_bigint())).collect()
}

pub fn from_big<T: Coeff>(v: &[(usize, BigInt)]) -> Result<SparseVec<T>, ZmatError> {
    v.iter().map(|(i, c)| T::from_bigint(c).map(|c| (*i, c)).ok_or(ZmatError::Overflow)).collect()
}

/// Canonical sparse form: sorted, duplicates merged, zeros dropped.
pub fn normalize<T: Coeff>(mut v: SparseVec<T>) -> Result<SparseVec<T>, ZmatError> {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec<T> = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d = d.add(&c).ok_or(ZmatError::Overflow)?,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.vanishes());
    Ok(out)
}

#[derive(Clone, Debug)]
struct Pivot<T> {
    row: usize,
    unit: T,
    vec: SparseVec<T>,
}

/// Incremental echelon form of a lattice in ℤ^dim built from unit pivots.
///
/// Pivot `j` vanishes at the pivot rows of all earlier pivots, so reducing a
/// vector visits pivots in increasing order exactly once each.
#[derive(Clone, Debug)]
pub struct UnitPivotReducer<T> {
    dim: usize,
    pivots: Vec<Pivot<T>>,
    order_of_row: Vec<u32>,
    residual: Vec<SparseVec<T>>,
}

const NO_PIVOT: u32 = u32::MAX;

/// Outcome of inserting a vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inserted {
    Dependent,
    Pivot(usize),
    Residual,
}

impl<T: Coeff> UnitPivotReducer<T> {
    pub fn new(dim: usize) -> Self {
        UnitPivotReducer { dim, pivots: Vec::new(), order_of_row: vec![NO_PIVOT; dim], residual: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_pivots(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, row: usize) -> bool {
        self.order_of_row[row] != NO_PIVOT
    }

    pub fn residual(&self) -> &[SparseVec<T>] {
        &self.residual
    }

    /// Coordinates that carry no pivot, ascending.
    pub fn free_rows(&self) -> Vec<usize> {
        (0..self.dim).filter(|&r| !self.is_pivot(r)).collect()
    }

    /// Reduces `v` modulo the pivot vectors; the result vanishes on every pivot row.
    pub fn reduce(&self, v: &[(usize, T)]) -> Result<SparseVec<T>, ZmatError> {
        let mut acc: HashMap<usize, T> = HashMap::with_capacity(v.len() * 2);
        let mut heap = BinaryHeap::new();
        for (i, c) in v {
            if *i >= self.dim {
                return Err(ZmatError::DimensionMismatch { expected: self.dim, found: *i + 1 });
            }
            if c.vanishes() {
                continue;
            }
            let slot = acc.entry(*i).or_insert_with(T::null);
            *slot = slot.add(c).ok_or(ZmatError::Overflow)?;
            let o = self.order_of_row[*i];
            if o != NO_PIVOT {
                heap.push(Reverse(o));
            }
        }
        let mut last = None;
        while let Some(Reverse(o)) = heap.pop() {
            if last == Some(o) {
                continue;
            }
            last = Some(o);
            let p = &self.pivots[o as usize];
            let c = match acc.get(&p.row) {
                Some(c) if !c.vanishes() => c.clone(),
                _ => continue,
            };
            let factor = c.mul(&p.unit).ok_or(ZmatError::Overflow)?;
            for (i, x) in &p.vec {
                let sub = factor.mul(x).ok_or(ZmatError::Overflow)?;
                let slot = acc.entry(*i).or_insert_with(T::null);
                let was_zero = slot.vanishes();
                *slot = slot.add(&sub.neg().ok_or(ZmatError::Overflow)?).ok_or(ZmatError::Overflow)?;
                let oi = self.order_of_row[*i];
                if was_zero && oi != NO_PIVOT && oi > o {
                    heap.push(Reverse(oi));
                }
            }
            debug_assert!(acc[&p.row].vanishes());
        }
        let mut out: SparseVec<T> = acc.into_iter().filter(|(_, c)| !c.vanishes()).collect();
        out.sort_unstable_by_key(|(i, _)| *i);
        Ok(out)
    }

    fn choose(&self, v: &[(usize, T)], priority: &impl Fn(usize) -> i64) -> Option<usize> {
        v.iter().enumerate().filter(|(_, (_, c))| c.is_unit()).max_by_key(|(_, (i, _))| priority(*i)).map(|(k, _)| k)
    }

    fn make_pivot(&mut self, v: SparseVec<T>, k: usize) -> usize {
        let (row, unit) = v[k].clone();
        let order = self.pivots.len();
        self.order_of_row[row] = order as u32;
        self.pivots.push(Pivot { row, unit, vec: v });
        order
    }

    /// Inserts `v`, pivoting on the unit entry of highest priority when one exists.
    pub fn insert(&mut self, v: &[(usize, T)], priority: &impl Fn(usize) -> i64) -> Result<Inserted, ZmatError> {
        let r = self.reduce(v)?;
        if r.is_empty() {
            return Ok(Inserted::Dependent);
        }
        match self.choose(&r, priority) {
            Some(k) => Ok(Inserted::Pivot(self.make_pivot(r, k))),
            None => {
                self.residual.push(r);
                Ok(Inserted::Residual)
            }
        }
    }

    /// Re-reduces residual vectors until none of them exposes a new unit pivot.
    pub fn finish(&mut self, priority: &impl Fn(usize) -> i64) -> Result<(), ZmatError> {
        loop {
            let pending = std::mem::take(&mut self.residual);
            let mut changed = false;
            for v in pending {
                let r = self.reduce(&v)?;
                if r.is_empty() {
                    changed |= true;
                    continue;
                }
                match self.choose(&r, priority) {
                    Some(k) => {
                        self.make_pivot(r, k);
                        changed = true;
                    }
                    None => self.residual.push(r),
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    /// Completes `y` to a vector orthogonal to every pivot vector.
    ///
    /// Entries of `y` at pivot rows are overwritten; the other entries are kept.
    pub fn back_substitute(&self, y: &mut HashMap<usize, T>) -> Result<(), ZmatError> {
        for p in self.pivots.iter().rev() {
            let mut s = T::null();
            for (i, x) in &p.vec {
                if *i == p.row {
                    continue;
                }
                if let Some(yi) = y.get(i) {
                    s = s.add(&x.mul(yi).ok_or(ZmatError::Overflow)?).ok_or(ZmatError::Overflow)?;
                }
            }
            let val = s.mul(&p.unit).and_then(|v| v.neg()).ok_or(ZmatError::Overflow)?;
            if val.vanishes() {
                y.remove(&p.row);
            } else {
                y.insert(p.row, val);
            }
        }
        Ok(())
    }
}

impl<T: Coeff> UnitPivotReducer<T> {
    pub fn map_coeffs(&self) -> UnitPivotReducer<BigInt> {
        UnitPivotReducer {
            dim: self.dim,
            pivots: self
                .pivots
                .iter()
                .map(|p| Pivot { row: p.row, unit: p.unit.to_bigint(), vec: to_big(&p.vec) })
                .collect(),
            order_of_row: self.order_of_row.clone(),
            residual: self.residual.iter().map(|v| to_big(v)).collect(),
        }
    }
}

pub fn sparse_from_dense(v: &[BigInt]) -> SparseVec<BigInt> {
    v.iter().enumerate().filter(|(_, c)| !Zero::is_zero(*c)).map(|(i, c)| (i, c.clone())).collect()
}

pub fn dense_from_sparse<T: Coeff>(dim: usize, v: &[(usize, T)]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); dim];
    for (i, c) in v {
        out[*i] += c.to_bigint();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[(usize, i64)]) -> SparseVec<i64> {
        v.to_vec()
    }

    #[test]
    fn reduce_and_substitute() {
        let prio = |i: usize| i as i64;
        let mut r = UnitPivotReducer::<i64>::new(4);
        assert_eq!(r.insert(&sv(&[(0, 1), (1, -1)]), &prio).unwrap(), Inserted::Pivot(0));
        assert_eq!(r.insert(&sv(&[(1, 1), (2, -1)]), &prio).unwrap(), Inserted::Pivot(1));
        assert_eq!(r.insert(&sv(&[(0, 1), (2, -1)]), &prio).unwrap(), Inserted::Dependent);
        assert_eq!(r.insert(&sv(&[(3, 2)]), &prio).unwrap(), Inserted::Residual);
        assert_eq!(r.reduce(&sv(&[(0, 1)])).unwrap(), sv(&[(0, 1)]));
        assert_eq!(r.free_rows(), vec![0, 3]);

        let mut y = HashMap::from([(0usize, 5i64)]);
        r.back_substitute(&mut y).unwrap();
        // both rows vanish on y, so y is constant on 0..3
        assert_eq!(y.get(&1), Some(&5));
        assert_eq!(y.get(&2), Some(&5));
    }

    #[test]
    fn finish_promotes_units() {
        let prio = |_: usize| 0;
        let mut r = UnitPivotReducer::<i64>::new(2);
        r.insert(&sv(&[(0, 2), (1, 3)]), &prio).unwrap();
        r.insert(&sv(&[(0, 1), (1, 1)]), &prio).unwrap();
        r.finish(&prio).unwrap();
        assert_eq!(r.num_pivots(), 2);
        assert!(r.residual().is_empty());
    }

    #[test]
    fn overflow_is_reported() {
        let prio = |i: usize| i as i64;
        let mut r = UnitPivotReducer::<i64>::new(2);
        r.insert(&sv(&[(0, i64::MAX), (1, 1)]), &prio).unwrap();
        assert!(matches!(r.reduce(&sv(&[(1, i64::MAX), (0, 5)])), Err(ZmatError::Overflow)));
    }
}
