//! Homology of large sparse complexes: unit-pivot elimination first, dense
//! Smith form only on the coordinates that survive it.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::matrix::IntMatrix;
use super::presentation::{cokernel_presentation, AbelianGroupPresentation, BasisWitness, SparseRow};
use super::snf::{kernel_basis, smith_normal_form, solve_with, SmithDecomposition};
use super::sparse::{from_big, to_big, Coeff, SparseVec, UnitPivotReducer};
use super::ZmatError;

/// `ℤ^dim / span(rows)`. Coordinates no row touches split off as free summands
/// so the dense step only sees the touched block.
pub fn sparse_cokernel(dim: usize, rows: &[SparseRow]) -> AbelianGroupPresentation {
    let mut touched: Vec<usize> = rows.iter().flat_map(|r| r.iter().map(|(i, _)| *i)).collect();
    touched.sort_unstable();
    touched.dedup();
    if touched.is_empty() {
        return AbelianGroupPresentation::free(dim);
    }
    let local: HashMap<usize, usize> = touched.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut m = IntMatrix::zeros(touched.len(), rows.len());
    for (j, r) in rows.iter().enumerate() {
        for (i, c) in r {
            let k = local[i];
            let v = m.get(k, j) + c;
            m.set(k, j, v);
        }
    }
    let dense = cokernel_presentation(&m);
    let lift = |r: &SparseRow| -> SparseRow { r.iter().map(|(k, c)| (touched[*k], c.clone())).collect() };
    let mut coordinates: Vec<SparseRow> = dense.witness().coordinates().iter().map(lift).collect();
    let mut generators: Vec<SparseRow> = dense.witness().generators().iter().map(lift).collect();
    let untouched: Vec<usize> = (0..dim).filter(|i| !local.contains_key(i)).collect();
    for &i in &untouched {
        coordinates.push(vec![(i, BigInt::from(1))]);
        generators.push(vec![(i, BigInt::from(1))]);
    }
    AbelianGroupPresentation::with_witness(
        dense.torsion().to_vec(),
        dense.free_rank() + untouched.len(),
        BasisWitness::new(dim, coordinates, generators),
    )
    .expect("cokernel invariants are valid")
}

/// `ℤ^dim / span(generators)` computed by sparse elimination.
#[derive(Clone, Debug)]
pub struct SparseQuotient<T> {
    reducer: UnitPivotReducer<T>,
    free: Vec<usize>,
    free_index: HashMap<usize, usize>,
    group: AbelianGroupPresentation,
}

impl<T: Coeff> SparseQuotient<T> {
    pub fn new(
        dim: usize,
        generators: impl IntoIterator<Item = SparseVec<T>>,
        priority: &impl Fn(usize) -> i64,
    ) -> Result<Self, ZmatError> {
        let mut reducer = UnitPivotReducer::new(dim);
        for g in generators {
            reducer.insert(&g, priority)?;
        }
        reducer.finish(priority)?;
        let free = reducer.free_rows();
        let free_index: HashMap<usize, usize> = free.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let rows: Vec<SparseRow> =
            reducer.residual().iter().map(|v| to_big(v).into_iter().map(|(i, c)| (free_index[&i], c)).collect()).collect();
        let group = sparse_cokernel(free.len(), &rows);
        Ok(SparseQuotient { reducer, free, free_index, group })
    }

    pub fn group(&self) -> &AbelianGroupPresentation {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.reducer.dim()
    }

    pub fn reduce(&self, v: &[(usize, T)]) -> Result<Vec<BigInt>, ZmatError> {
        let r = self.reducer.reduce(v)?;
        let local: SparseRow = r.iter().map(|(i, c)| (self.free_index[i], c.to_bigint())).collect();
        self.group.reduce_sparse(&local)
    }

    /// Ambient representative of canonical generator `i`.
    pub fn generator(&self, i: usize) -> SparseRow {
        self.group.generator_sparse(i).iter().map(|(k, c)| (self.free[*k], c.clone())).collect()
    }
}

/// Cycles modulo boundaries, `ker ∂ / im ∂'`, for a chain group ℤ^dim.
///
/// Boundaries `∂'` arrive as relation vectors; the outgoing boundary `∂` as its
/// columns. Relations must be cycles.
#[derive(Clone, Debug)]
pub struct CycleQuotient<T> {
    relations: UnitPivotReducer<T>,
    kernel: UnitPivotReducer<T>,
    // kernel lattice basis over the free coordinates: unit vectors, then a dense block
    unit_index: HashMap<usize, usize>,
    unit_rows: Vec<usize>,
    touched: Vec<usize>,
    touched_index: HashMap<usize, usize>,
    dense_basis: Vec<Vec<BigInt>>,
    dense_snf: Option<SmithDecomposition>,
    group: AbelianGroupPresentation,
}

impl<T: Coeff> CycleQuotient<T> {
    pub fn new(
        dim: usize,
        target_dim: usize,
        relations: impl IntoIterator<Item = SparseVec<T>>,
        boundary: impl Fn(usize) -> SparseVec<T>,
        priority: &impl Fn(usize) -> i64,
    ) -> Result<Self, ZmatError> {
        let mut rel = UnitPivotReducer::new(dim);
        for r in relations {
            rel.insert(&r, priority)?;
        }
        rel.finish(priority)?;

        let survivors = rel.free_rows();
        let mut rows: Vec<SparseVec<T>> = vec![Vec::new(); target_dim];
        for &e in &survivors {
            for (v, c) in boundary(e) {
                if v >= target_dim {
                    return Err(ZmatError::DimensionMismatch { expected: target_dim, found: v + 1 });
                }
                rows[v].push((e, c));
            }
        }
        let mut kernel = UnitPivotReducer::new(dim);
        for row in rows.into_iter().filter(|r| !r.is_empty()) {
            kernel.insert(&row, priority)?;
        }
        kernel.finish(priority)?;

        let free: Vec<usize> = survivors.into_iter().filter(|&e| !kernel.is_pivot(e)).collect();
        let mut touched: Vec<usize> = kernel.residual().iter().flat_map(|r| r.iter().map(|(i, _)| *i)).collect();
        touched.sort_unstable();
        touched.dedup();
        let touched_index: HashMap<usize, usize> = touched.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let unit_rows: Vec<usize> = free.iter().copied().filter(|e| !touched_index.contains_key(e)).collect();
        let unit_index: HashMap<usize, usize> = unit_rows.iter().enumerate().map(|(k, &i)| (i, k)).collect();

        let (dense_basis, dense_snf) = if touched.is_empty() {
            (Vec::new(), None)
        } else {
            let res = kernel.residual();
            let mut m = IntMatrix::zeros(res.len(), touched.len());
            for (i, r) in res.iter().enumerate() {
                for (e, c) in r {
                    m.set(i, touched_index[e], c.to_bigint());
                }
            }
            let basis = kernel_basis(&m);
            let kmat = IntMatrix::from_columns(touched.len(), &basis)?;
            (basis, Some(smith_normal_form(&kmat)))
        };

        let mut cq = CycleQuotient {
            relations: rel,
            kernel,
            unit_index,
            unit_rows,
            touched,
            touched_index,
            dense_basis,
            dense_snf,
            group: AbelianGroupPresentation::trivial(),
        };
        let rank = cq.unit_rows.len() + cq.dense_basis.len();
        let coords: Result<Vec<SparseRow>, ZmatError> =
            cq.relations.residual().iter().map(|r| cq.kernel_coordinates(r)).collect();
        cq.group = sparse_cokernel(rank, &coords?);
        Ok(cq)
    }

    pub fn group(&self) -> &AbelianGroupPresentation {
        &self.group
    }

    /// Coordinates of a cycle supported off the relation pivots, in the kernel basis.
    fn kernel_coordinates(&self, z: &[(usize, T)]) -> Result<SparseRow, ZmatError> {
        let mut out: SparseRow = Vec::new();
        let mut dense = vec![BigInt::zero(); self.touched.len()];
        for (e, c) in z {
            if let Some(k) = self.unit_index.get(e) {
                out.push((*k, c.to_bigint()));
            } else if let Some(k) = self.touched_index.get(e) {
                dense[*k] = c.to_bigint();
            }
        }
        if let Some(snf) = &self.dense_snf {
            let x = solve_with(snf, &dense).ok_or(ZmatError::NotACycle)?;
            let base = self.unit_rows.len();
            out.extend(x.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (base + k, c)));
        } else if dense.iter().any(|c| !c.is_zero()) {
            return Err(ZmatError::NotACycle);
        }
        Ok(out)
    }

    /// Canonical coordinates of the class of the cycle `z`.
    pub fn reduce_cycle(&self, z: &[(usize, T)]) -> Result<Vec<BigInt>, ZmatError> {
        let r = self.relations.reduce(z)?;
        let k = self.kernel_coordinates(&r)?;
        self.group.reduce_sparse(&k)
    }

    /// A cycle representing canonical generator `i`.
    pub fn generator(&self, i: usize) -> Result<SparseVec<BigInt>, ZmatError> {
        let c = self.group.generator_sparse(i);
        let mut y: HashMap<usize, BigInt> = HashMap::new();
        let base = self.unit_rows.len();
        for (k, v) in c {
            if *k < base {
                *y.entry(self.unit_rows[*k]).or_insert_with(BigInt::zero) += v;
            } else {
                for (t, b) in self.dense_basis[*k - base].iter().enumerate() {
                    if !b.is_zero() {
                        *y.entry(self.touched[t]).or_insert_with(BigInt::zero) += v * b;
                    }
                }
            }
        }
        y.retain(|_, v| !v.is_zero());
        self.kernel.map_coeffs().back_substitute(&mut y)?;
        let mut out: SparseVec<BigInt> = y.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out.sort_unstable_by_key(|(i, _)| *i);
        Ok(out)
    }
}

/// Converts sparse machine-integer inputs when a computation has to be redone in `BigInt`.
pub fn widen(v: &[(usize, i64)]) -> SparseVec<BigInt> {
    to_big(v)
}

pub fn narrow(v: &[(usize, BigInt)]) -> Result<SparseVec<i64>, ZmatError> {
    from_big(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prio(i: usize) -> i64 {
        i as i64
    }

    #[test]
    fn cokernel_splits_untouched() {
        let rows = vec![vec![(1usize, BigInt::from(2))]];
        let g = sparse_cokernel(3, &rows);
        assert_eq!(g.to_string(), "Z/2Z + Z^2");
    }

    #[test]
    fn sparse_quotient_matches_dense() {
        // ℤ³ / ⟨(2,0,0),(0,1,1)⟩ ≅ ℤ/2 ⊕ ℤ
        let gens: Vec<SparseVec<i64>> = vec![vec![(0, 2)], vec![(1, 1), (2, 1)]];
        let q = SparseQuotient::new(3, gens, &prio).unwrap();
        assert_eq!(q.group().to_string(), "Z/2Z + Z");
        assert_eq!(q.reduce(&[(1, 1)]).unwrap(), q.reduce(&[(2, -1)]).unwrap());
        assert_eq!(q.reduce(&[(0, 2)]).unwrap(), q.group().zero());
    }

    #[test]
    fn circle_homology() {
        // triangle boundary: edges 0:(a→b) 1:(b→c) 2:(a→c); H₁ = ℤ, no relations
        let bd = |e: usize| -> SparseVec<i64> {
            match e {
                0 => vec![(0, -1), (1, 1)],
                1 => vec![(1, -1), (2, 1)],
                _ => vec![(0, -1), (2, 1)],
            }
        };
        let cq = CycleQuotient::new(3, 3, Vec::<SparseVec<i64>>::new(), bd, &prio).unwrap();
        assert_eq!(cq.group().to_string(), "Z");
        let g = cq.generator(0).unwrap();
        let z: SparseVec<i64> = narrow(&g).unwrap();
        assert_eq!(cq.reduce_cycle(&z).unwrap(), vec![BigInt::from(1)]);
        // filling the triangle kills it
        let fill: Vec<SparseVec<i64>> = vec![vec![(0, 1), (1, 1), (2, -1)]];
        let cq = CycleQuotient::new(3, 3, fill, bd, &prio).unwrap();
        assert!(cq.group().is_trivial());
    }
}
