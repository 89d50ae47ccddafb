use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::ZmatError;

pub type SparseRow = Vec<(usize, BigInt)>;

/// Change-of-basis record between ambient coordinates and canonical coordinates.
///
/// `coordinates[i]` is the functional reading canonical coordinate `i` off an
/// ambient vector; `generators[i]` is an ambient representative of the `i`-th
/// canonical generator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisWitness {
    ambient_dim: usize,
    coordinates: Vec<SparseRow>,
    generators: Vec<SparseRow>,
}

impl BasisWitness {
    pub fn new(ambient_dim: usize, coordinates: Vec<SparseRow>, generators: Vec<SparseRow>) -> Self {
        BasisWitness { ambient_dim, coordinates, generators }
    }

    pub fn coordinates(&self) -> &[SparseRow] {
        &self.coordinates
    }

    pub fn generators(&self) -> &[SparseRow] {
        &self.generators
    }

    pub fn identity(n: usize) -> Self {
        let unit = |i| vec![(i, BigInt::one())];
        BasisWitness { ambient_dim: n, coordinates: (0..n).map(unit).collect(), generators: (0..n).map(unit).collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
}

/// Finitely generated abelian group `ℤ/d₁ ⊕ … ⊕ ℤ/d_t ⊕ ℤ^r` with `d₁ | d₂ | …`.
///
/// Equality compares the isomorphism type only; the witness is ignored.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbelianGroupPresentation {
    torsion: Vec<BigInt>,
    free_rank: usize,
    witness: BasisWitness,
}

impl PartialEq for AbelianGroupPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.torsion == other.torsion && self.free_rank == other.free_rank
    }
}

impl Eq for AbelianGroupPresentation {}

fn check_invariants(torsion: &[BigInt]) -> Result<(), ZmatError> {
    if let Some(d) = torsion.iter().find(|d| *d < &BigInt::from(2)) {
        return Err(ZmatError::InvalidInvariants(format!("invariant factor {d} is below 2")));
    }
    for w in torsion.windows(2) {
        if !w[1].is_multiple_of(&w[0]) {
            return Err(ZmatError::InvalidInvariants(format!("{} does not divide {}", w[0], w[1])));
        }
    }
    Ok(())
}

impl AbelianGroupPresentation {
    /// Group given directly by its invariants, with the identity witness.
    pub fn from_invariants(torsion: Vec<BigInt>, free_rank: usize) -> Result<Self, ZmatError> {
        check_invariants(&torsion)?;
        let n = torsion.len() + free_rank;
        Ok(AbelianGroupPresentation { torsion, free_rank, witness: BasisWitness::identity(n) })
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupPresentation { torsion: Vec::new(), free_rank: rank, witness: BasisWitness::identity(rank) }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn with_witness(torsion: Vec<BigInt>, free_rank: usize, witness: BasisWitness) -> Result<Self, ZmatError> {
        check_invariants(&torsion)?;
        let n = torsion.len() + free_rank;
        if witness.coordinates.len() != n || witness.generators.len() != n {
            return Err(ZmatError::DimensionMismatch { expected: n, found: witness.coordinates.len() });
        }
        Ok(AbelianGroupPresentation { torsion, free_rank, witness })
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn witness(&self) -> &BasisWitness {
        &self.witness
    }

    /// Number of canonical coordinates.
    pub fn num_coords(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.witness.ambient_dim
    }

    pub fn is_trivial(&self) -> bool {
        self.num_coords() == 0
    }

    /// Group order, or `None` when the free rank is positive.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Per-coordinate moduli: the invariant factors, then zero for each free coordinate.
    pub fn moduli(&self) -> Vec<BigInt> {
        self.torsion.iter().cloned().chain(std::iter::repeat_n(BigInt::zero(), self.free_rank)).collect()
    }

    pub fn normalize(&self, coords: &mut [BigInt]) {
        for (c, d) in coords.iter_mut().zip(&self.torsion) {
            *c = c.mod_floor(d);
        }
    }

    pub fn reduce_element(&self, v: &[BigInt]) -> Result<Vec<BigInt>, ZmatError> {
        if v.len() != self.witness.ambient_dim {
            return Err(ZmatError::DimensionMismatch { expected: self.witness.ambient_dim, found: v.len() });
        }
        let mut out: Vec<BigInt> = self
            .witness
            .coordinates
            .iter()
            .map(|row| row.iter().filter(|(i, _)| !v[*i].is_zero()).map(|(i, c)| c * &v[*i]).sum())
            .collect();
        self.normalize(&mut out);
        Ok(out)
    }

    /// Reduces a sparse ambient vector.
    pub fn reduce_sparse(&self, v: &[(usize, BigInt)]) -> Result<Vec<BigInt>, ZmatError> {
        let mut dense = vec![BigInt::zero(); self.witness.ambient_dim];
        for (i, c) in v {
            if *i >= dense.len() {
                return Err(ZmatError::DimensionMismatch { expected: dense.len(), found: *i + 1 });
            }
            dense[*i] += c;
        }
        self.reduce_element(&dense)
    }

    /// Ambient representative of canonical generator `i`.
    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.witness.ambient_dim];
        for (j, c) in &self.witness.generators[i] {
            v[*j] = c.clone();
        }
        v
    }

    pub fn generator_sparse(&self, i: usize) -> &[(usize, BigInt)] {
        &self.witness.generators[i]
    }

    /// Ambient representative of an element given in canonical coordinates.
    pub fn lift(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.witness.ambient_dim];
        for (c, g) in coords.iter().zip(&self.witness.generators) {
            if c.is_zero() {
                continue;
            }
            for (j, x) in g {
                v[*j] += c * x;
            }
        }
        v
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.normalize(&mut out);
        out
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.normalize(&mut out);
        out
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.num_coords()]
    }

    pub fn same_type(&self, other: &Self) -> bool {
        self == other
    }
}

impl fmt::Display for AbelianGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}Z")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Presentation of `ℤ^rows / column-span(m)`.
pub fn cokernel_presentation(m: &IntMatrix) -> AbelianGroupPresentation {
    let d = smith_normal_form(m);
    let rows = m.rows();
    let sparse = |v: Vec<BigInt>| -> SparseRow { v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect() };
    let mut torsion = Vec::new();
    let mut coordinates = Vec::new();
    let mut generators = Vec::new();
    for i in 0..d.rank {
        let di = d.s.get(i, i);
        if di.abs().is_one() {
            continue;
        }
        torsion.push(di.clone());
        coordinates.push(sparse(d.p.row(i).to_vec()));
        generators.push(sparse(d.p_inv.column(i)));
    }
    for i in d.rank..rows {
        coordinates.push(sparse(d.p.row(i).to_vec()));
        generators.push(sparse(d.p_inv.column(i)));
    }
    AbelianGroupPresentation {
        torsion,
        free_rank: rows - d.rank,
        witness: BasisWitness { ambient_dim: rows, coordinates, generators },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmat::matrix::big_vec;

    fn i_minus_at(a: &[Vec<i64>]) -> IntMatrix {
        let n = a.len();
        let rows: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| i64::from(i == j) - a[j][i]).collect()).collect();
        IntMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn full_three_shift() {
        let g = cokernel_presentation(&i_minus_at(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]]));
        assert_eq!(g.torsion(), &big_vec(&[2])[..]);
        assert_eq!(g.free_rank(), 0);
        assert_eq!(g.reduce_element(&big_vec(&[1, 0, 0])).unwrap(), big_vec(&[1]));
        assert_eq!(g.to_string(), "Z/2Z");
    }

    #[test]
    fn zero_relations() {
        let g = cokernel_presentation(&IntMatrix::zeros(2, 2));
        assert_eq!(g, AbelianGroupPresentation::free(2));
    }

    #[test]
    fn designated_example() {
        let m = i_minus_at(&[vec![1, 1, 0], vec![1, 1, 1], vec![0, 1, 1]]);
        let g = cokernel_presentation(&m);
        assert!(g.torsion().is_empty());
        assert_eq!(g.free_rank(), 1);
        for j in 0..3 {
            assert_eq!(g.reduce_element(&m.column(j)).unwrap(), big_vec(&[0]));
        }
        let e1 = g.reduce_element(&big_vec(&[1, 0, 0])).unwrap();
        let e3 = g.reduce_element(&big_vec(&[0, 0, 1])).unwrap();
        assert_eq!(g.add(&e1, &e3), big_vec(&[0]));
        assert_eq!(g.reduce_element(&g.generator(0)).unwrap(), big_vec(&[1]));
    }

    #[test]
    fn trivial_group_coordinates() {
        let g = cokernel_presentation(&IntMatrix::identity(2));
        assert!(g.is_trivial());
        assert!(g.reduce_element(&big_vec(&[5, -3])).unwrap().is_empty());
        assert_eq!(g.to_string(), "0");
    }

    #[test]
    fn invariants_checked() {
        assert!(AbelianGroupPresentation::from_invariants(big_vec(&[2, 3]), 0).is_err());
        assert!(AbelianGroupPresentation::from_invariants(big_vec(&[1]), 0).is_err());
        let g = AbelianGroupPresentation::from_invariants(big_vec(&[2, 4]), 1).unwrap();
        assert_eq!(g.to_string(), "Z/2Z + Z/4Z + Z");
        assert_eq!(g.order(), None);
    }
}
