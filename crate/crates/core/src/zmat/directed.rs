use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::IntMatrix;
use super::presentation::{cokernel_presentation, AbelianGroupPresentation};
use super::snf::kernel_basis;
use super::ZmatError;

/// Directed system `G₀ → G₁ → …`; map `k` acts on canonical coordinates of group `k`.
#[derive(Clone, Debug, Default)]
pub struct DirectedGroupSystem {
    groups: Vec<AbelianGroupPresentation>,
    maps: Vec<IntMatrix>,
}

impl DirectedGroupSystem {
    pub fn new(first: AbelianGroupPresentation) -> Self {
        DirectedGroupSystem { groups: vec![first], maps: Vec::new() }
    }

    /// Appends a stage together with the map from the current last stage.
    pub fn push(&mut self, group: AbelianGroupPresentation, map: IntMatrix) -> Result<(), ZmatError> {
        let prev = self.groups.last().map_or(0, AbelianGroupPresentation::num_coords);
        if map.cols() != prev {
            return Err(ZmatError::DimensionMismatch { expected: prev, found: map.cols() });
        }
        if map.rows() != group.num_coords() {
            return Err(ZmatError::DimensionMismatch { expected: group.num_coords(), found: map.rows() });
        }
        self.groups.push(group);
        self.maps.push(map);
        Ok(())
    }

    pub fn groups(&self) -> &[AbelianGroupPresentation] {
        &self.groups
    }

    pub fn maps(&self) -> &[IntMatrix] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn map_is_isomorphism(&self, k: usize) -> bool {
        is_isomorphism(&self.groups[k], &self.groups[k + 1], &self.maps[k])
    }
}

fn relation_matrix(g: &AbelianGroupPresentation) -> IntMatrix {
    let n = g.num_coords();
    let t = g.torsion();
    let mut m = IntMatrix::zeros(n, t.len());
    for (i, d) in t.iter().enumerate() {
        m.set(i, i, d.clone());
    }
    m
}

/// Whether `f`, given on canonical coordinates, induces an isomorphism `src → dst`.
pub fn is_isomorphism(src: &AbelianGroupPresentation, dst: &AbelianGroupPresentation, f: &IntMatrix) -> bool {
    if src != dst {
        return false;
    }
    let stacked = f.hcat(&relation_matrix(dst)).expect("row counts agree");
    if !cokernel_presentation(&stacked).is_trivial() {
        return false;
    }
    let moduli = src.moduli();
    kernel_basis(&stacked).iter().all(|v| {
        v[..src.num_coords()]
            .iter()
            .zip(&moduli)
            .all(|(x, d)| if d.is_zero() { x.is_zero() } else { x.is_multiple_of(d) })
    })
}

/// Builds the matrix of a homomorphism `src → dst` from its action on ambient vectors.
pub fn induced_matrix(
    src: &AbelianGroupPresentation,
    dst: &AbelianGroupPresentation,
    mut f: impl FnMut(&[BigInt]) -> Vec<BigInt>,
) -> Result<IntMatrix, ZmatError> {
    let cols: Result<Vec<_>, _> = (0..src.num_coords()).map(|i| dst.reduce_element(&f(&src.generator(i)))).collect();
    IntMatrix::from_columns(dst.num_coords(), &cols?)
}

/// First stage from which `window` consecutive connecting maps are isomorphisms.
pub fn colimit_stabilize(
    sys: &DirectedGroupSystem,
    window: usize,
) -> Result<(AbelianGroupPresentation, usize), ZmatError> {
    if sys.len() < window + 1 {
        return Err(ZmatError::Unstabilized { stages: sys.len(), window });
    }
    if window == 0 {
        return Ok((sys.groups[0].clone(), 0));
    }
    let mut run = 0;
    for k in 0..sys.maps.len() {
        run = if sys.map_is_isomorphism(k) { run + 1 } else { 0 };
        if run == window {
            let start = k + 1 - window;
            return Ok((sys.groups[start].clone(), start));
        }
    }
    Err(ZmatError::Unstabilized { stages: sys.len(), window })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmat::matrix::big_vec;

    fn scalar(k: i64) -> IntMatrix {
        IntMatrix::from_rows(&[vec![k]]).unwrap()
    }

    #[test]
    fn constant_system() {
        let mut sys = DirectedGroupSystem::new(AbelianGroupPresentation::free(1));
        for _ in 0..4 {
            sys.push(AbelianGroupPresentation::free(1), scalar(1)).unwrap();
        }
        let (g, level) = colimit_stabilize(&sys, 3).unwrap();
        assert_eq!((g, level), (AbelianGroupPresentation::free(1), 0));
    }

    #[test]
    fn zero_map_first() {
        let mut sys = DirectedGroupSystem::new(AbelianGroupPresentation::free(1));
        sys.push(AbelianGroupPresentation::free(1), scalar(0)).unwrap();
        for _ in 0..3 {
            sys.push(AbelianGroupPresentation::free(1), scalar(1)).unwrap();
        }
        assert_eq!(colimit_stabilize(&sys, 3).unwrap().1, 1);
    }

    #[test]
    fn too_few_stages() {
        let mut sys = DirectedGroupSystem::new(AbelianGroupPresentation::free(1));
        sys.push(AbelianGroupPresentation::free(1), scalar(2)).unwrap();
        sys.push(AbelianGroupPresentation::free(1), scalar(1)).unwrap();
        assert!(matches!(colimit_stabilize(&sys, 3), Err(ZmatError::Unstabilized { .. })));
        assert!(matches!(colimit_stabilize(&sys, 1), Ok((_, 1))));
    }

    #[test]
    fn torsion_isomorphisms() {
        let z4 = AbelianGroupPresentation::from_invariants(big_vec(&[4]), 0).unwrap();
        assert!(is_isomorphism(&z4, &z4, &scalar(3)));
        assert!(!is_isomorphism(&z4, &z4, &scalar(2)));
        assert!(is_isomorphism(&z4, &z4, &scalar(-3)));
        let z = AbelianGroupPresentation::free(1);
        assert!(is_isomorphism(&z, &z, &scalar(-1)));
        assert!(!is_isomorphism(&z, &z, &scalar(2)));
        let z2z = AbelianGroupPresentation::from_invariants(big_vec(&[2]), 1).unwrap();
        // (a, b) -> (a + b, b) is an automorphism; (a, b) -> (a, 2b) is not onto
        let shear = IntMatrix::from_rows(&[vec![1i64, 1], vec![0, 1]]).unwrap();
        let dbl = IntMatrix::from_rows(&[vec![1i64, 0], vec![0, 2]]).unwrap();
        assert!(is_isomorphism(&z2z, &z2z, &shear));
        assert!(!is_isomorphism(&z2z, &z2z, &dbl));
    }
}
