use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::diagram::{classes_equal, class_of_clopen, positivity_check, BratteliDiagram, Decision, DimensionGroupElement, PathCylinder};
use super::AfError;

/// Pairs `(p, q)` sending `q·x ↦ p·x`; the identity off the listed `q`-cylinders.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathTableau {
    pub pairs: Vec<(PathCylinder, PathCylinder)>,
}

impl PathTableau {
    pub fn identity() -> Self {
        PathTableau::default()
    }

    pub fn validate(&self, b: &BratteliDiagram) -> Result<(), AfError> {
        for (p, q) in &self.pairs {
            p.validate(b)?;
            q.validate(b)?;
            if p.len() != q.len() || p.terminal() != q.terminal() {
                return Err(AfError::InvalidTableau(format!(
                    "{:?} and {:?} do not end at the same vertex of the same level",
                    p.to_document(),
                    q.to_document()
                )));
            }
        }
        for side in [0, 1] {
            let cyl: Vec<&PathCylinder> = self.pairs.iter().map(|pq| if side == 0 { &pq.0 } else { &pq.1 }).collect();
            for (i, a) in cyl.iter().enumerate() {
                if cyl[i + 1..].iter().any(|c| a.is_prefix_of(c) || c.is_prefix_of(a)) {
                    return Err(AfError::Overlap(a.to_document()));
                }
            }
        }
        let union = |side: usize| -> BTreeSet<PathCylinder> {
            let level = self.pairs.iter().map(|pq| pq.0.len()).max().unwrap_or(0);
            self.pairs.iter().flat_map(|pq| if side == 0 { &pq.0 } else { &pq.1 }.refine(b, level)).collect()
        };
        if union(0) != union(1) {
            return Err(AfError::InvalidTableau("listed ranges and sources cover different sets".into()));
        }
        Ok(())
    }
}

/// Image of `p` under `t`.
pub fn path_tableau_apply(b: &BratteliDiagram, t: &PathTableau, p: &PathCylinder) -> Result<PathCylinder, AfError> {
    p.validate(b)?;
    for (r, s) in &t.pairs {
        if s.is_prefix_of(p) {
            return Ok(r.concat(&p.0[s.len()..]));
        }
        if p.is_prefix_of(s) {
            return Err(AfError::NeedsRefinement(p.to_document()));
        }
    }
    Ok(p.clone())
}

/// Involution `γ` with `γ(U) = V`, fixing everything outside `U ∪ V`.
pub fn transport_hopf2(b: &BratteliDiagram, u: &[PathCylinder], v: &[PathCylinder], budget: usize) -> Result<PathTableau, AfError> {
    let (cu, cv) = (class_of_clopen(b, u)?, class_of_clopen(b, v)?);
    let witness = match classes_equal(b, &cu, &cv, budget)? {
        Decision::True { level } => level,
        Decision::False { level, .. } => return Err(AfError::ClassesDiffer { level }),
        Decision::Undecided { levels_examined } => return Err(AfError::Undecided { levels_examined }),
    };
    let level = witness.max(cu.level).max(cv.level);
    let refine = |set: &[PathCylinder]| -> BTreeSet<PathCylinder> { set.iter().flat_map(|p| p.refine(b, level)).collect() };
    let (fu, fv) = (refine(u), refine(v));
    let mut only_u: BTreeMap<usize, Vec<PathCylinder>> = BTreeMap::new();
    let mut only_v: BTreeMap<usize, Vec<PathCylinder>> = BTreeMap::new();
    for p in fu.difference(&fv) {
        only_u.entry(p.terminal()).or_default().push(p.clone());
    }
    for p in fv.difference(&fu) {
        only_v.entry(p.terminal()).or_default().push(p.clone());
    }
    let mut pairs = Vec::new();
    for (w, us) in only_u {
        let vs = only_v.remove(&w).unwrap_or_default();
        if vs.len() != us.len() {
            return Err(AfError::ClassesDiffer { level });
        }
        for (p, q) in us.into_iter().zip(vs) {
            pairs.push((q.clone(), p.clone()));
            pairs.push((p, q));
        }
    }
    if !only_v.is_empty() {
        return Err(AfError::ClassesDiffer { level });
    }
    pairs.sort();
    Ok(PathTableau { pairs })
}

/// `h` with `f₁, f₂ ≤ h ≤ g₁, g₂`: the coordinatewise maximum of the `f`s at the first level
/// where all four differences `gⱼ − fᵢ` are coordinatewise non-negative.
pub fn riesz_interpolate(
    b: &BratteliDiagram,
    f: [&DimensionGroupElement; 2],
    g: [&DimensionGroupElement; 2],
    budget: usize,
) -> Result<DimensionGroupElement, AfError> {
    let start = f.iter().chain(&g).map(|x| x.level).max().expect("four elements");
    for level in start..=start + budget {
        if !b.has_level(level) {
            break;
        }
        let fs: Vec<DimensionGroupElement> = f.iter().map(|x| x.push_to(b, level)).collect::<Result<_, _>>()?;
        let gs: Vec<DimensionGroupElement> = g.iter().map(|x| x.push_to(b, level)).collect::<Result<_, _>>()?;
        let ordered = gs.iter().all(|gj| fs.iter().all(|fi| gj.sub(b, fi).is_ok_and(|d| d.is_nonnegative())));
        if ordered {
            let vector = fs[0].vector.iter().zip(&fs[1].vector).map(|(a, c)| a.max(c).clone()).collect();
            return Ok(DimensionGroupElement::new(level, vector));
        }
    }
    Err(AfError::PreconditionUncertified)
}

/// Whether `x ≤ y` is certified within `budget` pushes.
pub fn certified_le(b: &BratteliDiagram, x: &DimensionGroupElement, y: &DimensionGroupElement, budget: usize) -> Result<bool, AfError> {
    Ok(positivity_check(b, &y.sub(b, x)?, budget)?.is_true())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(steps: &[(u32, u32)]) -> PathCylinder {
        PathCylinder(steps.to_vec())
    }

    #[test]
    fn uhf_swap() {
        let b = BratteliDiagram::uhf(2);
        let t = transport_hopf2(&b, &[p(&[(0, 0)])], &[p(&[(0, 1)])], 2).unwrap();
        assert_eq!(t.pairs, vec![(p(&[(0, 0)]), p(&[(0, 1)])), (p(&[(0, 1)]), p(&[(0, 0)]))]);
        t.validate(&b).unwrap();
        assert_eq!(path_tableau_apply(&b, &t, &p(&[(0, 0), (0, 1)])).unwrap(), p(&[(0, 1), (0, 1)]));
        assert!(matches!(path_tableau_apply(&b, &t, &p(&[])), Err(AfError::NeedsRefinement(_))));
        let same = transport_hopf2(&b, &[p(&[(0, 0)])], &[p(&[(0, 0)])], 2).unwrap();
        assert_eq!(same, PathTableau::identity());
        assert_eq!(path_tableau_apply(&b, &same, &p(&[(0, 1)])).unwrap(), p(&[(0, 1)]));
        assert!(matches!(
            transport_hopf2(&b, &[p(&[(0, 0)])], &[p(&[(0, 0), (0, 0)])], 3),
            Err(AfError::ClassesDiffer { .. })
        ));
    }

    #[test]
    fn riesz_examples() {
        let b = BratteliDiagram::uhf(2);
        let e = |v: i64| DimensionGroupElement::from_i64(1, &[v]);
        let h = riesz_interpolate(&b, [&e(0), &e(1)], [&e(3), &e(3)], 2).unwrap();
        assert_eq!(h, e(1));
        let h = riesz_interpolate(&b, [&e(1), &e(1)], [&e(2), &e(2)], 2).unwrap();
        assert_eq!(h, e(1));
        assert_eq!(riesz_interpolate(&b, [&e(3), &e(0)], [&e(1), &e(1)], 3), Err(AfError::PreconditionUncertified));
        assert!(certified_le(&b, &e(1), &h, 0).unwrap());
    }
}
