use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CheckOutcome, Tally, AF_MAX_LEVEL, AF_RANDOM_DIAGRAMS, HOPF2_PAIRS, RIESZ_INSTANCES};
use crate::af::{
    af_h1_check, class_of_clopen, classes_equal, path_tableau_apply, positivity_check, riesz_interpolate, transport_hopf2,
    AfError, BratteliDiagram, DimensionGroupElement, PathCylinder, PathTableau,
};

const EXPLICIT_LEVELS: usize = 2;
const MAX_VERTICES: usize = 3;
const MAX_MULT: u32 = 2;
/// Random diagrams with more level-4 paths than this are redrawn.
const MAX_PATHS: usize = 200;
const BUDGET: usize = 6;

fn random_diagram(rng: &mut ChaCha8Rng) -> BratteliDiagram {
    loop {
        let b = BratteliDiagram::random(rng, EXPLICIT_LEVELS, MAX_VERTICES, MAX_MULT);
        let paths: BigInt = b.path_counts(AF_MAX_LEVEL).iter().sum();
        if paths <= BigInt::from(MAX_PATHS) {
            return b;
        }
    }
}

pub fn af_vanishing(seed: u64) -> CheckOutcome {
    let mut t = Tally::new(6, "AF vanishing of H1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diagrams = vec![("UHF-2".to_string(), BratteliDiagram::uhf(2))];
    for i in 0..AF_RANDOM_DIAGRAMS {
        diagrams.push((format!("random #{i}"), random_diagram(&mut rng)));
    }
    let mut largest = 0;
    for (name, b) in &diagrams {
        match af_h1_check(b, AF_MAX_LEVEL) {
            Ok(r) => {
                largest = largest.max(r.levels.iter().map(|l| l.arrows).max().unwrap_or(0));
                for l in &r.levels {
                    t.case(l.h1_trivial, || format!("{name}: H1 ≠ 0 at level {}", l.level));
                }
            }
            Err(e) => t.fail(format!("{name}: {e}")),
        }
    }
    t.note(format!("UHF-2 and {AF_RANDOM_DIAGRAMS} random diagrams, levels 0..={AF_MAX_LEVEL}; up to {largest} arrows per level"));
    t.finish()
}

/// Random union of level-`level` paths.
fn random_clopen(rng: &mut ChaCha8Rng, b: &BratteliDiagram, level: usize) -> Vec<PathCylinder> {
    PathCylinder::root().refine(b, level).into_iter().filter(|_| rng.gen_bool(0.4)).collect()
}

/// Same number of paths per terminal vertex as `u` refined to `level`, chosen at random.
fn same_class(rng: &mut ChaCha8Rng, b: &BratteliDiagram, u: &[PathCylinder], level: usize) -> Vec<PathCylinder> {
    let fine: Vec<PathCylinder> = u.iter().flat_map(|p| p.refine(b, level)).collect();
    let all = PathCylinder::root().refine(b, level);
    let mut out = Vec::new();
    for w in 0..b.vertices(level) {
        let need = fine.iter().filter(|p| p.terminal() == w).count();
        let mut pool: Vec<&PathCylinder> = all.iter().filter(|p| p.terminal() == w).collect();
        pool.shuffle(rng);
        out.extend(pool.into_iter().take(need).cloned());
    }
    out.sort();
    out
}

fn fine_set(b: &BratteliDiagram, set: &[PathCylinder], level: usize) -> BTreeSet<PathCylinder> {
    set.iter().flat_map(|p| p.refine(b, level)).collect()
}

/// `γ(U) = V`, `γ² = id` and `γ` fixes the complement of `U ∪ V`, checked on every path
/// long enough to lie inside one listed cylinder.
fn verify_transport(b: &BratteliDiagram, g: &PathTableau, u: &[PathCylinder], v: &[PathCylinder]) -> Result<(), String> {
    g.validate(b).map_err(|e| e.to_string())?;
    let level = g.pairs.iter().map(|p| p.0.len()).chain(u.iter().chain(v).map(PathCylinder::len)).max().unwrap_or(0);
    let (fu, fv) = (fine_set(b, u, level), fine_set(b, v, level));
    let apply = |p: &PathCylinder| path_tableau_apply(b, g, p).map_err(|e| e.to_string());
    for p in PathCylinder::root().refine(b, level) {
        let q = apply(&p)?;
        if apply(&q)? != p {
            return Err(format!("γ² moves {:?}", p.to_document()));
        }
        if fu.contains(&p) && !fv.contains(&q) {
            return Err(format!("γ sends {:?} ∈ U outside V", p.to_document()));
        }
        if !fu.contains(&p) && !fv.contains(&p) && q != p {
            return Err(format!("γ moves {:?} outside U ∪ V", p.to_document()));
        }
    }
    Ok(())
}

pub fn hopf2_transport(seed: u64) -> CheckOutcome {
    let mut t = Tally::new(7, "Hopf2 transport");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut equal, mut unequal, mut undecided) = (0, 0, 0);
    while equal < HOPF2_PAIRS || unequal < HOPF2_PAIRS {
        let b = random_diagram(&mut rng);
        let level = rng.gen_range(1..=2);
        let u = random_clopen(&mut rng, &b, level);
        if equal < HOPF2_PAIRS {
            let v = same_class(&mut rng, &b, &u, level + 1);
            match transport_hopf2(&b, &u, &v, BUDGET) {
                Ok(g) => {
                    let r = verify_transport(&b, &g, &u, &v);
                    t.case(r.is_ok(), || format!("equal pair {equal}: {}", r.unwrap_err()));
                }
                Err(e) => t.fail(format!("equal pair {equal}: {e}")),
            }
            equal += 1;
        }
        if unequal < HOPF2_PAIRS {
            let v = random_clopen(&mut rng, &b, level + 1);
            let (cu, cv) = (class_of_clopen(&b, &u), class_of_clopen(&b, &v));
            let decided = match (cu, cv) {
                (Ok(cu), Ok(cv)) => classes_equal(&b, &cu, &cv, BUDGET),
                (Err(e), _) | (_, Err(e)) => Err(e),
            };
            match decided {
                Ok(d) if d.is_false() => {
                    let r = transport_hopf2(&b, &u, &v, BUDGET);
                    t.case(matches!(r, Err(AfError::ClassesDiffer { .. })), || format!("unequal pair {unequal}: {r:?}"));
                    unequal += 1;
                }
                Ok(d) if !d.is_true() => undecided += 1,
                Ok(_) => {}
                Err(e) => t.fail(format!("unequal candidate: {e}")),
            }
        }
    }
    t.note(format!("{equal} equal-class pairs transported; {unequal} certified unequal pairs rejected; {undecided} undecided draws skipped"));
    t.finish()
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize, lo: i64, hi: i64) -> Vec<BigInt> {
    (0..len).map(|_| BigInt::from(rng.gen_range(lo..=hi))).collect()
}

pub fn riesz_construction(seed: u64) -> CheckOutcome {
    let mut t = Tally::new(10, "Riesz interpolation");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..RIESZ_INSTANCES {
        let b = random_diagram(&mut rng);
        let level = rng.gen_range(1..=2);
        let f1 = DimensionGroupElement::new(level, random_vector(&mut rng, b.vertices(level), -3, 3));
        let f2 = DimensionGroupElement::new(level + 1, random_vector(&mut rng, b.vertices(level + 1), -3, 3));
        let result = (|| -> Result<(), AfError> {
            let top = level + 2;
            let (p1, p2) = (f1.push_to(&b, top)?, f2.push_to(&b, top)?);
            let max: Vec<BigInt> = p1.vector.iter().zip(&p2.vector).map(|(x, y)| x.max(y).clone()).collect();
            let mut g = Vec::new();
            for _ in 0..2 {
                let mut bump = random_vector(&mut rng, b.vertices(top), 0, 2);
                let w = rng.gen_range(0..bump.len());
                bump[w] += 1;
                g.push(DimensionGroupElement::new(top, max.iter().zip(&bump).map(|(x, y)| x + y).collect()));
            }
            for gj in &g {
                for fi in [&f1, &f2] {
                    let d = gj.sub(&b, fi)?;
                    if d.is_zero() || !positivity_check(&b, &d, BUDGET)?.is_true() {
                        t.fail(format!("instance {i}: constructed instance is not strict"));
                        return Ok(());
                    }
                }
            }
            let h = riesz_interpolate(&b, [&f1, &f2], [&g[0], &g[1]], BUDGET)?;
            let diffs = [h.sub(&b, &f1)?, h.sub(&b, &f2)?, g[0].sub(&b, &h)?, g[1].sub(&b, &h)?];
            for (k, d) in diffs.iter().enumerate() {
                let decision = positivity_check(&b, d, BUDGET)?;
                t.case(decision.is_true(), || format!("instance {i}: difference {k} gives {decision:?}"));
            }
            Ok(())
        })();
        if let Err(e) = result {
            t.fail(format!("instance {i}: {e}"));
        }
    }
    t.note(format!("{RIESZ_INSTANCES} strict instances; h - f1, h - f2, g1 - h, g2 - h all certified nonnegative"));
    t.finish()
}
