use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{timed, CheckOutcome, Tally, FULL_SHIFT_DEPTH, FULL_SHIFT_LIMIT_SECS, INDEX_PAIRS, ORACLE_DEPTH, ORACLE_MATRICES};
use crate::af::{path_tableau_apply, BratteliDiagram, DiagramDocument, LevelDocument, PathCylinder, PathTableau};
use crate::sft::{
    find_with_index, index_of, random_system, random_tableau, truncated_homology, ChainTruncation, ReducedLevel,
    SearchBounds, SftSystem, StableHomology, Tableau, Window, Word,
};
use crate::zmat::{widen, AbelianGroupPresentation};

const INDEX_SPLITS: usize = 10;
const INDEX_MAX_LEN: usize = 3;
const FIND_BUDGET: usize = 100_000;

fn compare(
    t: &mut Tally,
    label: &str,
    expected: &AbelianGroupPresentation,
    got: Result<AbelianGroupPresentation, crate::sft::SftError>,
) {
    match got {
        Ok(g) => t.case(g.same_type(expected), || format!("{label}: expected {expected}, got {g}")),
        Err(e) => t.fail(format!("{label}: {e}")),
    }
}

pub fn full_shift() -> CheckOutcome {
    let mut t = Tally::new(1, "full-shift homology");
    let mut slowest = 0f64;
    for n in 2..=6usize {
        let sys = SftSystem::full_shift(n);
        let torsion: Vec<BigInt> = if n == 2 { Vec::new() } else { vec![BigInt::from(n - 1)] };
        let expect0 = AbelianGroupPresentation::from_invariants(torsion, 0).expect("valid invariants");
        let expect1 = AbelianGroupPresentation::trivial();
        let (_, secs) = timed(|| {
            compare(&mut t, &format!("N={n} H0 matrix"), &expect0, Ok(sys.h0_group()));
            compare(&mut t, &format!("N={n} H1 matrix"), &expect1, Ok(sys.h1_group()));
            compare(&mut t, &format!("N={n} H0 truncation"), &expect0, truncated_homology(&sys, 0, FULL_SHIFT_DEPTH));
            compare(&mut t, &format!("N={n} H1 truncation"), &expect1, truncated_homology(&sys, 1, FULL_SHIFT_DEPTH));
        });
        t.case(secs < FULL_SHIFT_LIMIT_SECS, || format!("N={n} took {secs:.2}s"));
        slowest = slowest.max(secs);
    }
    t.note(format!("H0 = Z/(N-1)Z and H1 = 0 for N=2..6 by both methods; slowest case {slowest:.2}s"));
    t.finish()
}

pub fn oracle_equivalence(seed: u64) -> CheckOutcome {
    let mut t = Tally::new(2, "matrix/truncation oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nontrivial = 0;
    for i in 0..ORACLE_MATRICES {
        let n = rng.gen_range(2..=4);
        let sys = random_system(&mut rng, n);
        let rows = sys.to_document().rows;
        let (h0, h1) = (sys.h0_group(), sys.h1_group());
        if !h0.is_trivial() {
            nontrivial += 1;
        }
        compare(&mut t, &format!("#{i} {rows:?} H0"), &h0, truncated_homology(&sys, 0, ORACLE_DEPTH));
        compare(&mut t, &format!("#{i} {rows:?} H1"), &h1, truncated_homology(&sys, 1, ORACLE_DEPTH));
    }
    t.note(format!("{ORACLE_MATRICES} matrices, {nontrivial} with nontrivial H0, all stabilized by depth {ORACLE_DEPTH}"));
    t.finish()
}

pub fn designated_example() -> CheckOutcome {
    let mut t = Tally::new(3, "designated example");
    let sys = SftSystem::designated();
    let z = AbelianGroupPresentation::free(1);
    compare(&mut t, "H0 matrix", &z, Ok(sys.h0_group()));
    compare(&mut t, "H1 matrix", &z, Ok(sys.h1_group()));
    compare(&mut t, "H0 truncation", &z, truncated_homology(&sys, 0, ORACLE_DEPTH));
    compare(&mut t, "H1 truncation", &z, truncated_homology(&sys, 1, ORACLE_DEPTH));
    let found = StableHomology::new(&sys, 1, ORACLE_DEPTH).and_then(|mut h| {
        let generator = vec![BigInt::from(1)];
        find_with_index(&mut h, &generator, FIND_BUDGET, SearchBounds::default()).map(|tab| (tab, generator))
    });
    match found {
        Ok((tab, generator)) => {
            let verified = index_of(&sys, &tab, ORACLE_DEPTH);
            t.case(verified.as_ref() == Ok(&generator), || format!("index_of gives {verified:?} for {:?}", tab.to_document()));
            t.note(format!("H0 = H1 = Z; generator realized by a {}-pair tableau", tab.pairs.len()));
        }
        Err(e) => t.fail(format!("find_with_index: {e}")),
    }
    t.finish()
}

/// Stationary diagram whose level-`ℓ` paths are the admissible words of length `ℓ`.
pub(crate) fn core_diagram(sys: &SftSystem) -> BratteliDiagram {
    let n = sys.n();
    let a: Vec<Vec<u32>> = sys.to_document().rows.iter().map(|r| r.iter().map(|&x| u32::from(x)).collect()).collect();
    let doc = DiagramDocument {
        levels: vec![LevelDocument { vertices: 1, incidence: vec![vec![1; n]] }, LevelDocument { vertices: n, incidence: a }],
    };
    BratteliDiagram::from_document(&doc).expect("irreducible matrix gives a valid diagram")
}

fn word_path(w: &Word) -> PathCylinder {
    PathCylinder(w.symbols().iter().map(|&s| (u32::from(s), 0)).collect())
}

/// Lag-zero tableau as a path tableau on the core diagram; pairs whose terminal
/// symbols differ are split one symbol deeper.
pub(crate) fn core_tableau(sys: &SftSystem, tab: &Tableau) -> Option<PathTableau> {
    let mut pairs = Vec::new();
    for p in &tab.pairs {
        if p.lag() != 0 {
            return None;
        }
        if p.mu.last() == p.nu.last() {
            pairs.push((word_path(&p.mu), word_path(&p.nu)));
        } else {
            for &b in sys.successors(p.nu.last()) {
                pairs.push((word_path(&p.mu.push(b)), word_path(&p.nu.push(b))));
            }
        }
    }
    Some(PathTableau { pairs })
}

fn agrees_pathwise(sys: &SftSystem, b: &BratteliDiagram, tab: &Tableau, pt: &PathTableau) -> bool {
    let len = tab.max_source_len().max(tab.pairs.iter().map(|p| p.mu.len()).max().unwrap_or(0)) + 1;
    sys.words(len).iter().all(|w| {
        let image = tab.apply(w).map(|x| word_path(&x));
        image.is_some() && path_tableau_apply(b, pt, &word_path(w)).ok() == image
    })
}

pub fn index_homomorphism(seed: u64) -> CheckOutcome {
    let mut t = Tally::new(4, "index homomorphism");
    let sys = SftSystem::designated();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = match StableHomology::new(&sys, 1, ORACLE_DEPTH) {
        Ok(h) => h,
        Err(e) => {
            t.fail(format!("H1 tower: {e}"));
            return t.finish();
        }
    };
    let group = h.group().clone();
    let mut nonzero = 0;
    for i in 0..INDEX_PAIRS {
        let a = random_tableau(&sys, &mut rng, INDEX_SPLITS, INDEX_MAX_LEN, false);
        let b = random_tableau(&sys, &mut rng, INDEX_SPLITS, INDEX_MAX_LEN, false);
        let result = (|| -> Result<(), crate::sft::SftError> {
            let (ia, ib) = (h.index_of(&a)?, h.index_of(&b)?);
            let iab = h.index_of(&a.compose(&sys, &b)?)?;
            let inv = h.index_of(&a.invert())?;
            if !h.is_zero(&ia) {
                nonzero += 1;
            }
            let sum = group.add(&ia, &ib);
            t.case(iab == sum, || format!("pair {i}: I(T1∘T2) = {iab:?} but I(T1)+I(T2) = {sum:?}"));
            let neg = group.neg(&ia);
            t.case(inv == neg, || format!("pair {i}: I(T⁻¹) = {inv:?} but -I(T) = {neg:?}"));
            Ok(())
        })();
        if let Err(e) = result {
            t.fail(format!("pair {i}: {e}"));
        }
    }
    let core = core_diagram(&sys);
    for i in 0..INDEX_PAIRS {
        let tab = random_tableau(&sys, &mut rng, INDEX_SPLITS, INDEX_MAX_LEN, true);
        match h.index_of(&tab) {
            Ok(idx) => t.case(h.is_zero(&idx), || format!("lag-zero tableau {i} has index {idx:?}")),
            Err(e) => t.fail(format!("lag-zero tableau {i}: {e}")),
        }
        match core_tableau(&sys, &tab) {
            Some(pt) => {
                let valid = pt.validate(&core);
                t.case(valid.is_ok() && agrees_pathwise(&sys, &core, &tab, &pt), || {
                    format!("lag-zero tableau {i} is not realized in the AF core: {valid:?}")
                });
            }
            None => t.fail(format!("lag-zero tableau {i} has a nonzero lag")),
        }
    }
    t.note(format!(
        "{INDEX_PAIRS} pairs ({nonzero} with nonzero index); {INDEX_PAIRS} lag-zero tableaux realized in the AF core with index 0"
    ));
    t.finish()
}

pub fn boundary_identity(seed: u64) -> CheckOutcome {
    let mut t = Tally::new(5, "boundary identity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut systems = vec![SftSystem::full_shift(2), SftSystem::full_shift(3), SftSystem::golden_mean(), SftSystem::designated()];
    for _ in 0..4 {
        let n = rng.gen_range(2..=3);
        systems.push(random_system(&mut rng, n));
    }
    let (mut truncations, mut dense, mut reduced) = (0, 0, 0);
    for sys in &systems {
        let rows = sys.to_document().rows;
        let max_depth = if sys.n() == 2 { 6 } else { 5 };
        let mut prev: Option<ChainTruncation> = None;
        for d in 3..=max_depth {
            let w = Window::for_depth(d).expect("depth at least 3");
            let c = match ChainTruncation::new(sys, w) {
                Ok(c) => c,
                Err(e) => {
                    t.fail(format!("{rows:?} depth {d}: {e}"));
                    continue;
                }
            };
            truncations += 1;
            t.case(c.verify_boundary_identity().is_ok(), || format!("{rows:?} depth {d}: sparse δ₁δ₂ ≠ 0"));
            if d <= 4 {
                let product = c.delta1_matrix().checked_mul(&c.delta2_matrix());
                t.case(product.is_ok_and(|p| p.is_zero()), || format!("{rows:?} depth {d}: dense δ₁δ₂ ≠ 0"));
                dense += 1;
            }
            if let Some(p) = &prev {
                let r = p.verify_refinement(sys, &c);
                t.case(r.is_ok(), || format!("{rows:?} depth {}→{d}: {r:?}", d - 1));
            }
            match ReducedLevel::new(sys, w) {
                Ok(red) => {
                    reduced += 1;
                    let bad = red.relations(sys).iter().filter(|r| !red.apply_boundary(&widen(r)).is_empty()).count();
                    t.case(bad == 0, || format!("{rows:?} depth {d}: {bad} reduced relations are not cycles"));
                }
                Err(e) => t.fail(format!("{rows:?} depth {d} reduced: {e}")),
            }
            prev = Some(c);
        }
    }
    t.note(format!(
        "{truncations} truncations over {} systems ({dense} also as dense matrices), refinements commute, {reduced} reduced levels",
        systems.len()
    ));
    t.finish()
}
