use super::{timed, CheckOutcome, Tally, TOWERS_LIMIT_SECS};
use crate::towers::{involution_from_bisection, match_equal, match_subsets, FloorSet, TowerBisection, TowerPartition, TowersError};

const MAX_CLASSES: usize = 3;
const MAX_ORBIT: u32 = 4;
/// Two-set lists for `match_subsets` are swept up to this many floors in total.
const PAIR_LIST_FLOORS: u32 = 6;
const IDS: [&str; 3] = ["a", "b", "c"];

/// Class sizes up to relabelling: nondecreasing tuples.
fn partitions() -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..MAX_CLASSES {
        let mut next = Vec::new();
        for p in &frontier {
            let lo = p.last().copied().unwrap_or(1);
            for s in lo..=MAX_ORBIT {
                let mut q = p.clone();
                q.push(s);
                next.push(q);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Floor subsets of one partition, encoded as bit masks with one bit per floor.
struct Space {
    tower: TowerPartition,
    sizes: Vec<u32>,
    offsets: Vec<u32>,
    sets: Vec<FloorSet>,
}

impl Space {
    fn new(sizes: &[u32]) -> Self {
        let named: Vec<(&str, u32)> = IDS.iter().copied().zip(sizes.iter().copied()).collect();
        let tower = TowerPartition::from_sizes(&named).expect("small sizes");
        let mut offsets = vec![0];
        for s in sizes {
            offsets.push(offsets.last().unwrap() + s);
        }
        let total = *offsets.last().unwrap();
        let mut space = Space { tower, sizes: sizes.to_vec(), offsets, sets: Vec::new() };
        space.sets = (0..1u32 << total).map(|mask| space.floor_set(mask)).collect();
        space
    }

    fn total(&self) -> u32 {
        *self.offsets.last().unwrap()
    }

    fn segment(&self, mask: u32, c: usize) -> u32 {
        (mask >> self.offsets[c]) & ((1 << self.sizes[c]) - 1)
    }

    fn floor_set(&self, mask: u32) -> FloorSet {
        let mut f = FloorSet::new();
        for c in 0..self.sizes.len() {
            let floors = floors_of(self.segment(mask, c));
            if !floors.is_empty() {
                f = f.with(IDS[c], &floors);
            }
        }
        f
    }

    fn counts(&self, mask: u32) -> [u32; MAX_CLASSES] {
        let mut out = [0; MAX_CLASSES];
        for (c, slot) in out.iter_mut().enumerate().take(self.sizes.len()) {
            *slot = self.segment(mask, c).count_ones();
        }
        out
    }
}

fn floors_of(segment: u32) -> Vec<u32> {
    (0..32).filter(|b| segment >> b & 1 == 1).map(|b| b + 1).collect()
}

fn bits(floors: impl Iterator<Item = u32>) -> u32 {
    floors.fold(0, |acc, f| acc | 1 << (f - 1))
}

/// Range, source and ascending order of one class of a bisection, as bit masks.
fn class_shape(b: &TowerBisection, c: &str) -> (u32, u32, bool) {
    let pairs = b.0.get(c).map_or(&[][..], Vec::as_slice);
    let ascending = pairs.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1);
    (bits(pairs.iter().map(|p| p.0)), bits(pairs.iter().map(|p| p.1)), ascending)
}

/// Lowest `need` floors of `pool` after skipping the lowest `skip`.
fn take_floors(mut pool: u32, skip: u32, need: u32) -> u32 {
    for _ in 0..skip {
        pool &= pool.wrapping_sub(1);
    }
    let mut out = 0;
    for _ in 0..need {
        let low = pool & pool.wrapping_neg();
        out |= low;
        pool ^= low;
    }
    out
}

fn check_equal(space: &Space, u: u32, v: u32) -> Result<(), String> {
    let (cu, cv) = (space.counts(u), space.counts(v));
    let res = match_equal(&space.tower, &space.sets[u as usize], &space.sets[v as usize]);
    match res {
        Err(TowersError::CountViolation(c)) => {
            let i = IDS.iter().position(|&x| x == c).expect("known class");
            if cu[i] == cv[i] || (0..i).any(|j| cu[j] != cv[j]) {
                return Err(format!("match_equal({u:b},{v:b}) reported CountViolation({c})"));
            }
        }
        Err(e) => return Err(format!("match_equal({u:b},{v:b}): {e}")),
        Ok(b) => {
            if cu != cv {
                return Err(format!("match_equal({u:b},{v:b}) succeeded with counts {cu:?} ≠ {cv:?}"));
            }
            let listed = (0..space.sizes.len()).filter(|&c| cu[c] > 0).count();
            if b.0.len() != listed {
                return Err(format!("match_equal({u:b},{v:b}) lists {} classes", b.0.len()));
            }
            for c in 0..space.sizes.len() {
                let shape = class_shape(&b, IDS[c]);
                if shape != (space.segment(u, c), space.segment(v, c), true) {
                    return Err(format!("match_equal({u:b},{v:b}) class {}: {shape:?}", IDS[c]));
                }
            }
            if u & v == 0 {
                check_involution(space, &b, u, v)?;
            }
        }
    }
    Ok(())
}

fn check_involution(space: &Space, b: &TowerBisection, u: u32, v: u32) -> Result<(), String> {
    let g = involution_from_bisection(&space.tower, b).map_err(|e| format!("involution({u:b},{v:b}): {e}"))?;
    if !g.compose(&g).is_identity() {
        return Err(format!("involution({u:b},{v:b}) is not of order 2"));
    }
    if g.image(&space.sets[u as usize]) != space.sets[v as usize] || g.image(&space.sets[v as usize]) != space.sets[u as usize] {
        return Err(format!("involution({u:b},{v:b}) does not swap U and V"));
    }
    for c in 0..space.sizes.len() {
        let moved = u | v;
        for f in 1..=space.sizes[c] {
            let outside = (space.segment(moved, c) >> (f - 1)) & 1 == 0;
            if outside && g.apply(IDS[c], f) != Some(f) {
                return Err(format!("involution({u:b},{v:b}) moves floor {f} of class {}", IDS[c]));
            }
        }
    }
    Ok(())
}

fn check_subsets(space: &Space, us: &[u32], sets: &[FloorSet], o: u32) -> Result<(), String> {
    let co = space.counts(o);
    let mut need = [0; MAX_CLASSES];
    for &u in us {
        for (n, c) in need.iter_mut().zip(space.counts(u)) {
            *n += c;
        }
    }
    match match_subsets(&space.tower, sets, &space.sets[o as usize]) {
        Err(TowersError::CountViolation(c)) => {
            let i = IDS.iter().position(|&x| x == c).expect("known class");
            if need[i] <= co[i] || (0..i).any(|j| need[j] > co[j]) {
                return Err(format!("match_subsets({us:?},{o:b}) reported CountViolation({c})"));
            }
        }
        Err(e) => return Err(format!("match_subsets({us:?},{o:b}): {e}")),
        Ok(out) => {
            if (0..space.sizes.len()).any(|c| need[c] > co[c]) || out.len() != us.len() {
                return Err(format!("match_subsets({us:?},{o:b}) succeeded against the counts"));
            }
            for c in 0..space.sizes.len() {
                let mut skip = 0;
                for (b, &u) in out.iter().zip(us) {
                    let k = space.segment(u, c).count_ones();
                    let expected = (space.segment(u, c), take_floors(space.segment(o, c), skip, k), true);
                    if class_shape(b, IDS[c]) != expected || (k == 0 && b.0.contains_key(IDS[c])) {
                        return Err(format!("match_subsets({us:?},{o:b}) class {}", IDS[c]));
                    }
                    skip += k;
                }
            }
        }
    }
    Ok(())
}

pub fn towers_exhaustive() -> CheckOutcome {
    let mut t = Tally::new(8, "tower matchings, exhaustive");
    let parts = partitions();
    let ((equal_calls, subset_calls), secs) = timed(|| {
        let (mut eq, mut sub) = (0u64, 0u64);
        for sizes in &parts {
            let space = Space::new(sizes);
            let n = 1u32 << space.total();
            for u in 0..n {
                for v in 0..n {
                    if let Err(e) = check_equal(&space, u, v) {
                        t.fail(format!("sizes {sizes:?}: {e}"));
                    }
                    if let Err(e) = check_subsets(&space, &[u], std::slice::from_ref(&space.sets[u as usize]), v) {
                        t.fail(format!("sizes {sizes:?}: {e}"));
                    }
                }
            }
            eq += u64::from(n) * u64::from(n);
            sub += u64::from(n) * u64::from(n);
            if space.total() <= PAIR_LIST_FLOORS {
                for u1 in 0..n {
                    for u2 in 0..n {
                        let sets = [space.sets[u1 as usize].clone(), space.sets[u2 as usize].clone()];
                        for o in 0..n {
                            if let Err(e) = check_subsets(&space, &[u1, u2], &sets, o) {
                                t.fail(format!("sizes {sizes:?}: {e}"));
                            }
                        }
                    }
                }
                sub += u64::from(n).pow(3);
            }
            if check_subsets(&space, &[], &[], n - 1).is_err() {
                t.fail(format!("sizes {sizes:?}: empty list"));
            }
        }
        (eq, sub)
    });
    t.add_passed((equal_calls + subset_calls) as usize);
    t.case(secs < TOWERS_LIMIT_SECS, || format!("sweep took {secs:.1}s"));
    t.note(format!(
        "{} partitions; {equal_calls} match_equal and {subset_calls} match_subsets calls in {secs:.1}s",
        parts.len()
    ));
    t.finish()
}
