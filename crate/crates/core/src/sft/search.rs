use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use super::homology::StableHomology;
use super::system::{SftSystem, Word};
use super::tableau::{CylinderBisection, Tableau};
use super::SftError;

/// Enumeration limits for `find_with_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_word_len: usize,
    pub max_pairs: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_word_len: 3, max_pairs: 8 }
    }
}

/// Complete prefix codes with words of length at most `max_len` and at most `max_size` words, each sorted.
pub fn prefix_codes(sys: &SftSystem, max_len: usize, max_size: usize) -> Vec<Vec<Word>> {
    fn below(sys: &SftSystem, w: Word, max_len: usize, max_size: usize) -> Vec<Vec<Word>> {
        let mut out = vec![vec![w.clone()]];
        if w.len() >= max_len {
            return out;
        }
        let mut acc: Vec<Vec<Word>> = vec![Vec::new()];
        for &b in sys.successors(w.last()) {
            let subs = below(sys, w.push(b), max_len, max_size);
            acc = product(&acc, &subs, max_size);
        }
        out.extend(acc);
        out
    }
    let mut acc: Vec<Vec<Word>> = vec![Vec::new()];
    for a in sys.symbols() {
        acc = product(&acc, &below(sys, Word(vec![a]), max_len, max_size), max_size);
    }
    for c in &mut acc {
        c.sort();
    }
    acc
}

fn product(left: &[Vec<Word>], right: &[Vec<Word>], max_size: usize) -> Vec<Vec<Word>> {
    let mut out = Vec::new();
    for l in left {
        for r in right {
            if l.len() + r.len() <= max_size {
                out.push(l.iter().chain(r).cloned().collect());
            }
        }
    }
    out
}

fn total_len(code: &[Word]) -> usize {
    code.iter().map(Word::len).sum()
}

/// Calls `visit` on every bijection `nu[i] ↦ mu[perm[i]]` respecting follower classes,
/// in lexicographic order of the assigned `μ` sequence. Stops when `visit` returns false.
fn for_each_matching(sys: &SftSystem, nu: &[Word], mu: &[Word], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(sys: &SftSystem, nu: &[Word], mu: &[Word], used: &mut [bool], perm: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let i = perm.len();
        if i == nu.len() {
            return visit(perm);
        }
        for j in 0..mu.len() {
            if used[j] || !sys.same_follower(mu[j].last(), nu[i].last()) {
                continue;
            }
            used[j] = true;
            perm.push(j);
            let go_on = go(sys, nu, mu, used, perm, visit);
            perm.pop();
            used[j] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
    let mut used = vec![false; mu.len()];
    go(sys, nu, mu, &mut used, &mut Vec::new(), visit)
}

/// Searches tableaux by (pair count, total word length, lexicographic words) for one with
/// the given index. `budget` bounds the number of index evaluations.
pub fn find_with_index(
    homology: &mut StableHomology,
    target: &[BigInt],
    budget: usize,
    bounds: SearchBounds,
) -> Result<Tableau, SftError> {
    let sys = homology.tower().system().clone();
    let target = homology.group().reduce_element(target)?;
    let codes = prefix_codes(&sys, bounds.max_word_len, bounds.max_pairs);
    let mut examined = 0usize;
    for size in sys.n()..=bounds.max_pairs {
        let sized: Vec<&Vec<Word>> = codes.iter().filter(|c| c.len() == size).collect();
        let mut pairs: Vec<(&Vec<Word>, &Vec<Word>)> = Vec::new();
        for nu in &sized {
            for mu in &sized {
                pairs.push((nu, mu));
            }
        }
        pairs.sort_by(|a, b| (total_len(a.0) + total_len(a.1), a.0, a.1).cmp(&(total_len(b.0) + total_len(b.1), b.0, b.1)));
        for (nu, mu) in pairs {
            let mut found: Option<Tableau> = None;
            let mut failure: Option<SftError> = None;
            for_each_matching(&sys, nu, mu, &mut |perm| {
                if examined >= budget {
                    failure = Some(SftError::ExceedsBudget { budget });
                    return false;
                }
                examined += 1;
                let t = Tableau::new(
                    perm.iter().enumerate().map(|(i, &j)| CylinderBisection::new(mu[j].clone(), nu[i].clone())).collect(),
                );
                match homology.index_of(&t) {
                    Ok(idx) if idx == target => {
                        found = Some(t);
                        false
                    }
                    Ok(_) => true,
                    Err(e) => {
                        failure = Some(e);
                        false
                    }
                }
            });
            if let Some(t) = found {
                return Ok(t);
            }
            if let Some(e) = failure {
                return Err(e);
            }
        }
    }
    Err(SftError::NotFound { examined })
}

/// Random complete prefix code: the alphabet with random cylinders split `splits` times.
pub fn random_code<R: Rng>(sys: &SftSystem, rng: &mut R, splits: usize, max_len: usize) -> Vec<Word> {
    let mut code: Vec<Word> = sys.symbols().map(|a| Word(vec![a])).collect();
    for _ in 0..splits {
        let i = rng.gen_range(0..code.len());
        if code[i].len() < max_len {
            let w = code.swap_remove(i);
            code.extend(sys.successors(w.last()).iter().map(|&b| w.push(b)));
        }
    }
    code.sort();
    code
}

fn class_of(sys: &SftSystem, w: &Word) -> Word {
    // least symbol with the same follower set
    Word(vec![sys.symbols().find(|&a| sys.same_follower(a, w.last())).expect("own class")])
}

/// Random valid tableau: independent random source and range codes with matching
/// follower-class counts, joined by a random class-preserving bijection. With
/// `lag_zero`, ranges are built by permuting the source words among equal-length
/// words of the same terminal symbol instead.
pub fn random_tableau<R: Rng>(sys: &SftSystem, rng: &mut R, splits: usize, max_len: usize, lag_zero: bool) -> Tableau {
    loop {
        let (a, b) = (rng.gen_range(0..=splits), rng.gen_range(0..=splits));
        let nu = random_code(sys, rng, a, max_len);
        let mut mu = if lag_zero { nu.clone() } else { random_code(sys, rng, b, max_len) };
        let key = |w: &Word| if lag_zero { (w.len(), Word(vec![w.last()])) } else { (0, class_of(sys, w)) };
        let mut nu_keys: Vec<_> = nu.iter().map(key).collect();
        let mut mu_keys: Vec<_> = mu.iter().map(key).collect();
        nu_keys.sort();
        mu_keys.sort();
        if nu_keys != mu_keys {
            continue;
        }
        mu.shuffle(rng);
        let mut pairs = Vec::with_capacity(nu.len());
        for n in &nu {
            let j = mu.iter().position(|m| key(m) == key(n)).expect("matching counts");
            pairs.push(CylinderBisection::new(mu.swap_remove(j), n.clone()));
        }
        return Tableau::new(pairs);
    }
}

/// Random irreducible 0-1 matrix on `n` symbols that is not a permutation matrix.
pub fn random_system<R: Rng>(rng: &mut R, n: usize) -> SftSystem {
    loop {
        let rows: Vec<Vec<u8>> = (0..n).map(|_| (0..n).map(|_| u8::from(rng.gen_bool(0.5))).collect()).collect();
        let Ok(s) = SftSystem::new(&rows) else { continue };
        if s.is_irreducible() && rows.iter().any(|r| r.iter().filter(|&&x| x == 1).count() > 1) {
            return s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn codes_partition_the_space() {
        let s = SftSystem::golden_mean();
        let codes = prefix_codes(&s, 2, 10);
        // [1] or {[1 1],[1 2]}; [2] or {[2 1]}
        assert_eq!(codes.len(), 4);
        for c in &codes {
            let t = Tableau::new(c.iter().map(|w| CylinderBisection::new(w.clone(), w.clone())).collect());
            assert!(t.is_valid(&s));
        }
    }

    #[test]
    fn random_tableaux_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in [SftSystem::full_shift(2), SftSystem::designated(), SftSystem::golden_mean()] {
            for _ in 0..50 {
                let t = random_tableau(&s, &mut rng, 8, 4, false);
                assert!(t.is_valid(&s), "{t:?}");
                let z = random_tableau(&s, &mut rng, 8, 4, true);
                assert!(z.is_lag_zero() && z.is_valid(&s));
            }
        }
    }

    #[test]
    fn generator_is_found_on_designated() {
        let s = SftSystem::designated();
        let mut h = StableHomology::new(&s, 1, 7).unwrap();
        let g = h.group().generator(0);
        let t = find_with_index(&mut h, &g, 5000, SearchBounds::default()).unwrap();
        assert_eq!(h.index_of(&t).unwrap(), g);
        assert!(!t.is_lag_zero());
    }
}
