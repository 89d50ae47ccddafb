use std::collections::{HashSet, VecDeque};

use ghom_core::zmat::{cokernel_presentation, kernel_basis, smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

/// Column span of `cols` inside `(ℤ/d)^n`, by breadth-first closure under adding generators.
fn span_mod(cols: &[Vec<i64>], d: i64) -> HashSet<Vec<i64>> {
    let n = cols.first().map_or(0, Vec::len);
    let start = vec![0; n];
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for c in cols {
            let y: Vec<i64> = x.iter().zip(c).map(|(a, b)| (a + b).rem_euclid(d)).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

fn all_vectors(n: usize, d: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: Vec<i64>| (0..d).map(move |a| [v.clone(), vec![a]].concat())).collect();
    }
    out
}

fn square(max_n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-4i64..=4, n), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn torsion_counts_match_enumeration(rows in square(3)) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let det = m.determinant().unwrap().abs();
        prop_assume!(!det.is_zero() && det <= BigInt::from(64));
        let d = det.to_i64().unwrap();
        let n = rows.len();
        let cols: Vec<Vec<i64>> = (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        let h = span_mod(&cols, d);
        let g = cokernel_presentation(&m);
        prop_assert_eq!(g.free_rank(), 0);
        prop_assert_eq!(g.order(), Some(det.clone()));
        prop_assert_eq!((d as usize).pow(n as u32) / h.len(), d as usize);
        let vectors = all_vectors(n, d);
        for k in (1..=d).filter(|k| d % k == 0) {
            let killed = vectors
                .iter()
                .filter(|x| h.contains(&x.iter().map(|a| (k * a).rem_euclid(d)).collect::<Vec<_>>()))
                .count();
            let expected: BigInt = g.torsion().iter().map(|t| t.gcd(&BigInt::from(k))).product();
            prop_assert_eq!(BigInt::from(killed / h.len()), expected, "k = {}", k);
        }
    }

    #[test]
    fn smith_form_is_a_unimodular_change_of_basis(rows in (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let snf = smith_normal_form(&m);
        prop_assert!(snf.p.is_unimodular());
        prop_assert!(snf.q.is_unimodular());
        prop_assert_eq!(snf.p.checked_mul(&m).unwrap().checked_mul(&snf.q).unwrap(), snf.s.clone());
        let diag = snf.diagonal();
        prop_assert!(diag.iter().all(|x| x.is_positive()));
        prop_assert!(diag.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        for v in kernel_basis(&m) {
            prop_assert!(m.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
        }
        prop_assert_eq!(kernel_basis(&m).len() + snf.rank, rows[0].len());
    }
}
