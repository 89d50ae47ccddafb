use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use super::ZmatError;

/// Result of a Smith normal form computation: `p · m · q = s`.
///
/// `p_inv` is maintained alongside `p` so that callers can map canonical
/// generators back into ambient coordinates without a second inversion.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    p: Vec<Vec<BigInt>>,
    p_inv: Vec<Vec<BigInt>>,
    q: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.p.swap(i, j);
        for row in &mut self.p_inv {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.q {
            row.swap(i, j);
        }
    }

    // row_i -= c * row_t
    fn row_axpy(&mut self, i: usize, t: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.p] {
            let (src, dst) = pick(m, t, i);
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                if !s.is_zero() {
                    *d -= c * s;
                }
            }
        }
        // P_inv gets the inverse operation on columns: col_t += c * col_i
        for row in &mut self.p_inv {
            if !row[i].is_zero() {
                let add = c * &row[i];
                row[t] += add;
            }
        }
    }

    // col_j -= c * col_t
    fn col_axpy(&mut self, j: usize, t: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.q] {
            for row in m.iter_mut() {
                if !row[t].is_zero() {
                    let sub = c * &row[t];
                    row[j] -= sub;
                }
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for v in self.a[t].iter_mut().chain(self.p[t].iter_mut()) {
            *v = -std::mem::take(v);
        }
        for row in &mut self.p_inv {
            row[t] = -std::mem::take(&mut row[t]);
        }
    }
}

fn pick(m: &mut [Vec<BigInt>], src: usize, dst: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    debug_assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

/// Nearest-integer quotient, so remainders satisfy |r| ≤ |b|/2.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    let twice: BigInt = r.abs() * 2;
    // floor remainders share the sign of b, so rounding away always means q + 1
    if twice > b.abs() {
        q + 1
    } else {
        q
    }
}

fn to_matrix(rows: usize, cols: usize, v: Vec<Vec<BigInt>>) -> IntMatrix {
    IntMatrix::from_entries(rows, cols, v.into_iter().flatten().collect()).expect("shape")
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let ident = |n: usize| IntMatrix::identity(n).to_rows();
    let mut w = Work { a: m.to_rows(), p: ident(r), p_inv: ident(r), q: ident(c) };
    let mut rank = 0;

    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let v = &w.a[i][j];
                    if v.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| v.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(w, r, c, rank);
            };
            w.swap_rows(t, bi);
            w.swap_cols(t, bj);
            let pivot = w.a[t][t].clone();

            let mut dirty = false;
            for i in t + 1..r {
                if !w.a[i][t].is_zero() {
                    let q = round_div(&w.a[i][t], &pivot);
                    w.row_axpy(i, t, &q);
                    dirty |= !w.a[i][t].is_zero();
                }
            }
            for j in t + 1..c {
                if !w.a[t][j].is_zero() {
                    let q = round_div(&w.a[t][j], &pivot);
                    w.col_axpy(j, t, &q);
                    dirty |= !w.a[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            let bad_row = (t + 1..r).find(|&i| (t + 1..c).any(|j| !w.a[i][j].is_multiple_of(&pivot)));
            if let Some(i) = bad_row {
                // row_t += row_i brings a non-multiple into the pivot row
                w.row_axpy(t, i, &BigInt::from(-1));
                continue;
            }
            break;
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        rank = t + 1;
    }
    finish(w, r, c, rank)
}

fn finish(w: Work, r: usize, c: usize, rank: usize) -> SmithDecomposition {
    SmithDecomposition {
        s: to_matrix(r, c, w.a),
        p: to_matrix(r, r, w.p),
        p_inv: to_matrix(r, r, w.p_inv),
        q: to_matrix(c, c, w.q),
        rank,
    }
}

/// Basis of the integer kernel of `m`, as the trailing columns of `Q`.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let d = smith_normal_form(m);
    (d.rank..m.cols()).map(|j| d.q.column(j)).collect()
}

/// Some integer `x` with `m · x = b`, or `None` when no integer solution exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, ZmatError> {
    if b.len() != m.rows() {
        return Err(ZmatError::DimensionMismatch { expected: m.rows(), found: b.len() });
    }
    Ok(solve_with(&smith_normal_form(m), b))
}

/// Solves `m · x = b` reusing a precomputed decomposition of `m`.
pub fn solve_with(d: &SmithDecomposition, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let pb = d.p.mul_vec(b).ok()?;
    let mut y = vec![BigInt::zero(); d.q.rows()];
    for (i, v) in pb.iter().enumerate() {
        if i < d.rank {
            let (quot, rem) = v.div_rem(d.s.get(i, i));
            if !rem.is_zero() {
                return None;
            }
            y[i] = quot;
        } else if !v.is_zero() {
            return None;
        }
    }
    d.q.mul_vec(&y).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmat::matrix::big_vec;

    fn check(m: &IntMatrix) -> SmithDecomposition {
        let d = smith_normal_form(m);
        assert_eq!(&(&d.p * m) * &d.q, d.s);
        assert_eq!(&d.p * &d.p_inv, IntMatrix::identity(m.rows()));
        assert!(d.q.is_unimodular());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert!(d.s.get(i, j).is_zero());
                }
            }
        }
        let diag = d.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(diag.iter().all(|x| x.is_positive()));
        d
    }

    #[test]
    fn two_by_two() {
        let m = IntMatrix::from_rows(&[vec![2i64, 4], vec![6, 8]]).unwrap();
        assert_eq!(check(&m).diagonal(), big_vec(&[2, 4]));
    }

    #[test]
    fn identity_and_zero() {
        let d = check(&IntMatrix::identity(3));
        assert_eq!(d.s, IntMatrix::identity(3));
        assert_eq!(d.p, IntMatrix::identity(3));
        assert_eq!(d.q, IntMatrix::identity(3));
        let d = check(&IntMatrix::zeros(2, 3));
        assert!(d.s.is_zero());
        assert_eq!(d.rank, 0);
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2,3) must become diag(1,6)
        let m = IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]).unwrap();
        assert_eq!(check(&m).diagonal(), big_vec(&[1, 6]));
    }

    #[test]
    fn kernel_of_designated() {
        let m = IntMatrix::from_rows(&[vec![0i64, -1, 0], vec![-1, 0, -1], vec![0, -1, 0]]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(v == &big_vec(&[1, 0, -1]) || v == &big_vec(&[-1, 0, 1]));
        assert!(kernel_basis(&IntMatrix::identity(4)).is_empty());
        assert_eq!(kernel_basis(&IntMatrix::zeros(3, 3)).len(), 3);
    }

    #[test]
    fn solving() {
        let m = IntMatrix::from_rows(&[vec![2i64, 3]]).unwrap();
        let x = solve_integer(&m, &big_vec(&[1])).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), big_vec(&[1]));
        let m = IntMatrix::from_rows(&[vec![2i64]]).unwrap();
        assert_eq!(solve_integer(&m, &big_vec(&[3])).unwrap(), None);
        let x = solve_integer(&IntMatrix::identity(3), &big_vec(&[4, -1, 7])).unwrap();
        assert_eq!(x, Some(big_vec(&[4, -1, 7])));
        assert!(solve_integer(&IntMatrix::identity(2), &big_vec(&[1])).is_err());
    }
}
