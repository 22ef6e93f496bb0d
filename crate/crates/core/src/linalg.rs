//! Small exact linear algebra over the rationals: echelon forms, rank and kernels.

use num_traits::{One, Zero};

use crate::scalar::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form. Returns the reduced rows (zero rows dropped) and
/// the pivot column of each.
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{ v : M v = 0 }` with `M` given by rows.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Matrix {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Echelon basis of the span of the given vectors; deterministic pivot order.
pub fn span_basis(vectors: &[Vec<Rational>], ncols: usize) -> Matrix {
    rref(vectors, ncols).0
}

pub fn in_span(basis: &[Vec<Rational>], v: &[Rational], ncols: usize) -> bool {
    let mut rows = basis.to_vec();
    let before = rank(&rows, ncols);
    rows.push(v.to_vec());
    rank(&rows, ncols) == before
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

pub fn is_zero_matrix(m: &[Vec<Rational>]) -> bool {
    m.iter().all(|r| r.iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a, 3), 2);
        let k = nullspace(&a, 3);
        assert_eq!(k.len(), 1);
        let column: Matrix = k[0].iter().map(|x| vec![x.clone()]).collect();
        assert!(is_zero_matrix(&mat_mul(&a, &column)));
    }

    #[test]
    fn span_membership() {
        let b = span_basis(&m(&[&[1, 0, 1], &[0, 1, 1]]), 3);
        assert!(in_span(&b, &m(&[&[2, 3, 5]])[0], 3));
        assert!(!in_span(&b, &m(&[&[0, 0, 1]])[0], 3));
        assert_eq!(rank(&[], 3), 0);
        assert_eq!(nullspace(&[], 2).len(), 2);
    }
}
