//! Dense exact linear algebra over the rationals, sized for the small
//! systems this crate builds (basis changes, arrangement vertices).

use crate::rational::Q;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<Q>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..2 * n {
                    let t = a[col][c] * f;
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).fold(Q::zero(), |acc, k| acc + row[k] * b[k][c]))
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[Q], m: &Matrix) -> Vec<Q> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|c| v.iter().zip(m).fold(Q::zero(), |acc, (x, row)| acc + *x * row[c]))
        .collect()
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if !a[i][c].is_zero() {
                let f = a[i][c] / a[r][c];
                for k in c..cols {
                    let t = a[r][k] * f;
                    a[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Solves the square system `a x = b`; `None` when singular.
pub fn solve(a: &Matrix, b: &[Q]) -> Option<Vec<Q>> {
    let inv = inverse(a)?;
    Some(
        inv.iter()
            .map(|row| row.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + *x * *y))
            .collect(),
    )
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}
