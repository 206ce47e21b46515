//! Exact Gaussian elimination over a field handle.
//!
//! Matrices are dense row-major `Vec<Vec<Elem>>`. Everything here is valid
//! over any of the supported fields, including quadratic extensions.

use crate::error::{Error, Result};
use crate::fields::{Elem, Field};

pub type Matrix = Vec<Vec<Elem>>;

pub fn zeros(f: &Field, rows: usize, cols: usize) -> Matrix {
    vec![vec![f.zero(); cols]; rows]
}

pub fn identity(f: &Field, n: usize) -> Matrix {
    let mut m = zeros(f, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = f.one();
    }
    m
}

pub fn transpose(f: &Field, m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut out = zeros(f, cols, rows);
    for i in 0..rows {
        for j in 0..cols {
            out[j][i] = m[i][j].clone();
        }
    }
    out
}

pub fn mat_mul(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = zeros(f, rows, cols);
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                let t = f.mul(&a[i][k], &b[k][j]);
                out[i][j] = f.add(&out[i][j], &t);
            }
        }
    }
    out
}

pub fn mat_vec(f: &Field, a: &Matrix, v: &[Elem]) -> Vec<Elem> {
    a.iter()
        .map(|row| {
            let mut acc = f.zero();
            for (x, y) in row.iter().zip(v) {
                acc = f.add(&acc, &f.mul(x, y));
            }
            acc
        })
        .collect()
}

/// Row echelon form in place; returns the pivot column of each pivot row.
pub fn row_reduce(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(sel) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, sel);
        let inv = f.inv(&m[r][c]).expect("pivot nonzero");
        for j in c..cols {
            m[r][j] = f.mul(&m[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(f: &Field, m: &Matrix) -> usize {
    let mut copy = m.clone();
    row_reduce(f, &mut copy).len()
}

/// Basis of the right kernel {v : Mv = 0}.
pub fn kernel(f: &Field, m: &Matrix) -> Vec<Vec<Elem>> {
    let cols = if m.is_empty() { return Vec::new() } else { m[0].len() };
    let mut copy = m.clone();
    let pivots = row_reduce(f, &mut copy);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            // pivot row: x_pc = -sum over free columns
            v[pc] = f.neg(&copy[row][free]);
        }
        basis.push(v);
    }
    basis
}

/// Solves Mx = b; returns one solution if consistent.
pub fn solve(f: &Field, m: &Matrix, b: &[Elem]) -> Option<Vec<Elem>> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(f, &mut aug);
    // inconsistency: pivot in the last column
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

/// Determinant by fraction-free-ish elimination (field version).
pub fn det(f: &Field, m: &Matrix) -> Elem {
    let n = m.len();
    if n == 0 {
        return f.one();
    }
    let mut a = m.clone();
    let mut acc = f.one();
    for c in 0..n {
        let Some(sel) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return f.zero();
        };
        if sel != c {
            a.swap(c, sel);
            acc = f.neg(&acc);
        }
        acc = f.mul(&acc, &a[c][c]);
        let inv = f.inv(&a[c][c]).expect("pivot nonzero");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = f.mul(&a[i][c], &inv);
            for j in c..n {
                let t = f.mul(&factor, &a[c][j]);
                a[i][j] = f.sub(&a[i][j], &t);
            }
        }
    }
    acc
}

pub fn invert(f: &Field, m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { f.one() } else { f.zero() });
            }
            r
        })
        .collect();
    let pivots = row_reduce(f, &mut aug);
    if pivots.len() < n {
        return Err(Error::InvalidInput("matrix is singular".into()));
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// True when the rows of `vectors` are linearly independent.
pub fn independent(f: &Field, vectors: &[Vec<Elem>]) -> bool {
    if vectors.is_empty() {
        return true;
    }
    rank(f, &vectors.to_vec()) == vectors.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(f: &Field, data: &[&[i64]]) -> Matrix {
        data.iter()
            .map(|row| row.iter().map(|&v| f.from_i64(v)).collect())
            .collect()
    }

    #[test]
    fn kernel_and_rank() {
        let f = Field::prime(5).unwrap();
        let m = mat(&f, &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&f, &m), 2);
        let ker = kernel(&f, &m);
        assert_eq!(ker.len(), 1);
        for v in &ker {
            let img = mat_vec(&f, &m, v);
            assert!(img.iter().all(Elem::is_zero));
        }
    }

    #[test]
    fn solve_and_invert() {
        let f = Field::rationals();
        let m = mat(&f, &[&[2, 1], &[1, 3]]);
        let b = vec![f.from_i64(5), f.from_i64(10)];
        let x = solve(&f, &m, &b).unwrap();
        assert_eq!(mat_vec(&f, &m, &x), b);
        let inv = invert(&f, &m).unwrap();
        assert_eq!(mat_mul(&f, &m, &inv), identity(&f, 2));
        assert_eq!(det(&f, &m), f.from_i64(5));
    }

    #[test]
    fn inconsistent_system() {
        let f = Field::prime(3).unwrap();
        let m = mat(&f, &[&[1, 1], &[1, 1]]);
        let b = vec![f.from_i64(1), f.from_i64(2)];
        assert!(solve(&f, &m, &b).is_none());
    }
}
