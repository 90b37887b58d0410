//! Scalar and dense-matrix arithmetic over the prime field GF(p).

use crate::group::mod_pow;

/// The prime field GF(p), carried as context by the matrix routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Self { p }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.p as u128) as u64
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p), "division by zero in GF({})", self.p);
        mod_pow(a, self.p - 2, self.p)
    }

    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }
}

pub type Mat = Vec<Vec<u64>>;

/// Reduced row-echelon form in place; returns the pivot columns. Zero rows
/// are removed, so the result is the canonical basis of the row space.
pub fn rref(fp: &Fp, mat: &mut Mat) -> Vec<usize> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = fp.inv(mat[r][c]);
        for x in mat[r].iter_mut() {
            *x = fp.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && mat[i][c] != 0 {
                let factor = mat[i][c];
                for j in 0..cols {
                    let sub = fp.mul(factor, mat[r][j]);
                    mat[i][j] = fp.sub(mat[i][j], sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    mat.truncate(r);
    pivots
}

pub fn rank(fp: &Fp, mat: &Mat) -> usize {
    let mut m = mat.clone();
    rref(fp, &mut m).len()
}

/// Basis of the right nullspace {x : M·x = 0}, rows of length `cols`.
pub fn kernel_basis(fp: &Fp, mat: &Mat, cols: usize) -> Mat {
    let mut m = mat.clone();
    let pivots = rref(fp, &mut m);
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; cols];
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = Some(row);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut x = vec![0u64; cols];
        x[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = fp.neg(m[row][free]);
        }
        basis.push(x);
    }
    basis
}

pub fn mat_mul(fp: &Fp, a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let inner = b.len();
    let m = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0u64; m]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] = fp.add(out[i][j], fp.mul(a[i][k], b[k][j]));
            }
        }
    }
    out
}

pub fn mat_vec(fp: &Fp, a: &Mat, x: &[u64]) -> Vec<u64> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0u64, |acc, (&m, &v)| fp.add(acc, fp.mul(m, v)))
        })
        .collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

/// Matrix inverse by Gauss-Jordan; None when singular.
pub fn mat_inverse(fp: &Fp, a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut aug: Mat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    let pivots = rref(fp, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn is_invertible(fp: &Fp, a: &Mat) -> bool {
    !a.is_empty() && a.len() == a[0].len() && rank(fp, a) == a.len()
}
