//! Exact rational linear algebra for the combinatorial layer.
//!
//! All face-lattice and cone-structure decisions run over `BigRational`;
//! floats enter only at the metric layer (volumes, angles, sampling).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(i: i64) -> Rat {
    Rat::from_integer(BigInt::from(i))
}

/// Exact conversion; every finite f64 is a binary rational.
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float required")
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
    })
}

pub fn vec_from_f64(v: &[f64]) -> Vec<Rat> {
    v.iter().map(|&x| rat_from_f64(x)).collect()
}

pub fn vec_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Row-reduce in place; returns the pivot column of each pivot row.
fn row_echelon(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let mut pivots = Vec::new();
    if rows.is_empty() {
        return pivots;
    }
    let ncols = rows[0].len();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] = &rows[i][j] - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    row_echelon(&mut m).len()
}

/// Basis of the kernel {x : rows * x = 0}.
pub fn kernel(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    if m.is_empty() {
        return (0..ncols)
            .map(|i| {
                let mut e = vec![Rat::zero(); ncols];
                e[i] = Rat::one();
                e
            })
            .collect();
    }
    let pivots = row_echelon(&mut m);
    let pivset: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivset.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (pr, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[pr][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve the square system A x = b exactly; None if singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_echelon(&mut m);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (pr, &pc) in pivots.iter().enumerate() {
        x[pc] = m[pr][n].clone();
    }
    Some(x)
}

/// Solve the (possibly rectangular, consistent) system A x = b where A has
/// full column rank; None if inconsistent or rank-deficient.
pub fn solve_full_column_rank(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_echelon(&mut m);
    // inconsistent if a pivot lands in the augmented column
    if pivots.iter().any(|&c| c == ncols) {
        return None;
    }
    if pivots.len() != ncols {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (pr, &pc) in pivots.iter().enumerate() {
        x[pc] = m[pr][ncols].clone();
    }
    Some(x)
}

/// Exact Gram-Schmidt without normalization: pairwise orthogonal rational
/// vectors spanning the same flag; input vectors must be independent.
pub fn orthogonalize(vectors: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for b in &out {
            let coeff = dot(&w, b) / dot(b, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= &coeff * bi;
            }
        }
        out.push(w);
    }
    out
}

/// Gram determinant of a set of rational vectors (exact squared volume).
pub fn gram_det(vectors: &[Vec<Rat>]) -> Rat {
    let k = vectors.len();
    if k == 0 {
        return Rat::one();
    }
    let mut g: Vec<Vec<Rat>> = vec![vec![Rat::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            g[i][j] = dot(&vectors[i], &vectors[j]);
        }
    }
    det(&g)
}

/// Exact determinant by fraction-free-ish Gaussian elimination.
pub fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut result = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            result = -result;
        }
        result *= a[c][c].clone();
        let inv = a[c][c].clone();
        for i in (c + 1)..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &inv;
                for j in c..n {
                    let t = &a[c][j] * &f;
                    a[i][j] = &a[i][j] - t;
                }
            }
        }
    }
    result
}

/// Signed floating absolute value guard for diagnostics.
pub fn rat_abs(x: &Rat) -> Rat {
    x.abs()
}
