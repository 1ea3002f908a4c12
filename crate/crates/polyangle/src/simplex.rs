//! Exact phase-I simplex over rationals.
//!
//! Answers conic/convex feasibility questions exactly: the phase-I optimum is
//! the L1 infeasibility of {x >= 0 : A x = b}, zero precisely when the system
//! is feasible. Bland's rule guarantees termination. Problem sizes here stay
//! at desk scale (tens of rows and columns), so exact pivoting is cheap.

use num::traits::{One, Signed, Zero};

use crate::ratmat::Rat;

/// Minimum of sum(artificials) for {x >= 0 : A x = b}; zero iff feasible.
/// `a` is given row-major, `a.len()` rows each of length `ncols`.
pub fn phase1_infeasibility(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Rat {
    let m = a.len();
    debug_assert_eq!(b.len(), m);
    // tableau columns: [x (ncols) | artificials (m) | rhs]
    let width = ncols + m + 1;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let mut r = vec![Rat::zero(); width];
        let flip = b[i].is_negative();
        for (j, v) in row.iter().enumerate() {
            r[j] = if flip { -v.clone() } else { v.clone() };
        }
        r[ncols + i] = Rat::one();
        r[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(r);
    }
    // objective row: reduced costs for minimizing sum of artificials, with
    // the artificial basis priced out: z_j - c_j = sum over rows of column j
    let mut obj = vec![Rat::zero(); width];
    for j in 0..width {
        let mut s = Rat::zero();
        for row in t.iter() {
            s += row[j].clone();
        }
        obj[j] = s;
    }
    for i in 0..m {
        obj[ncols + i] = Rat::zero();
    }
    let mut basis: Vec<usize> = (ncols..ncols + m).collect();

    loop {
        // Bland: entering = smallest index with positive reduced cost
        let Some(enter) = (0..ncols + m).find(|&j| obj[j].is_positive()) else {
            break;
        };
        // ratio test, Bland tie-break by smallest basis index
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(li) = leave else {
            // unbounded phase-I cannot happen (objective bounded below by 0),
            // but guard against it
            break;
        };
        // pivot
        let piv = t[li][enter].clone();
        for v in t[li].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..m {
            if i != li && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..width {
                    let d = &t[li][j] * &f;
                    t[i][j] = &t[i][j] - d;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..width {
                let d = &t[li][j] * &f;
                obj[j] = &obj[j] - d;
            }
        }
        basis[li] = enter;
    }

    // objective value = sum of artificial variables in the basis
    let mut val = Rat::zero();
    for (i, &bi) in basis.iter().enumerate() {
        if bi >= ncols {
            val += t[i][width - 1].clone();
        }
    }
    val
}

/// Is `target` a nonnegative combination of `columns` (within L1 slack `tol`)?
pub fn in_cone(columns: &[Vec<Rat>], target: &[Rat], tol: &Rat) -> bool {
    let m = target.len();
    let ncols = columns.len();
    let rows: Vec<Vec<Rat>> = (0..m)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let inf = phase1_infeasibility(&rows, target, ncols);
    inf <= *tol
}

/// Is `target` in the convex hull of `points` (exact)?
pub fn in_convex_hull(points: &[Vec<Rat>], target: &[Rat]) -> bool {
    if points.is_empty() {
        return false;
    }
    let m = target.len();
    let ncols = points.len();
    let mut rows: Vec<Vec<Rat>> = (0..m)
        .map(|i| points.iter().map(|p| p[i].clone()).collect())
        .collect();
    rows.push(vec![Rat::one(); ncols]);
    let mut b = target.to_vec();
    b.push(Rat::one());
    phase1_infeasibility(&rows, &b, ncols).is_zero()
}

/// Find c with <g_i, c> >= 1 for all rows g_i (c free), or None.
/// Used to pick a cross-section hyperplane for pointed cones.
pub fn strictly_positive_functional(rays: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    if rays.is_empty() {
        return None;
    }
    let n = rays[0].len();
    let m = rays.len();
    // <g_i, c+ - c-> - s_i = 1, all variables >= 0
    let ncols = 2 * n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, g) in rays.iter().enumerate() {
        let mut row = vec![Rat::zero(); ncols];
        for j in 0..n {
            row[j] = g[j].clone();
            row[n + j] = -g[j].clone();
        }
        row[2 * n + i] = -Rat::one();
        rows.push(row);
    }
    let b = vec![Rat::one(); m];
    // solve feasibility and recover c by re-running with solution extraction:
    // simplest route: binary feasibility answer via phase-I is not enough, we
    // need the point. Run a small tableau that keeps track of x.
    let (inf, x) = phase1_with_solution(&rows, &b, ncols);
    if !inf.is_zero() {
        return None;
    }
    let mut c = vec![Rat::zero(); n];
    for j in 0..n {
        c[j] = &x[j] - &x[n + j];
    }
    Some(c)
}

/// Phase-I that also returns the primal solution x (zero-extended).
pub fn phase1_with_solution(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> (Rat, Vec<Rat>) {
    let m = a.len();
    let width = ncols + m + 1;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let mut r = vec![Rat::zero(); width];
        let flip = b[i].is_negative();
        for (j, v) in row.iter().enumerate() {
            r[j] = if flip { -v.clone() } else { v.clone() };
        }
        r[ncols + i] = Rat::one();
        r[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(r);
    }
    let mut obj = vec![Rat::zero(); width];
    for j in 0..width {
        let mut s = Rat::zero();
        for row in t.iter() {
            s += row[j].clone();
        }
        obj[j] = s;
    }
    for i in 0..m {
        obj[ncols + i] = Rat::zero();
    }
    let mut basis: Vec<usize> = (ncols..ncols + m).collect();
    loop {
        let Some(enter) = (0..ncols + m).find(|&j| obj[j].is_positive()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(li) = leave else { break };
        let piv = t[li][enter].clone();
        for v in t[li].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..m {
            if i != li && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..width {
                    let d = &t[li][j] * &f;
                    t[i][j] = &t[i][j] - d;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..width {
                let d = &t[li][j] * &f;
                obj[j] = &obj[j] - d;
            }
        }
        basis[li] = enter;
    }
    let mut val = Rat::zero();
    let mut x = vec![Rat::zero(); ncols];
    for (i, &bi) in basis.iter().enumerate() {
        if bi >= ncols {
            val += t[i][width - 1].clone();
        } else {
            x[bi] = t[i][width - 1].clone();
        }
    }
    (val, x)
}
