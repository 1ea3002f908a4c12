//! Exact convex-hull primitives shared by the polytope and cone layers:
//! affine charts, extreme-point filtering, brute-force facet enumeration,
//! and pulling triangulations. Everything here is rational; callers convert
//! to floats only for metric quantities.

use std::collections::BTreeSet;

use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratmat::{self, Rat};
use crate::simplex;

/// Rational affine chart for a point set: a base point plus an independent
/// set of direction rows spanning the affine hull, with the exact left
/// inverse used to map ambient points into local coordinates.
#[derive(Debug, Clone)]
pub struct AffineChart {
    pub base: Vec<Rat>,
    /// Rows spanning the direction space (dim x n).
    pub dirs: Vec<Vec<Rat>>,
    /// Left inverse of dirs^T (dim x n): local = left * (ambient - base).
    pub left: Vec<Vec<Rat>>,
    /// Basis of the annihilator {c : <c, d> = 0 for all direction rows}.
    pub annihilator: Vec<Vec<Rat>>,
    /// Input points in local coordinates (full-dimensional).
    pub local: Vec<Vec<Rat>>,
}

impl AffineChart {
    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn to_local(&self, ambient: &[Rat]) -> Vec<Rat> {
        let diff = ratmat::sub(ambient, &self.base);
        self.left.iter().map(|row| ratmat::dot(row, &diff)).collect()
    }

    pub fn to_ambient(&self, local: &[Rat]) -> Vec<Rat> {
        let n = self.base.len();
        let mut out = self.base.clone();
        for (t, dir) in local.iter().zip(&self.dirs) {
            for i in 0..n {
                out[i] += t * &dir[i];
            }
        }
        out
    }

    /// Does the ambient point lie on the affine hull?
    pub fn on_hull(&self, ambient: &[Rat]) -> bool {
        let diff = ratmat::sub(ambient, &self.base);
        self.annihilator.iter().all(|c| ratmat::dot(c, &diff).is_zero())
    }
}

/// Build the affine chart of a nonempty point set.
pub fn affine_chart(points: &[Vec<Rat>]) -> Result<AffineChart> {
    let Some(base) = points.first() else {
        return Err(Error::invalid("affine chart of an empty point set"));
    };
    let n = base.len();
    let mut dirs: Vec<Vec<Rat>> = Vec::new();
    for p in &points[1..] {
        let d = ratmat::sub(p, base);
        if d.iter().all(|x| x.is_zero()) {
            continue;
        }
        dirs.push(d);
        if ratmat::rank(&dirs) < dirs.len() {
            dirs.pop();
        }
        if dirs.len() == n {
            break;
        }
    }
    // left inverse: (D D^T)^{-1} D
    let d = dirs.len();
    let mut left = Vec::with_capacity(d);
    if d > 0 {
        let mut ddt = vec![vec![Rat::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                ddt[i][j] = ratmat::dot(&dirs[i], &dirs[j]);
            }
        }
        let mut inv_rows = Vec::with_capacity(d);
        for i in 0..d {
            let mut e = vec![Rat::zero(); d];
            e[i] = Rat::one();
            let col = ratmat::solve(&ddt, &e)
                .ok_or_else(|| Error::invalid("gram matrix of independent rows is singular"))?;
            inv_rows.push(col);
        }
        for inv in &inv_rows {
            let mut row = vec![Rat::zero(); n];
            for (w, dir) in inv.iter().zip(&dirs) {
                for i in 0..n {
                    row[i] += w * &dir[i];
                }
            }
            left.push(row);
        }
    }
    let annihilator = ratmat::kernel(&dirs, n);
    let mut chart = AffineChart { base: base.clone(), dirs, left, annihilator, local: Vec::new() };
    chart.local = points.iter().map(|p| chart.to_local(p)).collect();
    Ok(chart)
}

/// Indices of the points that are vertices of the convex hull.
pub fn extreme_points(points: &[Vec<Rat>]) -> Vec<usize> {
    if points.first().map(|p| p.len()) == Some(2) {
        return extreme_points_2d(points);
    }
    let mut out = Vec::new();
    for i in 0..points.len() {
        // duplicates: keep only the first occurrence
        if points[..i].iter().any(|q| q == &points[i]) {
            continue;
        }
        let others: Vec<Vec<Rat>> = points
            .iter()
            .enumerate()
            .filter(|&(j, q)| j != i && q != &points[i])
            .map(|(_, q)| q.clone())
            .collect();
        if others.is_empty() || !simplex::in_convex_hull(&others, &points[i]) {
            out.push(i);
        }
    }
    out
}

/// Planar special case: exact monotone-chain hull instead of one linear
/// program per point.
fn extreme_points_2d(points: &[Vec<Rat>]) -> Vec<usize> {
    let mut idx: Vec<usize> = Vec::new();
    for i in 0..points.len() {
        if !points[..i].iter().any(|q| q == &points[i]) {
            idx.push(i);
        }
    }
    if idx.len() <= 2 {
        return idx;
    }
    idx.sort_by(|&a, &b| {
        (&points[a][0], &points[a][1]).cmp(&(&points[b][0], &points[b][1]))
    });
    let cross = |o: usize, a: usize, b: usize| -> Rat {
        let (po, pa, pb) = (&points[o], &points[a], &points[b]);
        (&pa[0] - &po[0]) * (&pb[1] - &po[1]) - (&pa[1] - &po[1]) * (&pb[0] - &po[0])
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for &p in &idx {
        while hull.len() >= 2
            && !cross(hull[hull.len() - 2], hull[hull.len() - 1], p).is_positive()
        {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in idx.iter().rev() {
        while hull.len() >= lower_len
            && !cross(hull[hull.len() - 2], hull[hull.len() - 1], p).is_positive()
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    let set: BTreeSet<usize> = hull.into_iter().collect();
    set.into_iter().collect()
}

/// A supporting hyperplane of a full-dimensional hull together with the
/// indices of all incident points: <normal, x> <= offset on the hull.
#[derive(Debug, Clone)]
pub struct HullFacet {
    pub normal: Vec<Rat>,
    pub offset: Rat,
    pub points: BTreeSet<usize>,
}

/// Brute-force facet enumeration for a full-dimensional point set in R^d:
/// every d-subset of extreme points spanning a supporting hyperplane yields
/// a facet; facets are deduplicated by their incident point sets.
pub fn facets(points: &[Vec<Rat>], extreme: &[usize]) -> Vec<HullFacet> {
    let d = points.first().map(|p| p.len()).unwrap_or(0);
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    if d == 0 || extreme.len() < d {
        return out;
    }
    let mut choice = vec![0usize; d];
    enumerate_subsets(extreme.len(), d, &mut choice, 0, 0, &mut |sel| {
        let idx: Vec<usize> = sel.iter().map(|&s| extreme[s]).collect();
        let p0 = &points[idx[0]];
        let rows: Vec<Vec<Rat>> = idx[1..].iter().map(|&i| ratmat::sub(&points[i], p0)).collect();
        let kern = ratmat::kernel(&rows, d);
        if kern.len() != 1 {
            return; // affinely dependent subset or degenerate
        }
        let mut normal = kern.into_iter().next().unwrap();
        let mut offset = ratmat::dot(&normal, p0);
        let mut above = false;
        let mut below = false;
        for p in points {
            let v = ratmat::dot(&normal, p);
            if v > offset {
                above = true;
            } else if v < offset {
                below = true;
            }
            if above && below {
                return; // not supporting
            }
        }
        if above {
            for x in &mut normal {
                *x = -x.clone();
            }
            offset = -offset;
        }
        let incident: BTreeSet<usize> = points
            .iter()
            .enumerate()
            .filter(|(_, p)| ratmat::dot(&normal, p) == offset)
            .map(|(i, _)| i)
            .collect();
        if seen.insert(incident.clone()) {
            out.push(HullFacet { normal, offset, points: incident });
        }
    });
    out
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    choice: &mut Vec<usize>,
    pos: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if pos == k {
        f(choice);
        return;
    }
    for v in start..=(n - (k - pos)) {
        choice[pos] = v;
        enumerate_subsets(n, k, choice, pos + 1, v + 1, f);
    }
}

/// Pulling triangulation of the convex hull of a point set (given by ambient
/// rational coordinates): a list of simplices as index tuples into `points`,
/// meeting face to face, each simplex containing the smallest extreme index
/// of its recursion level. Dimension is the affine dimension of the set.
pub fn pulling_triangulation(points: &[Vec<Rat>]) -> Result<Vec<Vec<usize>>> {
    let idx: Vec<usize> = (0..points.len()).collect();
    triangulate_subset(points, &idx)
}

fn triangulate_subset(points: &[Vec<Rat>], subset: &[usize]) -> Result<Vec<Vec<usize>>> {
    let sub_pts: Vec<Vec<Rat>> = subset.iter().map(|&i| points[i].clone()).collect();
    let chart = affine_chart(&sub_pts)?;
    let d = chart.dim();
    let ext_local = extreme_points(&chart.local);
    let ext: Vec<usize> = ext_local.iter().map(|&i| subset[i]).collect();
    if d == 0 {
        return Ok(vec![vec![subset[0]]]);
    }
    if ext.len() == d + 1 {
        let mut s = ext.clone();
        s.sort_unstable();
        return Ok(vec![s]);
    }
    let apex_pos = ext_local
        .iter()
        .enumerate()
        .min_by_key(|&(_, &li)| subset[li])
        .map(|(p, _)| p)
        .expect("nonempty extreme set");
    let apex_local = ext_local[apex_pos];
    let apex = subset[apex_local];
    let fs = facets(&chart.local, &ext_local);
    let mut out = Vec::new();
    for f in fs {
        if f.points.contains(&apex_local) {
            continue;
        }
        let face_subset: Vec<usize> = f.points.iter().map(|&i| subset[i]).collect();
        for mut simplex in triangulate_subset(points, &face_subset)? {
            simplex.push(apex);
            simplex.sort_unstable();
            out.push(simplex);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::rat;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn chart_of_planar_set_in_3d() {
        let p = pts(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1]]);
        let c = affine_chart(&p).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.on_hull(&[rat(2), rat(2), rat(1)]));
        assert!(!c.on_hull(&[rat(0), rat(0), rat(0)]));
        let l = c.to_local(&p[1]);
        assert_eq!(c.to_ambient(&l), p[1]);
    }

    #[test]
    fn extreme_point_filter() {
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[2, 0]]);
        let e = extreme_points(&p);
        assert_eq!(e, vec![0, 1, 2, 3]);
    }

    #[test]
    fn square_facets() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let e = extreme_points(&p);
        let fs = facets(&p, &e);
        assert_eq!(fs.len(), 4);
        for f in &fs {
            assert_eq!(f.points.len(), 2);
        }
    }

    #[test]
    fn cube_triangulates_into_six_or_fewer() {
        let mut p = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    p.push(vec![rat(x), rat(y), rat(z)]);
                }
            }
        }
        let t = pulling_triangulation(&p).unwrap();
        // pulling triangulation of the cube from a corner: 6 tetrahedra
        assert_eq!(t.len(), 6);
        for s in &t {
            assert_eq!(s.len(), 4);
        }
        // total volume 1 (via float Gram determinants)
        let vol: f64 = t
            .iter()
            .map(|s| {
                let base = &p[s[0]];
                let dirs: Vec<Vec<Rat>> =
                    s[1..].iter().map(|&i| ratmat::sub(&p[i], base)).collect();
                let g = ratmat::gram_det(&dirs);
                ratmat::rat_to_f64(&g).sqrt() / 6.0
            })
            .sum();
        assert!((vol - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_with_interior_point_triangulates() {
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1]]);
        let t = pulling_triangulation(&p).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|s| !s.contains(&4)));
    }
}
