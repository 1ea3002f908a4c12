//! Exact-rational convex polytopes: face lattices, tangent cones, face
//! volumes, distance queries and flat slices.
//!
//! All combinatorial decisions (which vertex subsets span supporting
//! hyperplanes, which faces coincide) are made in exact rational arithmetic;
//! floats appear only in metric outputs. Lower-dimensional input is handled
//! by computing inside the affine hull.

use std::collections::{BTreeSet, VecDeque};

use num::traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::cones::PolyCone;
use crate::error::{Error, Result};
use crate::hull::{self, AffineChart};
use crate::mc;
use crate::ratmat::{self, Rat};

/// Axis-aligned localization window; `All` means all of R^n.
#[derive(Debug, Clone, PartialEq)]
pub enum BorelBox {
    All,
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

impl BorelBox {
    pub fn aligned(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::invalid("box needs lo <= hi componentwise"));
        }
        Ok(BorelBox::Box { lo, hi })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            BorelBox::All => true,
            BorelBox::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(xi, (l, h))| *xi >= *l && *xi <= *h),
        }
    }

    /// Translate the window by t.
    pub fn translate(&self, t: &[f64]) -> BorelBox {
        match self {
            BorelBox::All => BorelBox::All,
            BorelBox::Box { lo, hi } => BorelBox::Box {
                lo: lo.iter().zip(t).map(|(a, b)| a + b).collect(),
                hi: hi.iter().zip(t).map(|(a, b)| a + b).collect(),
            },
        }
    }

    /// The reflected window -U.
    pub fn negate(&self) -> BorelBox {
        match self {
            BorelBox::All => BorelBox::All,
            BorelBox::Box { lo, hi } => BorelBox::Box {
                lo: hi.iter().map(|x| -x).collect(),
                hi: lo.iter().map(|x| -x).collect(),
            },
        }
    }
}

/// A face of the polytope.
#[derive(Debug, Clone)]
pub struct Face {
    pub dim: usize,
    pub vertex_indices: Vec<usize>,
    /// Orthonormal basis (ambient coordinates) of the direction space of the
    /// affine hull of the face.
    pub affine_basis: Vec<Vec<f64>>,
    pub barycenter: Vec<f64>,
}

/// Convex polytope with exact rational vertices and a derived H-representation
/// and face lattice.
#[derive(Debug, Clone)]
pub struct Polytope {
    n: usize,
    vertices: Vec<Vec<Rat>>,
    vertices_f64: Vec<Vec<f64>>,
    dim: usize,
    chart: AffineChart,
    /// Facet inequalities in ambient coordinates: <normal, x> <= offset,
    /// valid together with the affine-hull equality constraints.
    facet_normals: Vec<Vec<Rat>>,
    facet_offsets: Vec<Rat>,
    facet_vertex_sets: Vec<BTreeSet<usize>>,
    facet_normals_f64: Vec<Vec<f64>>,
    facet_offsets_f64: Vec<f64>,
    hull_equalities_f64: Vec<(Vec<f64>, f64)>,
    faces: Vec<Face>,
}

impl Polytope {
    /// Build from rational points; non-extreme points are dropped. The face
    /// lattice is computed eagerly.
    pub fn from_rational_vertices(n: usize, points: Vec<Vec<Rat>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a polytope needs at least one vertex"));
        }
        if points.iter().any(|p| p.len() != n) {
            return Err(Error::dim("vertex length differs from n"));
        }
        if points.len() > 64 {
            return Err(Error::invalid("at most 64 vertices supported"));
        }
        if n > 8 {
            return Err(Error::invalid("ambient dimension at most 8 supported"));
        }
        let chart0 = hull::affine_chart(&points)?;
        let extreme = hull::extreme_points(&chart0.local);
        let vertices: Vec<Vec<Rat>> = extreme.iter().map(|&i| points[i].clone()).collect();
        let chart = hull::affine_chart(&vertices)?;
        let dim = chart.dim();
        let local_facets = hull::facets(&chart.local, &(0..vertices.len()).collect::<Vec<_>>());
        // map local inequalities <a, t> <= b to ambient <a L, x - base> <= b
        let mut facet_normals = Vec::with_capacity(local_facets.len());
        let mut facet_offsets = Vec::with_capacity(local_facets.len());
        let mut facet_vertex_sets = Vec::with_capacity(local_facets.len());
        for f in &local_facets {
            let mut normal = vec![Rat::zero(); n];
            for (ai, lrow) in f.normal.iter().zip(&chart.left) {
                for (nj, lj) in normal.iter_mut().zip(lrow) {
                    *nj += ai * lj;
                }
            }
            let offset = &f.offset + ratmat::dot(&normal, &chart.base);
            facet_normals.push(normal);
            facet_offsets.push(offset);
            facet_vertex_sets.push(f.points.clone());
        }
        let vertices_f64: Vec<Vec<f64>> = vertices.iter().map(|v| ratmat::vec_to_f64(v)).collect();
        let facet_normals_f64: Vec<Vec<f64>> =
            facet_normals.iter().map(|v| ratmat::vec_to_f64(v)).collect();
        let facet_offsets_f64: Vec<f64> = facet_offsets.iter().map(ratmat::rat_to_f64).collect();
        let hull_equalities_f64: Vec<(Vec<f64>, f64)> = chart
            .annihilator
            .iter()
            .map(|c| {
                let cf = ratmat::vec_to_f64(c);
                let off = ratmat::rat_to_f64(&ratmat::dot(c, &chart.base));
                (cf, off)
            })
            .collect();
        let mut poly = Polytope {
            n,
            vertices,
            vertices_f64,
            dim,
            chart,
            facet_normals,
            facet_offsets,
            facet_vertex_sets,
            facet_normals_f64,
            facet_offsets_f64,
            hull_equalities_f64,
            faces: Vec::new(),
        };
        poly.faces = poly.build_face_lattice()?;
        Ok(poly)
    }

    /// Build from float points (converted exactly to rationals).
    pub fn from_f64_vertices(n: usize, points: &[Vec<f64>]) -> Result<Self> {
        let pts = points.iter().map(|p| ratmat::vec_from_f64(p)).collect();
        Polytope::from_rational_vertices(n, pts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn vertices_f64(&self) -> &[Vec<f64>] {
        &self.vertices_f64
    }

    pub fn facet_count(&self) -> usize {
        self.facet_normals.len()
    }

    /// The complete set of nonempty faces, all dimensions, P included.
    pub fn face_lattice(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == k)
    }

    fn build_face_lattice(&self) -> Result<Vec<Face>> {
        let nv = self.vertices.len();
        let full: BTreeSet<usize> = (0..nv).collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut queue: VecDeque<BTreeSet<usize>> = VecDeque::new();
        seen.insert(full.clone());
        queue.push_back(full.clone());
        while let Some(t) = queue.pop_front() {
            for fs in &self.facet_vertex_sets {
                let s: BTreeSet<usize> = t.intersection(fs).copied().collect();
                if !s.is_empty() && !seen.contains(&s) {
                    seen.insert(s.clone());
                    queue.push_back(s);
                }
            }
        }
        let mut faces = Vec::with_capacity(seen.len());
        for s in seen {
            faces.push(self.make_face(s)?);
        }
        faces.sort_by_key(|f| (f.dim, f.vertex_indices.clone()));
        Ok(faces)
    }

    fn make_face(&self, vset: BTreeSet<usize>) -> Result<Face> {
        let idx: Vec<usize> = vset.into_iter().collect();
        let base = &self.vertices[idx[0]];
        let mut dirs: Vec<Vec<Rat>> = Vec::new();
        for &i in &idx[1..] {
            let d = ratmat::sub(&self.vertices[i], base);
            dirs.push(d);
            if ratmat::rank(&dirs) < dirs.len() {
                dirs.pop();
            }
        }
        let dim = dirs.len();
        // exact Gram-Schmidt, then normalize in floats: orthogonality is
        // exact, so sliver faces cannot lose rank here
        let ortho = ratmat::orthogonalize(&dirs);
        let mut affine_basis = Vec::with_capacity(dim);
        for w in &ortho {
            let wf = ratmat::vec_to_f64(w);
            let norm: f64 = wf.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::invalid("face basis orthogonalization lost rank"));
            }
            affine_basis.push(wf.iter().map(|x| x / norm).collect::<Vec<f64>>());
        }
        let mut barycenter = vec![0.0; self.n];
        for &i in &idx {
            for (b, v) in barycenter.iter_mut().zip(&self.vertices_f64[i]) {
                *b += v;
            }
        }
        for b in &mut barycenter {
            *b /= idx.len() as f64;
        }
        Ok(Face { dim, vertex_indices: idx, affine_basis, barycenter })
    }

    /// Euler characteristic of the face poset (must be 1 for a polytope).
    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .map(|f| if f.dim % 2 == 0 { 1i64 } else { -1i64 })
            .sum()
    }

    /// Tangent cone at a face: generators v - b over all vertices v, with
    /// lineality spanning the face direction space.
    pub fn tangent_cone(&self, face: &Face) -> PolyCone {
        let gens: Vec<Vec<f64>> = self
            .vertices_f64
            .iter()
            .map(|v| v.iter().zip(&face.barycenter).map(|(a, b)| a - b).collect())
            .collect();
        PolyCone::new(self.n, gens, face.affine_basis.clone())
            .expect("dimensions verified by construction")
            .normalize()
    }

    /// Membership with tolerance, in ambient coordinates.
    pub fn contains_f64(&self, x: &[f64], tol: f64) -> bool {
        let scale = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for (c, off) in &self.hull_equalities_f64 {
            let v: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
            let cn: f64 = c.iter().map(|a| a * a).sum::<f64>().sqrt();
            if (v - off).abs() > tol * scale * cn.max(1.0) {
                return false;
            }
        }
        for (m, b) in self.facet_normals_f64.iter().zip(&self.facet_offsets_f64) {
            let v: f64 = m.iter().zip(x).map(|(a, b)| a * b).sum();
            let mn: f64 = m.iter().map(|a| a * a).sum::<f64>().sqrt();
            if v - b > tol * scale * mn.max(1.0) {
                return false;
            }
        }
        true
    }

    /// Euclidean distance from x to the polytope: project x onto each face's
    /// affine hull, accept projections lying in the face, take the minimum;
    /// zero when x satisfies the H-representation.
    pub fn distance(&self, x: &[f64]) -> f64 {
        if self.contains_f64(x, 1e-12) {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for face in &self.faces {
            // project onto the face's affine hull
            let mut p = face.barycenter.clone();
            let diff: Vec<f64> = x.iter().zip(&face.barycenter).map(|(a, b)| a - b).collect();
            for u in &face.affine_basis {
                let d: f64 = diff.iter().zip(u).map(|(a, b)| a * b).sum();
                for (pi, ui) in p.iter_mut().zip(u) {
                    *pi += d * ui;
                }
            }
            // the projection lies in the face iff it lies in P (it is on the
            // affine hull of the face by construction)
            if self.contains_f64(&p, 1e-9) {
                let d: f64 = x
                    .iter()
                    .zip(&p)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                best = best.min(d);
            }
        }
        best
    }

    /// Exact k-volume of a face via its pulling triangulation and rational
    /// Gram determinants.
    pub fn face_volume_total(&self, face: &Face) -> f64 {
        if face.dim == 0 {
            return 1.0; // counting measure for vertices
        }
        let pts: Vec<Vec<Rat>> =
            face.vertex_indices.iter().map(|&i| self.vertices[i].clone()).collect();
        let tri = hull::pulling_triangulation(&pts).expect("face point set is nonempty");
        let k = face.dim;
        let mut kfact = 1.0;
        for i in 1..=k {
            kfact *= i as f64;
        }
        let mut vol = 0.0;
        for simplex in &tri {
            let base = &pts[simplex[0]];
            let dirs: Vec<Vec<Rat>> =
                simplex[1..].iter().map(|&i| ratmat::sub(&pts[i], base)).collect();
            let g = ratmat::gram_det(&dirs);
            vol += ratmat::rat_to_f64(&g).max(0.0).sqrt() / kfact;
        }
        vol
    }

    /// k-volume of the intersection of a face with a window. Exact for
    /// U = All and for faces of dimension <= 1; Monte Carlo otherwise
    /// (area-weighted sampling over the face triangulation).
    pub fn face_volume(
        &self,
        face: &Face,
        window: &BorelBox,
        samples: u64,
        seed: u64,
    ) -> (f64, f64) {
        match window {
            BorelBox::All => (self.face_volume_total(face), 0.0),
            BorelBox::Box { lo, hi } => {
                if face.dim == 0 {
                    let v = &self.vertices_f64[face.vertex_indices[0]];
                    return (if window.contains(v) { 1.0 } else { 0.0 }, 0.0);
                }
                if face.dim == 1 {
                    return (self.clip_segment(face, lo, hi), 0.0);
                }
                // quick reject/accept via bounding boxes
                let vs: Vec<&Vec<f64>> =
                    face.vertex_indices.iter().map(|&i| &self.vertices_f64[i]).collect();
                let all_in = vs.iter().all(|v| window.contains(v));
                let total = self.face_volume_total(face);
                if all_in {
                    return (total, 0.0);
                }
                let disjoint = (0..self.n).any(|j| {
                    vs.iter().all(|v| v[j] < lo[j] - 1e-12)
                        || vs.iter().all(|v| v[j] > hi[j] + 1e-12)
                });
                if disjoint {
                    return (0.0, 0.0);
                }
                let pts: Vec<Vec<Rat>> =
                    face.vertex_indices.iter().map(|&i| self.vertices[i].clone()).collect();
                let tri = hull::pulling_triangulation(&pts).expect("nonempty face");
                let ptsf: Vec<Vec<f64>> = pts.iter().map(|p| ratmat::vec_to_f64(p)).collect();
                let mut weights = Vec::with_capacity(tri.len());
                let mut wsum = 0.0;
                for simplex in &tri {
                    let base = &pts[simplex[0]];
                    let dirs: Vec<Vec<Rat>> =
                        simplex[1..].iter().map(|&i| ratmat::sub(&pts[i], base)).collect();
                    let w = ratmat::rat_to_f64(&ratmat::gram_det(&dirs)).max(0.0).sqrt();
                    wsum += w;
                    weights.push(wsum);
                }
                if wsum <= 0.0 {
                    return (0.0, 0.0);
                }
                let est = mc::parallel_mc(samples, seed, |rng| {
                    let t = rng.gen::<f64>() * wsum;
                    let si = weights.partition_point(|w| *w < t).min(tri.len() - 1);
                    let simplex = &tri[si];
                    // uniform barycentric coordinates
                    let mut e: Vec<f64> =
                        (0..simplex.len()).map(|_| -rng.gen::<f64>().ln()).collect();
                    let s: f64 = e.iter().sum();
                    for x in &mut e {
                        *x /= s;
                    }
                    let mut p = vec![0.0; self.n];
                    for (&vi, &bi) in simplex.iter().zip(&e) {
                        for (pj, vj) in p.iter_mut().zip(&ptsf[vi]) {
                            *pj += bi * vj;
                        }
                    }
                    if window.contains(&p) {
                        1.0
                    } else {
                        0.0
                    }
                });
                let frac = est.mean();
                let sigma = total * est.sigma_mean().max(1.0 / samples as f64);
                (total * frac, sigma)
            }
        }
    }

    /// Exact length of an edge clipped to an axis box.
    fn clip_segment(&self, face: &Face, lo: &[f64], hi: &[f64]) -> f64 {
        let a = &self.vertices_f64[face.vertex_indices[0]];
        let b = &self.vertices_f64[face.vertex_indices[1]];
        let mut t0 = 0.0f64;
        let mut t1 = 1.0f64;
        for j in 0..self.n {
            let d = b[j] - a[j];
            if d.abs() < 1e-15 {
                if a[j] < lo[j] || a[j] > hi[j] {
                    return 0.0;
                }
            } else {
                let u = (lo[j] - a[j]) / d;
                let v = (hi[j] - a[j]) / d;
                t0 = t0.max(u.min(v));
                t1 = t1.min(u.max(v));
            }
        }
        if t1 <= t0 {
            return 0.0;
        }
        let len: f64 = a
            .iter()
            .zip(b)
            .map(|(x, y)| (y - x) * (y - x))
            .sum::<f64>()
            .sqrt();
        len * (t1 - t0)
    }

    /// Clip the line {q + t u} against the H-representation; the parameter
    /// interval of the intersection, or None when it misses or the polytope
    /// is lower-dimensional.
    pub fn clip_line(&self, q: &[f64], u: &[f64]) -> Option<(f64, f64)> {
        if !self.hull_equalities_f64.is_empty() {
            return None;
        }
        let mut t0 = f64::NEG_INFINITY;
        let mut t1 = f64::INFINITY;
        for (m, b) in self.facet_normals_f64.iter().zip(&self.facet_offsets_f64) {
            let mu: f64 = m.iter().zip(u).map(|(a, x)| a * x).sum();
            let mq: f64 = m.iter().zip(q).map(|(a, x)| a * x).sum();
            if mu.abs() < 1e-14 {
                if mq > *b {
                    return None;
                }
            } else {
                let t = (b - mq) / mu;
                if mu > 0.0 {
                    t1 = t1.min(t);
                } else {
                    t0 = t0.max(t);
                }
            }
        }
        if t1 > t0 && t0.is_finite() && t1.is_finite() {
            Some((t0, t1))
        } else {
            None
        }
    }

    /// Bounding box of the vertex set.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.n];
        let mut hi = vec![f64::NEG_INFINITY; self.n];
        for v in &self.vertices_f64 {
            for j in 0..self.n {
                lo[j] = lo[j].min(v[j]);
                hi[j] = hi[j].max(v[j]);
            }
        }
        (lo, hi)
    }

    /// Circumradius about the bounding-box center.
    pub fn circumradius(&self) -> (Vec<f64>, f64) {
        let (lo, hi) = self.bounding_box();
        let center: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| (a + b) / 2.0).collect();
        let r = self
            .vertices_f64
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        (center, r)
    }

    /// Intersect with an affine flat {q + span(frame)} and return the
    /// intersection in the flat's own coordinates (exact vertex enumeration
    /// over the rationalized data). None when empty.
    pub fn slice(&self, point: &[f64], frame: &[Vec<f64>]) -> Result<Option<Polytope>> {
        let d = frame.len();
        let (rows, rhs) = self.slice_inequalities(point, frame)?;
        let verts = enumerate_h_vertices(&rows, &rhs, d);
        if verts.is_empty() {
            return Ok(None);
        }
        Ok(Some(Polytope::from_rational_vertices(d, verts)?))
    }

    /// Intersect with an affine flat and return the result embedded in the
    /// ambient space (vertices q + frame^T s).
    pub fn slice_embedded(&self, point: &[f64], frame: &[Vec<f64>]) -> Result<Option<Polytope>> {
        let d = frame.len();
        let (rows, rhs) = self.slice_inequalities(point, frame)?;
        let verts = enumerate_h_vertices(&rows, &rhs, d);
        if verts.is_empty() {
            return Ok(None);
        }
        let q = ratmat::vec_from_f64(point);
        let fr: Vec<Vec<Rat>> = frame.iter().map(|v| ratmat::vec_from_f64(v)).collect();
        let ambient: Vec<Vec<Rat>> = verts
            .iter()
            .map(|s| {
                let mut x = q.clone();
                for (si, f) in s.iter().zip(&fr) {
                    for (xj, fj) in x.iter_mut().zip(f) {
                        *xj += si * fj;
                    }
                }
                x
            })
            .collect();
        Ok(Some(Polytope::from_rational_vertices(self.n, ambient)?))
    }

    /// H-representation of the slice in flat coordinates: rows * s <= rhs,
    /// including the affine-hull equalities as inequality pairs.
    fn slice_inequalities(
        &self,
        point: &[f64],
        frame: &[Vec<f64>],
    ) -> Result<(Vec<Vec<Rat>>, Vec<Rat>)> {
        if point.len() != self.n || frame.iter().any(|v| v.len() != self.n) {
            return Err(Error::dim("flat dimensions must match the polytope"));
        }
        let q = ratmat::vec_from_f64(point);
        let fr: Vec<Vec<Rat>> = frame.iter().map(|v| ratmat::vec_from_f64(v)).collect();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (m, b) in self.facet_normals.iter().zip(&self.facet_offsets) {
            let row: Vec<Rat> = fr.iter().map(|f| ratmat::dot(m, f)).collect();
            let r = b - ratmat::dot(m, &q);
            rows.push(row);
            rhs.push(r);
        }
        for c in &self.chart.annihilator {
            let row: Vec<Rat> = fr.iter().map(|f| ratmat::dot(c, f)).collect();
            let r = ratmat::dot(c, &self.chart.base) - ratmat::dot(c, &q);
            rows.push(row.clone());
            rhs.push(r.clone());
            rows.push(row.iter().map(|x| -x.clone()).collect());
            rhs.push(-r);
        }
        Ok((rows, rhs))
    }
}

/// Enumerate the vertices of {s in R^d : rows s <= rhs} by exact solution of
/// all d-subsets of tight constraints. The system must be bounded.
fn enumerate_h_vertices(rows: &[Vec<Rat>], rhs: &[Rat], d: usize) -> Vec<Vec<Rat>> {
    let m = rows.len();
    let mut verts: Vec<Vec<Rat>> = Vec::new();
    if d == 0 {
        // a single point: the origin of the 0-dim flat, feasible iff rhs >= 0
        if rhs.iter().all(|r| !r.is_negative()) {
            verts.push(Vec::new());
        }
        return verts;
    }
    let mut choice = vec![0usize; d];
    fn rec(
        m: usize,
        d: usize,
        pos: usize,
        start: usize,
        choice: &mut Vec<usize>,
        rows: &[Vec<Rat>],
        rhs: &[Rat],
        verts: &mut Vec<Vec<Rat>>,
    ) {
        if pos == d {
            let a: Vec<Vec<Rat>> = choice.iter().map(|&i| rows[i].clone()).collect();
            let b: Vec<Rat> = choice.iter().map(|&i| rhs[i].clone()).collect();
            if let Some(x) = ratmat::solve(&a, &b) {
                let feasible = rows
                    .iter()
                    .zip(rhs)
                    .all(|(row, r)| ratmat::dot(row, &x) <= *r);
                if feasible && !verts.contains(&x) {
                    verts.push(x);
                }
            }
            return;
        }
        for v in start..m {
            choice[pos] = v;
            rec(m, d, pos + 1, v + 1, choice, rows, rhs, verts);
        }
    }
    rec(m, d, 0, 0, &mut choice, rows, rhs, &mut verts);
    verts
}

// ---------------------------------------------------------------------------
// Construction helpers and JSON
// ---------------------------------------------------------------------------

impl Polytope {
    /// Unit cube [0,1]^n.
    pub fn unit_cube(n: usize) -> Result<Self> {
        let mut pts = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            pts.push(
                (0..n)
                    .map(|j| ratmat::rat(((mask >> j) & 1) as i64))
                    .collect(),
            );
        }
        Polytope::from_rational_vertices(n, pts)
    }

    /// Standard simplex conv(0, e_1, ..., e_n).
    pub fn standard_simplex(n: usize) -> Result<Self> {
        let mut pts = vec![vec![ratmat::rat(0); n]];
        for i in 0..n {
            let mut v = vec![ratmat::rat(0); n];
            v[i] = ratmat::rat(1);
            pts.push(v);
        }
        Polytope::from_rational_vertices(n, pts)
    }

    /// Parse {"n", "vertices"} JSON; coordinates are numbers or "p/q" strings.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: "$".into(),
            message: e.to_string(),
        })?;
        let n = value
            .get("n")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Parse { path: "$.n".into(), message: "missing integer".into() })?
            as usize;
        let verts = value
            .get("vertices")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Parse {
                path: "$.vertices".into(),
                message: "missing array".into(),
            })?;
        let mut points = Vec::with_capacity(verts.len());
        for (i, row) in verts.iter().enumerate() {
            let coords = row.as_array().ok_or_else(|| Error::Parse {
                path: format!("$.vertices[{i}]"),
                message: "expected an array of coordinates".into(),
            })?;
            let mut p = Vec::with_capacity(coords.len());
            for (j, c) in coords.iter().enumerate() {
                let path = format!("$.vertices[{i}][{j}]");
                let r = match c {
                    serde_json::Value::Number(x) => {
                        let f = x.as_f64().ok_or_else(|| Error::Parse {
                            path: path.clone(),
                            message: "bad number".into(),
                        })?;
                        ratmat::rat_from_f64(f)
                    }
                    serde_json::Value::String(s) => parse_rational(s).map_err(|m| {
                        Error::Parse { path: path.clone(), message: m }
                    })?,
                    _ => {
                        return Err(Error::Parse {
                            path,
                            message: "expected number or \"p/q\" string".into(),
                        })
                    }
                };
                p.push(r);
            }
            points.push(p);
        }
        Polytope::from_rational_vertices(n, points)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct P<'a> {
            n: usize,
            vertices: Vec<Vec<&'a str>>,
        }
        let strings: Vec<Vec<String>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect();
        let borrowed: Vec<Vec<&str>> =
            strings.iter().map(|v| v.iter().map(|s| s.as_str()).collect()).collect();
        serde_json::to_string(&P { n: self.n, vertices: borrowed })
            .expect("serialization cannot fail")
    }
}

fn parse_rational(s: &str) -> std::result::Result<Rat, String> {
    use num::bigint::BigInt;
    use std::str::FromStr;
    if let Some((p, q)) = s.split_once('/') {
        let num = BigInt::from_str(p.trim()).map_err(|e| e.to_string())?;
        let den = BigInt::from_str(q.trim()).map_err(|e| e.to_string())?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rat::new(num, den))
    } else if let Ok(i) = BigInt::from_str(s.trim()) {
        Ok(Rat::from_integer(i))
    } else {
        let f: f64 = s.trim().parse().map_err(|e: std::num::ParseFloatError| e.to_string())?;
        Ok(ratmat::rat_from_f64(f))
    }
}

pub use crate::ratmat::rat_to_f64 as rational_to_f64;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::rat;
    use rand::SeedableRng;

    fn counts(p: &Polytope) -> Vec<usize> {
        let maxd = p.dim();
        (0..=maxd).map(|k| p.faces_of_dim(k).count()).collect()
    }

    #[test]
    fn square_lattice() {
        let p = Polytope::unit_cube(2).unwrap();
        assert_eq!(counts(&p), vec![4, 4, 1]);
        assert_eq!(p.euler_characteristic(), 1);
    }

    #[test]
    fn simplex_lattice() {
        let p = Polytope::standard_simplex(3).unwrap();
        assert_eq!(counts(&p), vec![4, 6, 4, 1]);
        assert_eq!(p.euler_characteristic(), 1);
    }

    #[test]
    fn cube_lattice() {
        let p = Polytope::unit_cube(3).unwrap();
        assert_eq!(counts(&p), vec![8, 12, 6, 1]);
        assert_eq!(p.euler_characteristic(), 1);
    }

    #[test]
    fn vertex_facet_incidences() {
        // each cube vertex lies on exactly n facets; each facet of the cube
        // carries 2^{n-1} vertices
        for n in [2usize, 3] {
            let p = Polytope::unit_cube(n).unwrap();
            assert_eq!(p.facet_count(), 2 * n);
            for (vi, _) in p.vertices().iter().enumerate() {
                let incident = p
                    .facet_vertex_sets
                    .iter()
                    .filter(|s| s.contains(&vi))
                    .count();
                assert_eq!(incident, n, "vertex {vi} of the {n}-cube");
            }
            for s in &p.facet_vertex_sets {
                assert_eq!(s.len(), 1 << (n - 1));
            }
        }
    }

    #[test]
    fn non_extreme_points_dropped() {
        let mut pts = vec![
            vec![rat(0), rat(0)],
            vec![rat(2), rat(0)],
            vec![rat(0), rat(2)],
            vec![rat(2), rat(2)],
        ];
        pts.push(vec![rat(1), rat(1)]);
        let p = Polytope::from_rational_vertices(2, pts).unwrap();
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn degenerate_input_lives_in_lower_dim() {
        // a triangle embedded in the plane z = 1 inside R^3
        let pts = vec![
            vec![rat(0), rat(0), rat(1)],
            vec![rat(1), rat(0), rat(1)],
            vec![rat(0), rat(1), rat(1)],
        ];
        let p = Polytope::from_rational_vertices(3, pts).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(counts(&p), vec![3, 3, 1]);
        assert_eq!(p.euler_characteristic(), 1);
    }

    #[test]
    fn point_polytope() {
        let p = Polytope::from_rational_vertices(2, vec![vec![rat(0), rat(0)]]).unwrap();
        assert_eq!(p.dim(), 0);
        assert_eq!(p.face_lattice().len(), 1);
        assert_eq!(p.euler_characteristic(), 1);
    }

    #[test]
    fn tangent_cone_dims() {
        let p = Polytope::unit_cube(2).unwrap();
        for f in p.face_lattice() {
            let c = p.tangent_cone(f);
            assert_eq!(c.lineality_basis().len(), f.dim, "face dim {}", f.dim);
        }
        // vertex cone of the square is a quadrant (the diagonal generator is
        // redundant but harmless)
        let v0 = p.faces_of_dim(0).next().unwrap();
        let c = p.tangent_cone(v0);
        let a = c.external_angle(crate::cones::AngleOpts::default());
        assert!(a.exact);
        assert!((a.value - 0.25).abs() < 1e-12);
        // edge cone is a half-plane: one generator orthogonal to lineality
        let e0 = p.faces_of_dim(1).next().unwrap();
        let c = p.tangent_cone(e0);
        assert_eq!(c.lineality_basis().len(), 1);
        assert_eq!(c.generators().len(), 1);
        // the polytope itself: everything is lineality
        let top = p.faces_of_dim(2).next().unwrap();
        let c = p.tangent_cone(top);
        assert_eq!(c.lineality_basis().len(), 2);
        assert!(c.generators().is_empty());
    }

    #[test]
    fn face_volumes() {
        let p = Polytope::unit_cube(3).unwrap();
        let top = p.faces_of_dim(3).next().unwrap();
        assert!((p.face_volume_total(top) - 1.0).abs() < 1e-12);
        for e in p.faces_of_dim(1) {
            assert!((p.face_volume_total(e) - 1.0).abs() < 1e-12);
        }
        for f in p.faces_of_dim(2) {
            assert!((p.face_volume_total(f) - 1.0).abs() < 1e-12);
        }

        // equilateral triangle of side 1: area sqrt(3)/4, via rational gram
        let h = 3.0f64.sqrt() / 2.0;
        let tri =
            Polytope::from_f64_vertices(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]])
                .unwrap();
        let top = tri.faces_of_dim(2).next().unwrap();
        assert!((tri.face_volume_total(top) - 3.0f64.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn face_volume_in_box() {
        let p = Polytope::unit_cube(2).unwrap();
        let top = p.faces_of_dim(2).next().unwrap();
        let window = BorelBox::aligned(vec![0.0, 0.0], vec![0.5, 0.5]).unwrap();
        let (v, sigma) = p.face_volume(top, &window, 200_000, 3);
        assert!((v - 0.25).abs() < 3.0 * sigma + 1e-3, "{v} +- {sigma}");
        // segment clip is exact
        let seg = Polytope::from_f64_vertices(2, &[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let sface = seg.faces_of_dim(1).next().unwrap();
        let window = BorelBox::aligned(vec![0.25, -1.0], vec![0.75, 1.0]).unwrap();
        let (v, sigma) = seg.face_volume(sface, &window, 10, 0);
        assert_eq!(sigma, 0.0);
        assert!((v - 0.5).abs() < 1e-12);
        // vertex counting measure
        let v0 = p.faces_of_dim(0).next().unwrap();
        let window = BorelBox::aligned(vec![-0.1, -0.1], vec![0.1, 0.1]).unwrap();
        assert_eq!(p.face_volume(v0, &window, 10, 0).0, 1.0);
    }

    #[test]
    fn monotone_in_window() {
        let p = Polytope::unit_cube(2).unwrap();
        let top = p.faces_of_dim(2).next().unwrap();
        let small = BorelBox::aligned(vec![0.0, 0.0], vec![0.4, 0.4]).unwrap();
        let big = BorelBox::aligned(vec![0.0, 0.0], vec![0.8, 0.8]).unwrap();
        let (vs, _) = p.face_volume(top, &small, 100_000, 1);
        let (vb, _) = p.face_volume(top, &big, 100_000, 1);
        let (va, _) = p.face_volume(top, &BorelBox::All, 0, 0);
        assert!(vs <= vb + 1e-2);
        assert!(vb <= va + 1e-2);
    }

    #[test]
    fn distances() {
        let cube = Polytope::unit_cube(3).unwrap();
        assert_eq!(cube.distance(&[0.5, 0.5, 0.5]), 0.0);
        let sq = Polytope::unit_cube(2).unwrap();
        assert!((sq.distance(&[2.0, 0.5]) - 1.0).abs() < 1e-12);
        assert!((sq.distance(&[2.0, 2.0]) - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn distance_is_lipschitz() {
        let p = Polytope::standard_simplex(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..1000 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let y: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let dxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            let dd = (p.distance(&x) - p.distance(&y)).abs();
            assert!(dd <= dxy + 1e-9, "{dd} > {dxy}");
        }
    }

    #[test]
    fn slices_of_square() {
        let p = Polytope::unit_cube(2).unwrap();
        // line x = 1/2 -> segment of length 1
        let s = p.slice(&[0.5, 0.0], &[vec![0.0, 1.0]]).unwrap().unwrap();
        assert_eq!(s.dim(), 1);
        let f = s.faces_of_dim(1).next().unwrap();
        assert!((s.face_volume_total(f) - 1.0).abs() < 1e-12);
        // line x = 2 -> empty
        assert!(p.slice(&[2.0, 0.0], &[vec![0.0, 1.0]]).unwrap().is_none());
    }

    #[test]
    fn slices_of_cube_by_random_planes() {
        let p = Polytope::unit_cube(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let q = mc::random_rotation(3, &mut rng);
            let frame = vec![
                (0..3).map(|i| q[(i, 0)]).collect::<Vec<f64>>(),
                (0..3).map(|i| q[(i, 1)]).collect::<Vec<f64>>(),
            ];
            let s = p.slice(&[0.5, 0.5, 0.5], &frame).unwrap().unwrap();
            let nv = s.vertices().len();
            assert!((3..=6).contains(&nv), "vertex count {nv}");
        }
    }

    #[test]
    fn json_parsing() {
        let text = r#"{"n":2,"vertices":[["0","0"],["1","0"],["1/2","3/2"]]}"#;
        let p = Polytope::from_json(text).unwrap();
        assert_eq!(p.vertices().len(), 3);
        let back = Polytope::from_json(&p.to_json()).unwrap();
        assert_eq!(back.vertices().len(), 3);
        // floats allowed
        let text = r#"{"n":2,"vertices":[[0,0],[1,0],[0.5,1.5]]}"#;
        assert_eq!(Polytope::from_json(text).unwrap().vertices().len(), 3);
        // malformed
        assert!(Polytope::from_json(r#"{"n":2}"#).is_err());
        assert!(Polytope::from_json(r#"{"n":2,"vertices":[["1/0","0"]]}"#).is_err());
    }
}
