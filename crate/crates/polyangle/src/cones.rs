//! Polyhedral convex cones: lineality spaces, polar membership, simplicial
//! triangulation, and external angles.
//!
//! The external angle of a cone C with lineality space L is the fraction of
//! the unit sphere of L-perp covered by the polar cone. Spheres of dimension
//! 0, 1 and 2 are handled exactly (point count, arc length, Girard excess);
//! higher dimensions fall back to Monte Carlo. Angles are computed inside
//! span(C), which is legitimate because the external angle does not depend
//! on the ambient space.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::mc;
use crate::ratmat::{self, Rat};
use crate::simplex;

/// Polyhedral cone C = cone(generators) + span(lineality).
#[derive(Debug, Clone)]
pub struct PolyCone {
    n: usize,
    generators: Vec<Vec<f64>>,
    lineality: Vec<Vec<f64>>,
    normalized: bool,
}

/// Options for the Monte Carlo branch of the external angle.
#[derive(Debug, Clone, Copy)]
pub struct AngleOpts {
    pub samples: u64,
    pub seed: u64,
}

impl Default for AngleOpts {
    fn default() -> Self {
        AngleOpts { samples: 200_000, seed: 0 }
    }
}

/// External angle value with its Monte Carlo error (zero in exact branches).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AngleEstimate {
    pub value: f64,
    pub sigma: f64,
    pub exact: bool,
}

impl AngleEstimate {
    fn exact(value: f64) -> Self {
        AngleEstimate { value, sigma: 0.0, exact: true }
    }
}

const LINEALITY_SLACK: f64 = 1e-10;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram-Schmidt; returns an orthonormal basis of the span.
fn orthonormalize(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let d = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= d * bi;
                }
            }
        }
        let nw = norm(&w);
        if nw > 1e-9 {
            for x in &mut w {
                *x /= nw;
            }
            basis.push(w);
        }
    }
    basis
}

impl PolyCone {
    pub fn new(n: usize, generators: Vec<Vec<f64>>, lineality: Vec<Vec<f64>>) -> Result<Self> {
        for v in generators.iter().chain(lineality.iter()) {
            if v.len() != n {
                return Err(Error::dim("cone vectors must have length n"));
            }
        }
        Ok(PolyCone { n, generators, lineality, normalized: false })
    }

    /// Cone spanned by rays only.
    pub fn from_rays(n: usize, rays: Vec<Vec<f64>>) -> Result<Self> {
        PolyCone::new(n, rays, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn lineality_basis(&self) -> &[Vec<f64>] {
        &self.lineality
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Canonical form: lineality_basis is an orthonormal basis of C n (-C),
    /// generators are unit vectors orthogonal to it, duplicates removed.
    /// A generator direction g is absorbed into the lineality space when -g
    /// is a nonnegative combination of the generators (exact rational
    /// feasibility with L1 slack 1e-10).
    pub fn normalize(&self) -> PolyCone {
        if self.normalized {
            return self.clone();
        }
        let n = self.n;
        let mut lin = orthonormalize(&self.lineality);
        let project = |v: &[f64], lin: &[Vec<f64>]| -> Vec<f64> {
            let mut w = v.to_vec();
            for b in lin {
                let d = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= d * bi;
                }
            }
            w
        };
        let clean = |gens: &[Vec<f64>], lin: &[Vec<f64>]| -> Vec<Vec<f64>> {
            let mut out: Vec<Vec<f64>> = Vec::new();
            for g in gens {
                let mut w = project(g, lin);
                let nw = norm(&w);
                if nw < 1e-10 {
                    continue;
                }
                for x in &mut w {
                    *x /= nw;
                }
                if out.iter().any(|h| dot(h, &w) > 1.0 - 1e-12) {
                    continue;
                }
                out.push(w);
            }
            out
        };
        let mut gens = clean(&self.generators, &lin);
        let slack = ratmat::rat_from_f64(LINEALITY_SLACK);
        'outer: loop {
            if gens.is_empty() {
                break;
            }
            let cols: Vec<Vec<Rat>> = gens.iter().map(|g| ratmat::vec_from_f64(g)).collect();
            for i in 0..gens.len() {
                let target: Vec<Rat> = cols[i].iter().map(|x| -x.clone()).collect();
                if simplex::in_cone(&cols, &target, &slack) {
                    lin.push(gens[i].clone());
                    lin = orthonormalize(&lin);
                    gens = clean(&gens, &lin);
                    continue 'outer;
                }
            }
            break;
        }
        PolyCone { n, generators: gens, lineality: lin, normalized: true }
    }

    /// Orthonormal basis of the lineality space L(C) = C n (-C).
    pub fn lineality_space(&self) -> Vec<Vec<f64>> {
        self.normalize().lineality
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality_space().len()
    }

    /// Membership of xi in the polar cone: <xi, g> <= tol for every
    /// generator and |<xi, l>| <= tol for the lineality basis.
    pub fn polar_contains(&self, xi: &[f64]) -> bool {
        let maxg = self
            .generators
            .iter()
            .map(|g| norm(g))
            .fold(1.0f64, f64::max);
        let tol = 1e-12 * norm(xi) * maxg;
        self.generators.iter().all(|g| dot(xi, g) <= tol)
            && self.lineality.iter().all(|l| dot(xi, l).abs() <= tol)
    }

    /// Orthonormal basis of span(C), lineality vectors first.
    fn span_basis(&self) -> Vec<Vec<f64>> {
        let mut vs = self.lineality.clone();
        vs.extend(self.generators.iter().cloned());
        orthonormalize(&vs)
    }

    /// Express the cone in the coordinates of an orthonormal basis.
    fn in_basis(&self, basis: &[Vec<f64>]) -> PolyCone {
        let coords = |v: &[f64]| -> Vec<f64> { basis.iter().map(|b| dot(v, b)).collect() };
        PolyCone {
            n: basis.len(),
            generators: self.generators.iter().map(|g| coords(g)).collect(),
            lineality: self.lineality.iter().map(|l| coords(l)).collect(),
            normalized: self.normalized,
        }
    }

    /// External angle per the case split on the polar sphere dimension.
    pub fn external_angle(&self, opts: AngleOpts) -> AngleEstimate {
        let c = self.normalize();
        // work inside span(C); the angle is ambient-independent
        let basis = c.span_basis();
        let s = basis.len();
        if s == 0 {
            // the zero cone: polar is everything
            return AngleEstimate::exact(1.0);
        }
        let c = if s < c.n { c.in_basis(&basis) } else { c };
        let k = c.lineality.len();
        if c.generators.is_empty() {
            // a linear subspace, including the full space
            return AngleEstimate::exact(1.0);
        }
        let d = s - k - 1;
        match d {
            0 => {
                let w = complement_basis(&c.lineality, s);
                debug_assert_eq!(w.len(), 1);
                let mut count = 0;
                if c.polar_contains(&w[0]) {
                    count += 1;
                }
                let neg: Vec<f64> = w[0].iter().map(|x| -x).collect();
                if c.polar_contains(&neg) {
                    count += 1;
                }
                AngleEstimate::exact(count as f64 / 2.0)
            }
            1 => {
                let w = complement_basis(&c.lineality, s);
                debug_assert_eq!(w.len(), 2);
                let angles: Vec<f64> = c
                    .generators
                    .iter()
                    .map(|g| dot(g, &w[1]).atan2(dot(g, &w[0])))
                    .collect();
                AngleEstimate::exact(arc_fraction(&angles))
            }
            2 => {
                let w = complement_basis(&c.lineality, s);
                debug_assert_eq!(w.len(), 3);
                let rays: Vec<[f64; 3]> = c
                    .generators
                    .iter()
                    .map(|g| [dot(g, &w[0]), dot(g, &w[1]), dot(g, &w[2])])
                    .collect();
                AngleEstimate::exact(girard_polar_fraction(&rays))
            }
            _ => {
                let w = complement_basis(&c.lineality, s);
                let est = mc::parallel_mc(opts.samples, opts.seed, |rng| {
                    let u = mc::uniform_sphere(w.len(), rng);
                    let mut xi = vec![0.0; s];
                    for (ui, wv) in u.iter().zip(&w) {
                        for (x, y) in xi.iter_mut().zip(wv) {
                            *x += ui * y;
                        }
                    }
                    if c.polar_contains(&xi) {
                        1.0
                    } else {
                        0.0
                    }
                });
                let p = est.mean();
                let sigma = est.sigma_mean().max(1.0 / opts.samples as f64);
                AngleEstimate { value: p, sigma, exact: false }
            }
        }
    }

    /// Monte Carlo estimate straight from the definition: uniform directions
    /// on the unit sphere of the ambient orthogonal complement of L(C).
    pub fn external_angle_mc(&self, samples: u64, seed: u64) -> AngleEstimate {
        let c = self.normalize();
        let k = c.lineality.len();
        if k == c.n {
            return AngleEstimate::exact(1.0);
        }
        let est = mc::parallel_mc(samples, seed, |rng| {
            loop {
                let g = mc::gaussian_vector(c.n, rng);
                let mut w = g;
                for l in &c.lineality {
                    let d = dot(&w, l);
                    for (wi, li) in w.iter_mut().zip(l) {
                        *wi -= d * li;
                    }
                }
                let nw = norm(&w);
                if nw > 1e-9 {
                    for x in &mut w {
                        *x /= nw;
                    }
                    return if c.polar_contains(&w) { 1.0 } else { 0.0 };
                }
            }
        });
        AngleEstimate {
            value: est.mean(),
            sigma: est.sigma_mean().max(1.0 / samples as f64),
            exact: false,
        }
    }

    /// Split into cones sharing L(C) whose projections mod L are simplicial,
    /// pairwise intersecting in common faces: cut by a hyperplane meeting all
    /// rays, triangulate the section, lift each simplex.
    pub fn triangulate(&self) -> Result<Vec<PolyCone>> {
        let (c, parts) = self.triangulate_indices()?;
        Ok(parts
            .into_iter()
            .map(|idx| PolyCone {
                n: c.n,
                generators: idx.iter().map(|&i| c.generators[i].clone()).collect(),
                lineality: c.lineality.clone(),
                normalized: true,
            })
            .collect())
    }

    /// Triangulation as ray-index sets into the normalized cone's generators.
    pub fn triangulate_indices(&self) -> Result<(PolyCone, Vec<Vec<usize>>)> {
        let c = self.normalize();
        let m = c.generators.len();
        if m == 0 {
            return Ok((c, vec![Vec::new()]));
        }
        let rays: Vec<Vec<Rat>> = c.generators.iter().map(|g| ratmat::vec_from_f64(g)).collect();
        if ratmat::rank(&rays) == m {
            return Ok((c, vec![(0..m).collect()]));
        }
        // section hyperplane <x, h> = 1 meeting every ray
        let mut h: Vec<Rat> = vec![num::traits::Zero::zero(); c.n];
        for r in &rays {
            for (hi, ri) in h.iter_mut().zip(r) {
                *hi += ri;
            }
        }
        let floor = ratmat::rat_from_f64(1e-9);
        let ok = rays.iter().all(|r| ratmat::dot(r, &h) > floor);
        if !ok {
            h = simplex::strictly_positive_functional(&rays).ok_or_else(|| {
                Error::invalid("projected cone is not pointed: no positive functional")
            })?;
        }
        let section: Vec<Vec<Rat>> = rays
            .iter()
            .map(|r| {
                let d = ratmat::dot(r, &h);
                r.iter().map(|x| x / &d).collect()
            })
            .collect();
        let simplices = crate::hull::pulling_triangulation(&section)?;
        Ok((c, simplices))
    }

    /// Residual of the inclusion-exclusion identity for the external angle
    /// over the triangulation of the cone, with the pooled Monte Carlo sigma.
    pub fn angle_additivity_check(&self, opts: AngleOpts) -> Result<(f64, f64)> {
        let (c, parts) = self.triangulate_indices()?;
        if parts.len() > 16 {
            return Err(Error::invalid("triangulation too large for inclusion-exclusion"));
        }
        let whole = c.external_angle(opts);
        let mut cache: BTreeMap<Vec<usize>, AngleEstimate> = BTreeMap::new();
        let mut sum = 0.0;
        let mut var = whole.sigma * whole.sigma;
        for mask in 1u32..(1 << parts.len()) {
            let mut iter = (0..parts.len()).filter(|i| mask & (1 << i) != 0);
            let first = iter.next().unwrap();
            let mut inter: Vec<usize> = parts[first].clone();
            for i in iter {
                inter.retain(|x| parts[i].contains(x));
            }
            inter.sort_unstable();
            let est = cache.entry(inter.clone()).or_insert_with(|| {
                let piece = PolyCone {
                    n: c.n,
                    generators: inter.iter().map(|&i| c.generators[i].clone()).collect(),
                    lineality: c.lineality.clone(),
                    normalized: true,
                };
                let term_opts = AngleOpts {
                    samples: opts.samples,
                    seed: opts.seed.wrapping_add(mask as u64),
                };
                piece.external_angle(term_opts)
            });
            let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
            sum += sign * est.value;
            var += est.sigma * est.sigma;
        }
        Ok(((sum - whole.value).abs(), var.sqrt()))
    }

    /// Parse {"n", "generators", "lineality"} JSON.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ConeJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: "$".into(),
            message: e.to_string(),
        })?;
        PolyCone::new(raw.n, raw.generators, raw.lineality.unwrap_or_default())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ConeJson {
            n: self.n,
            generators: self.generators.clone(),
            lineality: Some(self.lineality.clone()),
        })
        .expect("serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct ConeJson {
    n: usize,
    generators: Vec<Vec<f64>>,
    #[serde(default)]
    lineality: Option<Vec<Vec<f64>>>,
}

/// Orthonormal basis of the orthogonal complement of `lin` inside R^s.
fn complement_basis(lin: &[Vec<f64>], s: usize) -> Vec<Vec<f64>> {
    let frame = crate::exterior::Frame::new(s, lin.to_vec()).expect("lengths checked");
    crate::exterior::oriented_complement(&frame)
        .expect("lineality bases are orthonormal")
        .vectors()
        .to_vec()
}

/// Fraction of the circle covered by the polar of a pointed planar cone
/// given by unit ray angles: the cone opening is 2 pi minus the largest
/// cyclic gap, and the polar arc is pi minus the opening.
fn arc_fraction(angles: &[f64]) -> f64 {
    let mut a: Vec<f64> = angles.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let m = a.len();
    let mut max_gap = 2.0 * std::f64::consts::PI - (a[m - 1] - a[0]);
    for w in a.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    let opening = 2.0 * std::f64::consts::PI - max_gap;
    debug_assert!(opening < std::f64::consts::PI + 1e-9, "projected cone must be pointed");
    (std::f64::consts::PI - opening) / (2.0 * std::f64::consts::PI)
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Spherical area fraction of the polar of a full-dimensional pointed cone
/// in R^3: enumerate the polar's extreme rays from constraint pairs, walk
/// the spherical polygon, and apply the Girard excess over 4 pi.
fn girard_polar_fraction(rays: &[[f64; 3]]) -> f64 {
    let tol = 1e-10;
    let mut ext: Vec<[f64; 3]> = Vec::new();
    for i in 0..rays.len() {
        for j in (i + 1)..rays.len() {
            for sign in [1.0, -1.0] {
                let mut d = cross(&rays[i], &rays[j]);
                for x in &mut d {
                    *x *= sign;
                }
                let nd = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                if nd < 1e-12 {
                    continue;
                }
                for x in &mut d {
                    *x /= nd;
                }
                if rays
                    .iter()
                    .all(|r| d[0] * r[0] + d[1] * r[1] + d[2] * r[2] <= tol)
                    && !ext.iter().any(|e| {
                        (e[0] - d[0]).abs() + (e[1] - d[1]).abs() + (e[2] - d[2]).abs() < 1e-9
                    })
                {
                    ext.push(d);
                }
            }
        }
    }
    if ext.len() < 3 {
        // the polar of a full-dimensional pointed cone is full-dimensional;
        // fewer than three extreme rays only happens for degenerate input
        return 0.0;
    }
    // order around the interior direction
    let mut center = [0.0f64; 3];
    for e in &ext {
        for (c, x) in center.iter_mut().zip(e) {
            *c += x;
        }
    }
    let nc = (center[0] * center[0] + center[1] * center[1] + center[2] * center[2]).sqrt();
    for x in &mut center {
        *x /= nc;
    }
    let pick = if center[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = center[0] * pick[0] + center[1] * pick[1] + center[2] * pick[2];
    let mut b1 = [0.0f64; 3];
    for i in 0..3 {
        b1[i] = pick[i] - d * center[i];
    }
    let nb = (b1[0] * b1[0] + b1[1] * b1[1] + b1[2] * b1[2]).sqrt();
    for x in &mut b1 {
        *x /= nb;
    }
    let b2 = cross(&center, &b1);
    ext.sort_by(|p, q| {
        let ap = (p[0] * b2[0] + p[1] * b2[1] + p[2] * b2[2])
            .atan2(p[0] * b1[0] + p[1] * b1[1] + p[2] * b1[2]);
        let aq = (q[0] * b2[0] + q[1] * b2[1] + q[2] * b2[2])
            .atan2(q[0] * b1[0] + q[1] * b1[1] + q[2] * b1[2]);
        ap.partial_cmp(&aq).unwrap()
    });
    let m = ext.len();
    let mut angle_sum = 0.0;
    for i in 0..m {
        let v = &ext[i];
        let u = &ext[(i + m - 1) % m];
        let w = &ext[(i + 1) % m];
        let tangent = |t: &[f64; 3]| -> [f64; 3] {
            let d = t[0] * v[0] + t[1] * v[1] + t[2] * v[2];
            let mut out = [t[0] - d * v[0], t[1] - d * v[1], t[2] - d * v[2]];
            let n = (out[0] * out[0] + out[1] * out[1] + out[2] * out[2]).sqrt();
            for x in &mut out {
                *x /= n;
            }
            out
        };
        let tu = tangent(u);
        let tw = tangent(w);
        let c = (tu[0] * tw[0] + tu[1] * tw[1] + tu[2] * tw[2]).clamp(-1.0, 1.0);
        angle_sum += c.acos();
    }
    let area = angle_sum - (m as f64 - 2.0) * std::f64::consts::PI;
    (area / (4.0 * std::f64::consts::PI)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn e(n: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    }

    fn neg(v: &[f64]) -> Vec<f64> {
        v.iter().map(|x| -x).collect()
    }

    #[test]
    fn lineality_detection() {
        // upper half-plane: generators e1, -e1, e2
        let c = PolyCone::from_rays(2, vec![e(2, 0), neg(&e(2, 0)), e(2, 1)]).unwrap();
        let l = c.lineality_space();
        assert_eq!(l.len(), 1);
        assert!(l[0][0].abs() > 0.999 && l[0][1].abs() < 1e-9);

        // first quadrant is pointed
        let c = PolyCone::from_rays(2, vec![e(2, 0), e(2, 1)]).unwrap();
        assert!(c.lineality_space().is_empty());

        // all of R^3
        let mut rays = Vec::new();
        for i in 0..3 {
            rays.push(e(3, i));
            rays.push(neg(&e(3, i)));
        }
        let c = PolyCone::from_rays(3, rays).unwrap();
        assert_eq!(c.lineality_space().len(), 3);
    }

    #[test]
    fn polar_membership() {
        let quad = PolyCone::from_rays(2, vec![e(2, 0), e(2, 1)]).unwrap();
        assert!(quad.polar_contains(&[-1.0, -1.0]));
        assert!(!quad.polar_contains(&[1.0, 0.0]));

        let half =
            PolyCone::from_rays(2, vec![e(2, 0), neg(&e(2, 0)), e(2, 1)]).unwrap().normalize();
        assert!(half.polar_contains(&[0.0, -1.0]));
        assert!(!half.polar_contains(&[0.1, -1.0]));
    }

    #[test]
    fn external_angle_exact_cases() {
        // positive orthant: 2^-n
        for n in [2usize, 3] {
            let c = PolyCone::from_rays(n, (0..n).map(|i| e(n, i)).collect()).unwrap();
            let a = c.external_angle(AngleOpts::default());
            assert!(a.exact);
            assert!((a.value - 0.5f64.powi(n as i32)).abs() < 1e-12, "n={n}: {}", a.value);
        }
        // half-space x_n >= 0
        for n in [2usize, 3, 4] {
            let mut rays: Vec<Vec<f64>> = Vec::new();
            for i in 0..n - 1 {
                rays.push(e(n, i));
                rays.push(neg(&e(n, i)));
            }
            rays.push(e(n, n - 1));
            let c = PolyCone::from_rays(n, rays).unwrap();
            let a = c.external_angle(AngleOpts::default());
            assert!(a.exact);
            assert!((a.value - 0.5).abs() < 1e-12);
        }
        // linear subspace of dim k < n
        let c = PolyCone::new(3, vec![], vec![e(3, 0)]).unwrap();
        let a = c.external_angle(AngleOpts::default());
        assert!((a.value - 1.0).abs() < 1e-12);
        // the zero cone
        let c = PolyCone::from_rays(3, vec![]).unwrap();
        assert!((c.external_angle(AngleOpts::default()).value - 1.0).abs() < 1e-12);
        // full space
        let mut rays = Vec::new();
        for i in 0..3 {
            rays.push(e(3, i));
            rays.push(neg(&e(3, i)));
        }
        let c = PolyCone::from_rays(3, rays).unwrap();
        assert!((c.external_angle(AngleOpts::default()).value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_base_cone_girard_matches_mc() {
        let s = 3.0f64.sqrt();
        let rays = vec![
            vec![1.0 / s, 1.0 / s, 1.0 / s],
            vec![1.0 / s, -1.0 / s, 1.0 / s],
            vec![-1.0 / s, 1.0 / s, 1.0 / s],
            vec![-1.0 / s, -1.0 / s, 1.0 / s],
        ];
        let c = PolyCone::from_rays(3, rays).unwrap();
        let exact = c.external_angle(AngleOpts::default());
        assert!(exact.exact);
        // frozen Girard value for the polar 4-gon of this cone
        assert!((exact.value - 0.108173447969).abs() < 1e-9, "{}", exact.value);
        let mc_est = c.external_angle_mc(400_000, 7);
        assert!((mc_est.value - exact.value).abs() < 3.0 * mc_est.sigma);
    }

    #[test]
    fn ray_angle_in_plane() {
        // polar of a single ray in R^2 is a half-plane
        let c = PolyCone::from_rays(2, vec![e(2, 1)]).unwrap();
        let a = c.external_angle(AngleOpts::default());
        assert!((a.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_dim_face_cone_in_three_space() {
        // cone spanned by e1, e2 inside R^3: angle computed in its span
        let c = PolyCone::from_rays(3, vec![e(3, 0), e(3, 1)]).unwrap();
        let a = c.external_angle(AngleOpts::default());
        assert!(a.exact);
        assert!((a.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn ambient_independence() {
        // embed the quadrant of R^2 into R^5 by zero-padding
        let mut g1 = vec![0.0; 5];
        g1[0] = 1.0;
        let mut g2 = vec![0.0; 5];
        g2[1] = 1.0;
        let c = PolyCone::from_rays(5, vec![g1, g2]).unwrap();
        let a = c.external_angle(AngleOpts::default());
        assert!(a.exact);
        assert!((a.value - 0.25).abs() < 1e-12);
        // and the ambient-definition MC agrees
        let mc_est = c.external_angle_mc(400_000, 11);
        assert!((mc_est.value - 0.25).abs() < 3.0 * mc_est.sigma);
    }

    #[test]
    fn rotation_invariance_exact_branch() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let rays: Vec<Vec<f64>> = (0..5)
            .map(|_| {
                let mut v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                v[2] = v[2].abs() + 0.2;
                v
            })
            .collect();
        let c = PolyCone::from_rays(3, rays.clone()).unwrap();
        let base = c.external_angle(AngleOpts::default());
        for trial in 0..5 {
            let q = mc::random_rotation(3, &mut rng);
            let rot: Vec<Vec<f64>> = rays
                .iter()
                .map(|v| (0..3).map(|i| (0..3).map(|j| q[(i, j)] * v[j]).sum()).collect())
                .collect();
            let cr = PolyCone::from_rays(3, rot).unwrap();
            let a = cr.external_angle(AngleOpts::default());
            assert!(a.exact);
            assert!((a.value - base.value).abs() < 1e-9, "trial {trial}");
        }
    }

    #[test]
    fn triangulate_examples() {
        // simplicial cone: itself
        let c = PolyCone::from_rays(3, vec![e(3, 0), e(3, 1), e(3, 2)]).unwrap();
        assert_eq!(c.triangulate().unwrap().len(), 1);

        // cone over a square base: two pieces
        let s = 3.0f64.sqrt();
        let rays = vec![
            vec![1.0 / s, 1.0 / s, 1.0 / s],
            vec![1.0 / s, -1.0 / s, 1.0 / s],
            vec![-1.0 / s, 1.0 / s, 1.0 / s],
            vec![-1.0 / s, -1.0 / s, 1.0 / s],
        ];
        let c = PolyCone::from_rays(3, rays).unwrap();
        let parts = c.triangulate().unwrap();
        assert_eq!(parts.len(), 2);
        for p in &parts {
            assert_eq!(p.generators().len(), 3);
        }

        // full plane: nothing to split
        let c =
            PolyCone::from_rays(2, vec![e(2, 0), neg(&e(2, 0)), e(2, 1), neg(&e(2, 1))]).unwrap();
        let parts = c.triangulate().unwrap();
        assert_eq!(parts.len(), 1);
        assert!(parts[0].generators().is_empty());
    }

    #[test]
    fn additivity_simplicial_is_exact_zero() {
        let c = PolyCone::from_rays(3, vec![e(3, 0), e(3, 1), e(3, 2)]).unwrap();
        let (res, _) = c.angle_additivity_check(AngleOpts::default()).unwrap();
        assert!(res < 1e-15);
    }

    #[test]
    fn additivity_three_dim_cones_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for trial in 0..5 {
            let rays: Vec<Vec<f64>> = (0..5)
                .map(|_| {
                    let mut v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    v[2] = v[2].abs() + 0.3;
                    let n = norm(&v);
                    v.iter().map(|x| x / n).collect()
                })
                .collect();
            let c = PolyCone::from_rays(3, rays).unwrap();
            let (res, sigma) = c.angle_additivity_check(AngleOpts::default()).unwrap();
            assert!(res < 1e-9 + 3.0 * sigma, "trial {trial}: residual {res} sigma {sigma}");
            assert!(res < 1e-9, "3d additivity should be exact, got {res}");
        }
    }

    #[test]
    fn additivity_four_dim_monte_carlo() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let rays: Vec<Vec<f64>> = (0..6)
            .map(|_| {
                let mut v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
                v[3] = v[3].abs() + 0.4;
                let n = norm(&v);
                v.iter().map(|x| x / n).collect()
            })
            .collect();
        let c = PolyCone::from_rays(4, rays).unwrap();
        let (res, sigma) =
            c.angle_additivity_check(AngleOpts { samples: 200_000, seed: 5 }).unwrap();
        assert!(res < 3.0 * sigma, "residual {res}, sigma {sigma}");
    }

    #[test]
    fn rotation_invariance_mc_branch() {
        // 4D pointed cone: the polar sphere has dimension 3, so the angle is
        // Monte Carlo; rotating the cone shifts the estimate by < 3 sigma
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        let rays: Vec<Vec<f64>> = (0..6)
            .map(|_| {
                let mut v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
                v[3] = v[3].abs() + 0.4;
                let n = norm(&v);
                v.iter().map(|x| x / n).collect()
            })
            .collect();
        let c = PolyCone::from_rays(4, rays.clone()).unwrap();
        let base = c.external_angle(AngleOpts { samples: 300_000, seed: 1 });
        assert!(!base.exact);
        for trial in 0..3 {
            let q = mc::random_rotation(4, &mut rng);
            let rot: Vec<Vec<f64>> = rays
                .iter()
                .map(|v| (0..4).map(|i| (0..4).map(|j| q[(i, j)] * v[j]).sum()).collect())
                .collect();
            let cr = PolyCone::from_rays(4, rot).unwrap();
            let a = cr.external_angle(AngleOpts { samples: 300_000, seed: 2 + trial });
            let sigma = (a.sigma.powi(2) + base.sigma.powi(2)).sqrt();
            assert!(
                (a.value - base.value).abs() < 3.0 * sigma,
                "trial {trial}: {} vs {}",
                a.value,
                base.value
            );
        }
    }

    #[test]
    fn pointed_cone_angles_are_interior() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..20 {
            let n = rng.gen_range(2..=3usize);
            let rays: Vec<Vec<f64>> = (0..(n + 2))
                .map(|_| {
                    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    v[n - 1] = v[n - 1].abs() + 0.3;
                    v
                })
                .collect();
            let c = PolyCone::from_rays(n, rays).unwrap();
            let a = c.external_angle(AngleOpts::default());
            assert!(a.value > 0.0 && a.value < 1.0, "gamma = {}", a.value);
        }
    }

    #[test]
    fn cone_json_roundtrip() {
        let text = r#"{"n":2,"generators":[[1.0,0.0],[0.0,1.0]],"lineality":[]}"#;
        let c = PolyCone::from_json(text).unwrap();
        assert_eq!(c.n(), 2);
        let c2 = PolyCone::from_json(&c.to_json()).unwrap();
        assert_eq!(c2.generators().len(), 2);
    }
}
