//! Monte Carlo integral geometry over affine Grassmannians.
//!
//! Flats are sampled as a Haar-uniform direction plane plus an offset drawn
//! uniformly from a ball in the orthogonal complement. The Haar measure
//! normalization is not hardcoded: a calibration constant is fitted so that
//! the flat integral of the Euler characteristic over the unit cube
//! reproduces the face-sum intrinsic volume C(n,k). Flats missing the
//! offset window never meet bodies contained in it, so the window mass is
//! absorbed into the same constant.

use rand::Rng;
use serde::Serialize;

use crate::curvmeas::{evaluate, EvalOpts, WeightSpec};
use crate::error::{Error, Result};
use crate::exterior::{oriented_complement, Frame};
use crate::grassrank::haar_frame;
use crate::mc;
use crate::polytope::{BorelBox, Polytope};

/// Affine flat {point + span(frame)} of dimension d in R^n.
#[derive(Debug, Clone)]
pub struct AffineFlat {
    pub n: usize,
    pub d: usize,
    pub point: Vec<f64>,
    pub frame: Frame,
}

/// Sampling window and calibration constant for a flat measure.
#[derive(Debug, Clone, Serialize)]
pub struct FlatMeasure {
    pub n: usize,
    /// Flat dimension d = n - k.
    pub d: usize,
    pub radius: f64,
    pub center: Vec<f64>,
    /// Calibration constant; NaN until `calibrate` runs.
    pub c: f64,
    pub calibration_rel_sigma: f64,
}

impl FlatMeasure {
    pub fn new(n: usize, d: usize, radius: f64, center: Vec<f64>) -> Result<Self> {
        if d > n || center.len() != n || radius <= 0.0 {
            return Err(Error::invalid("flat measure needs d <= n, radius > 0"));
        }
        Ok(FlatMeasure { n, d, radius, center, c: f64::NAN, calibration_rel_sigma: 0.0 })
    }

    /// Window for estimating V_k of a body: centered on its bounding box,
    /// radius 1.5 x the larger of the body circumradius and the centered
    /// reference cube's circumradius.
    pub fn for_body(p: &Polytope, k: usize) -> Result<Self> {
        if k > p.n() {
            return Err(Error::invalid("degree exceeds ambient dimension"));
        }
        let n = p.n();
        let (center, r) = p.circumradius();
        let cube_r = (n as f64).sqrt() / 2.0;
        FlatMeasure::new(n, n - k, 1.5 * r.max(cube_r), center)
    }

    /// Draw the flat with the given substream index.
    pub fn sample_flat(&self, seed: u64, index: u64) -> AffineFlat {
        let mut rng = mc::substream(seed, index);
        self.draw(&mut rng)
    }

    fn draw(&self, rng: &mut impl Rng) -> AffineFlat {
        let (frame, comp) = self.draw_direction(rng);
        let point = self.draw_point(rng, &comp);
        AffineFlat { n: self.n, d: self.d, point, frame }
    }

    fn draw_direction(&self, rng: &mut impl Rng) -> (Frame, Frame) {
        let frame = if self.d == 0 {
            Frame::new(self.n, Vec::new()).expect("empty frame")
        } else {
            haar_frame(self.n, self.d, rng)
        };
        let comp = oriented_complement(&frame).expect("orthonormal by construction");
        (frame, comp)
    }

    fn draw_point(&self, rng: &mut impl Rng, comp: &Frame) -> Vec<f64> {
        let kdim = self.n - self.d;
        let u = mc::uniform_ball(kdim, rng);
        let mut point = self.center.clone();
        for (ui, w) in u.iter().zip(comp.vectors()) {
            for (p, wi) in point.iter_mut().zip(w) {
                *p += self.radius * ui * wi;
            }
        }
        point
    }

    /// Fit the calibration constant on the unit cube translated to the
    /// window center: c is chosen so the estimated flat integral of the
    /// Euler characteristic equals V_k(cube) = C(n,k).
    pub fn calibrate(&self, samples: u64, seed: u64) -> Result<FlatMeasure> {
        let n = self.n;
        let k = n - self.d;
        let cube_r = (n as f64).sqrt() / 2.0;
        if cube_r > self.radius {
            return Err(Error::invalid("reference cube does not fit in the window"));
        }
        let shift: Vec<f64> = self.center.iter().map(|c| c - 0.5).collect();
        let cube = {
            let mut pts = Vec::with_capacity(1 << n);
            for mask in 0u32..(1 << n) {
                pts.push(
                    (0..n)
                        .map(|j| (((mask >> j) & 1) as f64) + shift[j])
                        .collect::<Vec<f64>>(),
                );
            }
            Polytope::from_f64_vertices(n, &pts)?
        };
        let target = crate::comb::binomial(n, k) as f64;
        let est = mc::parallel_mc(samples, seed, |rng| {
            let flat = self.draw(rng);
            if hits(&cube, &flat) {
                1.0
            } else {
                0.0
            }
        });
        let p = est.mean();
        if p == 0.0 {
            return Err(Error::invalid("calibration saw zero hits; window too large"));
        }
        let rel = est.sigma_mean() / p;
        Ok(FlatMeasure {
            n,
            d: self.d,
            radius: self.radius,
            center: self.center.clone(),
            c: target / p,
            calibration_rel_sigma: rel,
        })
    }

    fn require_calibrated(&self) -> Result<()> {
        if !self.c.is_finite() {
            return Err(Error::invalid("flat measure is not calibrated"));
        }
        Ok(())
    }

    fn require_fits(&self, p: &Polytope) -> Result<()> {
        let r = p
            .vertices_f64()
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&self.center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0f64, f64::max);
        if r > self.radius + 1e-9 {
            return Err(Error::invalid("body does not fit inside the sampling window"));
        }
        Ok(())
    }
}

/// Does the flat meet the polytope? Convexity reduces the test to the
/// offset's membership in the projection of the body onto the flat's
/// orthogonal complement.
pub fn hits(p: &Polytope, flat: &AffineFlat) -> bool {
    let k = flat.n - flat.d;
    if k == 0 {
        return true;
    }
    if flat.d == 0 {
        return p.contains_f64(&flat.point, 1e-9);
    }
    let comp = oriented_complement(&flat.frame).expect("flat frames are orthonormal");
    match k {
        1 => {
            let w = &comp.vectors()[0];
            let t: f64 = w.iter().zip(&flat.point).map(|(a, b)| a * b).sum();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in p.vertices_f64() {
                let s: f64 = w.iter().zip(v).map(|(a, b)| a * b).sum();
                lo = lo.min(s);
                hi = hi.max(s);
            }
            t >= lo - 1e-12 && t <= hi + 1e-12
        }
        2 => {
            let w1 = &comp.vectors()[0];
            let w2 = &comp.vectors()[1];
            let proj = |x: &[f64]| -> (f64, f64) {
                (
                    w1.iter().zip(x).map(|(a, b)| a * b).sum(),
                    w2.iter().zip(x).map(|(a, b)| a * b).sum(),
                )
            };
            let q = proj(&flat.point);
            let pts: Vec<(f64, f64)> = p.vertices_f64().iter().map(|v| proj(v)).collect();
            point_in_hull_2d(q, &pts)
        }
        _ => {
            // exact fallback through the rational slice machinery
            p.slice(&flat.point, flat.frame.vectors())
                .map(|s| s.is_some())
                .unwrap_or(false)
        }
    }
}

/// Point-in-convex-hull test in the plane (O(m log m) monotone chain).
fn point_in_hull_2d(q: (f64, f64), pts: &[(f64, f64)]) -> bool {
    let mut s: Vec<(f64, f64)> = pts.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s.dedup();
    if s.len() == 1 {
        let d = (q.0 - s[0].0).hypot(q.1 - s[0].1);
        return d < 1e-9;
    }
    let cross =
        |o: (f64, f64), a: (f64, f64), b: (f64, f64)| -> f64 {
            (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
        };
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * s.len());
    for &p in &s {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in s.iter().rev() {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() < 3 {
        // collinear set: check the segment
        let (a, b) = (s[0], *s.last().unwrap());
        let cr = cross(a, b, q).abs();
        let len = (b.0 - a.0).hypot(b.1 - a.1);
        if cr > 1e-9 * (1.0 + len) {
            return false;
        }
        let t = ((q.0 - a.0) * (b.0 - a.0) + (q.1 - a.1) * (b.1 - a.1)) / (len * len);
        return (-1e-9..=1.0 + 1e-9).contains(&t);
    }
    for i in 0..hull.len() {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        if cross(a, b, q) < -1e-12 {
            return false;
        }
    }
    true
}

/// Crofton estimate of V_k(P) with its Monte Carlo standard error.
#[derive(Debug, Clone, Serialize)]
pub struct CroftonEstimate {
    pub value: f64,
    pub sigma: f64,
    pub calibration: f64,
    pub samples: u64,
}

/// V_k(P) as the calibrated flat integral of the Euler characteristic of
/// P n E over (n-k)-flats.
pub fn crofton_estimate(
    p: &Polytope,
    k: usize,
    meas: &FlatMeasure,
    samples: u64,
    seed: u64,
) -> Result<CroftonEstimate> {
    if meas.d != p.n() - k {
        return Err(Error::invalid("measure dimension does not match the degree"));
    }
    meas.require_calibrated()?;
    meas.require_fits(p)?;
    let est = mc::parallel_mc(samples, seed, |rng| {
        let flat = meas.draw(rng);
        if hits(p, &flat) {
            1.0
        } else {
            0.0
        }
    });
    let value = meas.c * est.mean();
    let rel_hit = if est.mean() > 0.0 { est.sigma_mean() / est.mean() } else { 0.0 };
    let rel = (rel_hit.powi(2) + meas.calibration_rel_sigma.powi(2)).sqrt();
    Ok(CroftonEstimate { value, sigma: value.abs() * rel, calibration: meas.c, samples })
}

/// The flat average of a curvature measure of the slice: the calibrated
/// integral of Psi(P n E, U) over (n-k)-flats E.
pub fn vk_action(
    weights: &[WeightSpec],
    p: &Polytope,
    window: &BorelBox,
    k: usize,
    meas: &FlatMeasure,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if meas.d != p.n() - k {
        return Err(Error::invalid("measure dimension does not match the degree"));
    }
    meas.require_calibrated()?;
    meas.require_fits(p)?;
    let d = meas.d;
    // fast paths for the Federer weights that only need slice volumes
    let fast_volume = matches!(window, BorelBox::All)
        && weights.len() == 1
        && matches!(&weights[0], WeightSpec::Federer { k: j } if *j == d)
        && d == 1
        && p.dim() == p.n();
    let fast_euler = matches!(window, BorelBox::All)
        && weights.len() == 1
        && matches!(&weights[0], WeightSpec::Federer { k: 0 });
    let est = mc::parallel_mc(samples, seed, |rng| {
        let flat = meas.draw(rng);
        if fast_euler {
            return if hits(p, &flat) { 1.0 } else { 0.0 };
        }
        if fast_volume {
            return p
                .clip_line(&flat.point, &flat.frame.vectors()[0])
                .map(|(t0, t1)| t1 - t0)
                .unwrap_or(0.0);
        }
        if !hits(p, &flat) {
            return 0.0;
        }
        match p.slice_embedded(&flat.point, flat.frame.vectors()) {
            Ok(Some(slice)) => {
                let opts = EvalOpts { angle_samples: 20_000, volume_samples: 20_000, seed: 1 };
                match evaluate(weights, &slice, window, opts) {
                    Ok(ev) => ev.total,
                    Err(_) => 0.0,
                }
            }
            _ => 0.0,
        }
    });
    let value = meas.c * est.mean();
    let sigma_stat = meas.c * est.sigma_mean();
    let sigma = (sigma_stat.powi(2) + (value * meas.calibration_rel_sigma).powi(2)).sqrt();
    Ok((value, sigma))
}
