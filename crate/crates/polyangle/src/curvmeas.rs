//! Translation-invariant curvature measures on polytopes.
//!
//! The face-sum evaluator computes sums of weight(face direction) x external
//! angle x face volume over the k-faces; intrinsic volumes are the constant
//! (Federer) weights. The normal-disc integrator evaluates a constant
//! coefficient form directly over face x (polar cone n unit ball) fibers and
//! serves as the independent cross-check of the face-sum route.
//!
//! Weight normalization for constant-coefficient forms: the weight of the
//! k-plane E is ball_volume(n-k) times the pairing of (vec E contracted into
//! the base slot) with the oriented volume covector of E-perp. With this
//! constant the two evaluation routes agree with no free parameter, and the
//! sign is pinned by the Lebesgue case dx_1^...^dx_n (x) 1.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::cones::AngleOpts;
use crate::error::{Error, Result};
use crate::exterior::{contract, oriented_complement, plucker, BiGradedForm, Frame, MultiVector};
use crate::mc;
use crate::polytope::{BorelBox, Polytope};

/// Volume of the k-dimensional unit ball.
pub fn ball_volume(k: usize) -> f64 {
    // w_0 = 1, w_1 = 2, w_k = 2 pi / k * w_{k-2}
    let mut w = if k % 2 == 0 { 1.0 } else { 2.0 };
    let mut i = if k % 2 == 0 { 2 } else { 3 };
    while i <= k {
        w *= 2.0 * std::f64::consts::PI / i as f64;
        i += 2;
    }
    w
}

/// Weight function on the Grassmannian of k-planes, in one of four forms.
#[derive(Clone)]
pub enum WeightSpec {
    /// Constant weight 1 (Federer's curvature measures).
    Federer { k: usize },
    /// Quadratic form in Plucker coordinates: p^T Q p over sorted k-subset
    /// pairs; Q must be symmetric.
    Quadratic { k: usize, q: Vec<Vec<f64>> },
    /// Weight induced by a constant-coefficient form of bidegree (k, n-k).
    ConstCoeff { omega: BiGradedForm },
    /// Arbitrary even function of an orthonormal k-frame.
    Tabulated {
        k: usize,
        name: String,
        f: Arc<dyn Fn(&Frame) -> f64 + Send + Sync>,
    },
}

impl std::fmt::Debug for WeightSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightSpec::Federer { k } => write!(f, "Federer(k={k})"),
            WeightSpec::Quadratic { k, .. } => write!(f, "Quadratic(k={k})"),
            WeightSpec::ConstCoeff { omega } => write!(
                f,
                "ConstCoeff(bidegree=({},{}))",
                omega.base_grade(),
                omega.fiber_grade()
            ),
            WeightSpec::Tabulated { k, name, .. } => write!(f, "Tabulated(k={k}, {name})"),
        }
    }
}

impl WeightSpec {
    pub fn degree(&self) -> usize {
        match self {
            WeightSpec::Federer { k } => *k,
            WeightSpec::Quadratic { k, .. } => *k,
            WeightSpec::ConstCoeff { omega } => omega.base_grade(),
            WeightSpec::Tabulated { k, .. } => *k,
        }
    }

    /// Structural checks: Q symmetric, bidegrees consistent, tabulated
    /// weights even (spot-checked on 100 seeded random frames).
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            WeightSpec::Federer { .. } => Ok(()),
            WeightSpec::Quadratic { k, q } => {
                let nn = crate::comb::binomial(n, *k);
                if q.len() != nn || q.iter().any(|row| row.len() != nn) {
                    return Err(Error::dim(format!(
                        "quadratic weight needs a {nn} x {nn} matrix for n={n}, k={k}"
                    )));
                }
                for i in 0..nn {
                    for j in 0..nn {
                        if (q[i][j] - q[j][i]).abs() > 1e-12 {
                            return Err(Error::invalid("quadratic weight matrix must be symmetric"));
                        }
                    }
                }
                Ok(())
            }
            WeightSpec::ConstCoeff { omega } => {
                if omega.n() != n {
                    return Err(Error::dim("form dimension differs from the polytope"));
                }
                if omega.base_grade() + omega.fiber_grade() != n {
                    return Err(Error::invalid("constant-coefficient weight needs bidegree (k, n-k)"));
                }
                Ok(())
            }
            WeightSpec::Tabulated { k, f, name } => {
                let mut rng = mc::substream(0x7ab, 0);
                for _ in 0..100 {
                    let frame = crate::grassrank::haar_frame(n, *k, &mut rng);
                    let v = f(&frame);
                    let mut flipped = frame.vectors().to_vec();
                    if let Some(first) = flipped.first_mut() {
                        for x in first.iter_mut() {
                            *x = -*x;
                        }
                    }
                    let other = Frame::new(n, flipped)?;
                    if (v - f(&other)).abs() > 1e-9 * (1.0 + v.abs()) {
                        return Err(Error::invalid(format!(
                            "tabulated weight '{name}' is not even"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Evaluate a weight on an orthonormal k-frame.
pub fn weight_eval(w: &WeightSpec, frame: &Frame) -> Result<f64> {
    if frame.k() != w.degree() {
        return Err(Error::dim(format!(
            "frame grade {} does not match weight degree {}",
            frame.k(),
            w.degree()
        )));
    }
    match w {
        WeightSpec::Federer { .. } => Ok(1.0),
        WeightSpec::Quadratic { q, .. } => {
            let p = plucker(frame)?;
            let c = p.coeffs();
            if q.len() != c.len() {
                return Err(Error::dim("quadratic matrix size does not match C(n,k)"));
            }
            let mut val = 0.0;
            for (i, ci) in c.iter().enumerate() {
                if *ci == 0.0 {
                    continue;
                }
                for (j, cj) in c.iter().enumerate() {
                    val += ci * q[i][j] * cj;
                }
            }
            Ok(val)
        }
        WeightSpec::ConstCoeff { omega } => const_coeff_weight(omega, frame),
        WeightSpec::Tabulated { f, .. } => Ok(f(frame)),
    }
}

/// ball_volume(n-k) times the pairing <vec E -| omega, vol of E-perp>.
pub fn const_coeff_weight(omega: &BiGradedForm, frame: &Frame) -> Result<f64> {
    let n = omega.n();
    let k = omega.base_grade();
    if frame.n() != n || frame.k() != k {
        return Err(Error::dim("frame does not match the form bidegree"));
    }
    let (density, _) = const_coeff_density(omega, frame)?;
    Ok(ball_volume(n - k) * density)
}

/// The constant Lebesgue density <vec E -| omega, vol of E-perp> together
/// with the oriented complement frame used to define it.
fn const_coeff_density(omega: &BiGradedForm, frame: &Frame) -> Result<(f64, Frame)> {
    let vec_e = plucker(frame)?;
    let fiber = contract(&vec_e, omega)?;
    let covector: MultiVector = fiber.fiber_covector()?;
    let comp = oriented_complement(frame)?;
    let vol_perp = plucker(&comp)?;
    let density: f64 = covector
        .coeffs()
        .iter()
        .zip(vol_perp.coeffs())
        .map(|(a, b)| a * b)
        .sum();
    Ok((density, comp))
}

/// Per-degree contribution of a curvature measure evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeValue {
    pub degree: usize,
    pub value: f64,
    pub sigma: f64,
}

/// Result of evaluating a list of weights on (P, U).
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureEvaluation {
    pub per_degree: Vec<DegreeValue>,
    pub total: f64,
    pub sigma: f64,
}

impl CurvatureEvaluation {
    fn from_parts(per_degree: Vec<DegreeValue>) -> Self {
        let total = per_degree.iter().map(|d| d.value).sum();
        let sigma = per_degree.iter().map(|d| d.sigma * d.sigma).sum::<f64>().sqrt();
        CurvatureEvaluation { per_degree, total, sigma }
    }
}

/// Monte Carlo controls for curvature evaluations.
#[derive(Debug, Clone, Copy)]
pub struct EvalOpts {
    pub angle_samples: u64,
    pub volume_samples: u64,
    pub seed: u64,
}

impl Default for EvalOpts {
    fn default() -> Self {
        EvalOpts { angle_samples: 200_000, volume_samples: 100_000, seed: 0 }
    }
}

fn mix_seed(seed: u64, tag: u64, a: usize, b: usize) -> u64 {
    let mut x = seed
        ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (a as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9)
        ^ (b as u64).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x
}

/// Face-sum evaluation: for each weight, sum over the faces of its degree of
/// weight(face direction) x external angle x face volume in the window.
pub fn evaluate(
    weights: &[WeightSpec],
    p: &Polytope,
    window: &BorelBox,
    opts: EvalOpts,
) -> Result<CurvatureEvaluation> {
    let mut per_degree = Vec::with_capacity(weights.len());
    for (wi, w) in weights.iter().enumerate() {
        w.validate(p.n())?;
        let k = w.degree();
        let mut value = 0.0;
        let mut var = 0.0;
        for (fi, face) in p.faces_of_dim(k).enumerate() {
            let frame = Frame::new(p.n(), face.affine_basis.clone())?;
            let f = weight_eval(w, &frame)?;
            if f == 0.0 {
                continue;
            }
            let cone = p.tangent_cone(face);
            let angle = cone.external_angle(AngleOpts {
                samples: opts.angle_samples,
                seed: mix_seed(opts.seed, 0xA1, wi, fi),
            });
            if angle.value == 0.0 && angle.exact {
                continue;
            }
            let (vol, vsig) =
                p.face_volume(face, window, opts.volume_samples, mix_seed(opts.seed, 0xB2, wi, fi));
            value += f * angle.value * vol;
            var += f * f * (angle.sigma * vol).powi(2) + f * f * (angle.value * vsig).powi(2);
        }
        per_degree.push(DegreeValue { degree: k, value, sigma: var.sqrt() });
    }
    Ok(CurvatureEvaluation::from_parts(per_degree))
}

/// Intrinsic volume V_k(P): the Federer weight of degree k over all of R^n.
pub fn intrinsic_volume(p: &Polytope, k: usize, opts: EvalOpts) -> Result<(f64, f64)> {
    let ev = evaluate(&[WeightSpec::Federer { k }], p, &BorelBox::All, opts)?;
    Ok((ev.total, ev.sigma))
}

/// All intrinsic volumes V_0..V_dim.
pub fn intrinsic_volumes(p: &Polytope, opts: EvalOpts) -> Result<Vec<(f64, f64)>> {
    (0..=p.dim()).map(|k| intrinsic_volume(p, k, opts)).collect()
}

/// Steiner verification data: Monte Carlo tube volume against the
/// alternating sum of ball-volume-weighted intrinsic volumes.
#[derive(Debug, Clone, Serialize)]
pub struct SteinerCheck {
    pub epsilon: f64,
    pub tube_volume_mc: f64,
    pub mc_sigma: f64,
    pub steiner_sum: f64,
    pub steiner_sigma: f64,
    pub residual: f64,
}

/// Estimate vol(P_eps) by uniform sampling of an inflated bounding box and
/// compare with sum_k ball_volume(n-k) eps^{n-k} V_k(P).
pub fn steiner_check(p: &Polytope, eps: f64, samples: u64, seed: u64) -> Result<SteinerCheck> {
    if eps <= 0.0 {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let n = p.n();
    let (lo, hi) = p.bounding_box();
    let lo: Vec<f64> = lo.iter().map(|x| x - eps * 1.0000001).collect();
    let hi: Vec<f64> = hi.iter().map(|x| x + eps * 1.0000001).collect();
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let est = mc::parallel_mc(samples, seed, |rng| {
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| rng.gen_range(*a..*b)).collect();
        if p.distance(&x) <= eps {
            1.0
        } else {
            0.0
        }
    });
    let tube = box_vol * est.mean();
    let tube_sigma = box_vol * est.sigma_mean().max(1.0 / samples as f64);
    let mut sum = 0.0;
    let mut var = 0.0;
    let vols = intrinsic_volumes(p, EvalOpts { seed: seed ^ 0x5151, ..EvalOpts::default() })?;
    for (k, (v, s)) in vols.iter().enumerate() {
        let w = ball_volume(n - k) * eps.powi((n - k) as i32);
        sum += w * v;
        var += (w * s) * (w * s);
    }
    Ok(SteinerCheck {
        epsilon: eps,
        tube_volume_mc: tube,
        mc_sigma: tube_sigma,
        steiner_sum: sum,
        steiner_sigma: var.sqrt(),
        residual: (tube - sum).abs(),
    })
}

/// Direct integration of a constant-coefficient form over the normal disc
/// bundle of the polytope, localized to the window: for each k-face, the
/// face volume times the Monte Carlo fiber integral over (polar cone n unit
/// ball) of the constant fiber density. Independent of the external-angle
/// route through the factorization of the fiber integral.
pub fn direct_constcoeff(
    omega: &BiGradedForm,
    p: &Polytope,
    window: &BorelBox,
    samples: u64,
    seed: u64,
) -> Result<CurvatureEvaluation> {
    let n = p.n();
    if omega.n() != n || omega.base_grade() + omega.fiber_grade() != n {
        return Err(Error::invalid("form must have bidegree (k, n-k) matching the polytope"));
    }
    let k = omega.base_grade();
    let mut value = 0.0;
    let mut var = 0.0;
    for (fi, face) in p.faces_of_dim(k).enumerate() {
        let frame = Frame::new(n, face.affine_basis.clone())?;
        let (density, comp) = const_coeff_density(omega, &frame)?;
        if density == 0.0 {
            continue;
        }
        let (vol, vsig) =
            p.face_volume(face, window, samples, mix_seed(seed, 0xC3, 0, fi));
        if vol == 0.0 && vsig == 0.0 {
            continue;
        }
        let fiber_dim = n - k;
        let (fiber_integral, fsig) = if fiber_dim == 0 {
            (density, 0.0)
        } else {
            let cone = p.tangent_cone(face);
            let est = mc::parallel_mc(samples, mix_seed(seed, 0xD4, 1, fi), |rng| {
                let u = mc::uniform_ball(fiber_dim, rng);
                let mut xi = vec![0.0; n];
                for (ui, w) in u.iter().zip(comp.vectors()) {
                    for (x, y) in xi.iter_mut().zip(w) {
                        *x += ui * y;
                    }
                }
                if cone.polar_contains(&xi) {
                    1.0
                } else {
                    0.0
                }
            });
            let hit = est.mean();
            let hsig = est.sigma_mean().max(1.0 / samples as f64);
            (
                ball_volume(fiber_dim) * density * hit,
                ball_volume(fiber_dim) * density.abs() * hsig,
            )
        };
        value += vol * fiber_integral;
        var += (vol * fsig).powi(2) + (fiber_integral * vsig).powi(2);
    }
    Ok(CurvatureEvaluation::from_parts(vec![DegreeValue {
        degree: k,
        value,
        sigma: var.sqrt(),
    }]))
}

/// Wedge with the standard symplectic form sum_i dx_i ^ dy_i: maps bidegree
/// (k-1, n-k-1) to (k, n-k). Such products pair to zero against every
/// E + E-perp splitting, so their induced weights vanish identically.
pub fn symplectic_wedge(eta: &BiGradedForm) -> Result<BiGradedForm> {
    let n = eta.n();
    let a = eta.base_grade();
    let b = eta.fiber_grade();
    if a + 1 > n || b + 1 > n {
        return Err(Error::GradeOverflow("symplectic wedge exceeds top degree".into()));
    }
    let mut out = BiGradedForm::zero(n, a + 1, b + 1)?;
    let base_subs = crate::comb::k_subsets(n, a);
    let fiber_subs = crate::comb::k_subsets(n, b);
    let fb = fiber_subs.len();
    let sign_a = if a % 2 == 0 { 1.0 } else { -1.0 };
    for (ib, bi) in base_subs.iter().enumerate() {
        for (jf, fj) in fiber_subs.iter().enumerate() {
            let c = eta.coeffs()[ib * fb + jf];
            if c == 0.0 {
                continue;
            }
            for i in 0..n {
                if bi.contains(&i) || fj.contains(&i) {
                    continue;
                }
                let pos_b = bi.iter().filter(|&&s| s < i).count();
                let pos_f = fj.iter().filter(|&&s| s < i).count();
                let sign_b = if pos_b % 2 == 0 { 1.0 } else { -1.0 };
                let sign_f = if pos_f % 2 == 0 { 1.0 } else { -1.0 };
                let mut nb = bi.clone();
                nb.push(i);
                nb.sort_unstable();
                let mut nf = fj.clone();
                nf.push(i);
                nf.sort_unstable();
                out.add_term(&nb, &nf, sign_a * sign_b * sign_f * c);
            }
        }
    }
    Ok(out)
}

/// Gaussian random form of the given bidegree.
pub fn random_bigraded(n: usize, base: usize, fiber: usize, rng: &mut impl Rng) -> BiGradedForm {
    let mut f = BiGradedForm::zero(n, base, fiber).expect("valid bidegree");
    for c in f.coeffs_mut() {
        *c = rng.sample::<f64, _>(rand_distr::StandardNormal);
    }
    f
}

/// Named tabulated weights available to file-based interfaces.
pub fn tabulated_weight(id: &str, k: usize) -> Result<WeightSpec> {
    let f: Arc<dyn Fn(&Frame) -> f64 + Send + Sync> = match id {
        "unit" => Arc::new(|_: &Frame| 1.0),
        "first-plucker-squared" => Arc::new(|fr: &Frame| {
            plucker(fr).map(|p| p.coeffs()[0] * p.coeffs()[0]).unwrap_or(0.0)
        }),
        "first-plucker-quartic" => Arc::new(|fr: &Frame| {
            plucker(fr).map(|p| p.coeffs()[0].powi(4)).unwrap_or(0.0)
        }),
        _ => {
            return Err(Error::invalid(format!(
                "unknown tabulated weight '{id}' (available: unit, first-plucker-squared, first-plucker-quartic)"
            )))
        }
    };
    Ok(WeightSpec::Tabulated { k, name: id.to_string(), f })
}

/// Parse one weight from its JSON object form: {"variant": "federer" |
/// "quadratic" | "constcoeff" | "tabulated-id", "k", "Q"?, "omega"?, "id"?}.
fn weight_from_value(v: &serde_json::Value, path: &str) -> Result<WeightSpec> {
    let variant = v
        .get("variant")
        .and_then(|x| x.as_str())
        .ok_or_else(|| Error::Parse { path: format!("{path}.variant"), message: "missing".into() })?;
    let get_k = || -> Result<usize> {
        v.get("k")
            .and_then(|x| x.as_u64())
            .map(|x| x as usize)
            .ok_or_else(|| Error::Parse { path: format!("{path}.k"), message: "missing integer".into() })
    };
    match variant {
        "federer" => Ok(WeightSpec::Federer { k: get_k()? }),
        "quadratic" => {
            let k = get_k()?;
            let q = v
                .get("Q")
                .and_then(|x| serde_json::from_value::<Vec<Vec<f64>>>(x.clone()).ok())
                .ok_or_else(|| Error::Parse {
                    path: format!("{path}.Q"),
                    message: "missing matrix".into(),
                })?;
            Ok(WeightSpec::Quadratic { k, q })
        }
        "constcoeff" => {
            let omega = v.get("omega").ok_or_else(|| Error::Parse {
                path: format!("{path}.omega"),
                message: "missing form".into(),
            })?;
            let omega = BiGradedForm::from_json(&omega.to_string())?;
            Ok(WeightSpec::ConstCoeff { omega })
        }
        "tabulated-id" => {
            let id = v.get("id").and_then(|x| x.as_str()).ok_or_else(|| Error::Parse {
                path: format!("{path}.id"),
                message: "missing tabulated id".into(),
            })?;
            tabulated_weight(id, get_k()?)
        }
        other => Err(Error::Parse {
            path: format!("{path}.variant"),
            message: format!("unknown variant '{other}'"),
        }),
    }
}

/// Parse a weight file: a single weight object or an array of them.
pub fn weights_from_json(text: &str) -> Result<Vec<WeightSpec>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: "$".into(),
        message: e.to_string(),
    })?;
    match &v {
        serde_json::Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, item)| weight_from_value(item, &format!("$[{i}]")))
            .collect(),
        _ => Ok(vec![weight_from_value(&v, "$")?]),
    }
}
