//! End-to-end verification suite.
//!
//! Each criterion is a self-contained check with pinned seeds, sample counts
//! and tolerances; the CLI `verify-all` subcommand and the acceptance
//! integration test both run these. Monte Carlo assertions use three
//! standard errors of the estimator in question.

use rand::Rng;
use serde::Serialize;

use crate::cones::{AngleOpts, PolyCone};
use crate::crofton::{crofton_estimate, vk_action, FlatMeasure};
use crate::curvmeas::{
    direct_constcoeff, evaluate, intrinsic_volume, random_bigraded, steiner_check,
    symplectic_wedge, EvalOpts, WeightSpec,
};
use crate::error::Result;
use crate::grassrank::{
    constcoeff_weight_rank, dim_formula, obstruction_family_check, restriction_rank,
    sample_grassmann,
};
use crate::mc;
use crate::polytope::{BorelBox, Polytope};
use crate::ratmat::{rat, Rat};
use crate::repcomb::{tensor_difference_dim_check, littlewood_restrict, so_branch_dim_check, Partition};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub details: String,
    pub elapsed_s: f64,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} — {} ({:.1}s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_s,
            self.details
        )
    }
}

fn finish(
    id: &'static str,
    name: &'static str,
    start: std::time::Instant,
    failures: Vec<String>,
    summary: String,
) -> CheckResult {
    let pass = failures.is_empty();
    CheckResult {
        id,
        name,
        pass,
        details: if pass { summary } else { failures.join("; ") },
        elapsed_s: start.elapsed().as_secs_f64(),
    }
}

/// Classification dimension: the sampled quadratic-monomial rank equals the
/// closed-form dimension, with a wide singular-value gap, per (n, k) pair.
pub fn criterion_1() -> CheckResult {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for (n, k) in [(3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3), (6, 2)] {
        let t0 = std::time::Instant::now();
        let nn = crate::comb::binomial(n, k);
        let samples = 3 * (nn * (nn + 1) / 2);
        match restriction_rank(n, k, samples, 0xC1A0 + (n * 10 + k) as u64) {
            Ok(r) => {
                let dt = t0.elapsed().as_secs_f64();
                if r.rank as u64 != r.expected {
                    failures.push(format!("({n},{k}): rank {} != {}", r.rank, r.expected));
                } else if r.gap < 1e3 {
                    failures.push(format!("({n},{k}): gap {:.2e} < 1e3", r.gap));
                } else if dt > 60.0 {
                    failures.push(format!("({n},{k}): took {dt:.1}s > 60s"));
                } else {
                    summary.push(format!("({n},{k})={}", r.rank));
                }
            }
            Err(e) => failures.push(format!("({n},{k}): {e}")),
        }
    }
    finish(
        "criterion-1",
        "restriction rank equals the dimension formula",
        start,
        failures,
        summary.join(" "),
    )
}

/// Constant-coefficient weights span the same space: equal rank and every
/// weight inside the quadratic span.
pub fn criterion_2() -> CheckResult {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for (n, k) in [(3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3), (6, 2)] {
        let expected = dim_formula(n, k).expect("in range");
        let nn = crate::comb::binomial(n, k);
        let samples = (3 * (nn * (nn + 1) / 2)).max(2 * expected as usize + 10);
        let forms = 2 * expected as usize + 8;
        match constcoeff_weight_rank(n, k, forms, samples, 0xC2B0 + (n * 10 + k) as u64) {
            Ok(r) => {
                if r.rank as u64 != expected {
                    failures.push(format!("({n},{k}): weight rank {} != {expected}", r.rank));
                } else if r.max_span_residual >= 1e-8 {
                    failures.push(format!(
                        "({n},{k}): span residual {:.2e} >= 1e-8",
                        r.max_span_residual
                    ));
                } else {
                    summary.push(format!("({n},{k})={} res={:.1e}", r.rank, r.max_span_residual));
                }
            }
            Err(e) => failures.push(format!("({n},{k}): {e}")),
        }
    }
    finish(
        "criterion-2",
        "constant-coefficient weights fill the quadratic span",
        start,
        failures,
        summary.join(" "),
    )
}

fn random_full_dim_polytope(n: usize, rng: &mut impl Rng) -> Polytope {
    loop {
        let count = rng.gen_range((n + 2)..=(n + 6));
        let pts: Vec<Vec<Rat>> = (0..count)
            .map(|_| {
                (0..n)
                    .map(|_| Rat::new(num::BigInt::from(rng.gen_range(-8i64..=8)), 8.into()))
                    .collect()
            })
            .collect();
        if let Ok(p) = Polytope::from_rational_vertices(n, pts) {
            if p.dim() == n {
                return p;
            }
        }
    }
}

fn random_window(n: usize, rng: &mut impl Rng) -> BorelBox {
    if rng.gen_bool(0.4) {
        return BorelBox::All;
    }
    let lo: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.3..0.0)).collect();
    let hi: Vec<f64> = lo.iter().map(|l| l + rng.gen_range(0.4..2.4)).collect();
    BorelBox::aligned(lo, hi).expect("lo <= hi by construction")
}

/// Face-sum route against the direct normal-disc integration for random
/// constant-coefficient forms, polytopes and windows.
pub fn criterion_3() -> CheckResult {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut rng = mc::substream(0xC30, 0);
    let mut case = 0usize;
    'outer: for n in [2usize, 3, 4] {
        let cases = if n == 4 { 16 } else { 17 };
        for _ in 0..cases {
            case += 1;
            let p = random_full_dim_polytope(n, &mut rng);
            let k = rng.gen_range(0..=n);
            let omega = random_bigraded(n, k, n - k, &mut rng);
            let window = random_window(n, &mut rng);
            let seed = 0xC3000 + case as u64;
            let ev = match evaluate(
                &[WeightSpec::ConstCoeff { omega: omega.clone() }],
                &p,
                &window,
                EvalOpts { angle_samples: 200_000, volume_samples: 100_000, seed },
            ) {
                Ok(v) => v,
                Err(e) => {
                    failures.push(format!("case {case}: evaluate failed: {e}"));
                    continue;
                }
            };
            let direct = match direct_constcoeff(&omega, &p, &window, 100_000, seed ^ 0xD1) {
                Ok(v) => v,
                Err(e) => {
                    failures.push(format!("case {case}: direct failed: {e}"));
                    continue;
                }
            };
            let scale = 1.0 + ev.total.abs().max(direct.total.abs());
            let sigma = (ev.sigma.powi(2) + direct.sigma.powi(2)).sqrt() + 1e-9 * scale;
            let z = (ev.total - direct.total).abs() / sigma;
            worst = worst.max(z);
            if z >= 3.0 {
                failures.push(format!(
                    "case {case} (n={n},k={k}): {} vs {} is {z:.1} sigma",
                    ev.total, direct.total
                ));
            }
            if start.elapsed().as_secs_f64() > 300.0 {
                failures.push("exceeded the 5 minute budget".into());
                break 'outer;
            }
        }
    }
    finish(
        "criterion-3",
        "face-sum equals direct normal-disc integration",
        start,
        failures,
        format!("50 random (form, polytope, window) cases, worst z = {worst:.2}"),
    )
}

/// Weights induced by symplectic multiples vanish identically.
pub fn criterion_4() -> CheckResult {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    let mut rng = mc::substream(0xC40, 0);
    let mut max_abs: f64 = 0.0;
    let pairs = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)];
    for t in 0..20 {
        let (n, k) = pairs[t % pairs.len()];
        let eta = random_bigraded(n, k - 1, n - k - 1, &mut rng);
        let omega = match symplectic_wedge(&eta) {
            Ok(w) => w,
            Err(e) => {
                failures.push(format!("eta {t}: {e}"));
                continue;
            }
        };
        let sample = sample_grassmann(n, k, 500, 0xC400 + t as u64).expect("valid (n,k)");
        for frame in &sample.frames {
            match crate::curvmeas::const_coeff_weight(&omega, frame) {
                Ok(v) => {
                    max_abs = max_abs.max(v.abs());
                    if v.abs() >= 1e-12 {
                        failures.push(format!("eta {t} (n={n},k={k}): |f| = {:.2e}", v.abs()));
                        break;
                    }
                }
                Err(e) => {
                    failures.push(format!("eta {t}: {e}"));
                    break;
                }
            }
        }
    }
    finish(
        "criterion-4",
        "symplectic multiples have vanishing weights",
        start,
        failures,
        format!("20 forms x 500 planes, max |f| = {max_abs:.2e}"),
    )
}

/// Tube volumes against the ball-volume-weighted intrinsic volume sums.
pub fn criterion_5() -> CheckResult {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let bodies: Vec<(&str, Polytope)> = vec![
        ("cube", Polytope::unit_cube(3).expect("cube")),
        ("simplex", Polytope::standard_simplex(3).expect("simplex")),
        (
            "segment",
            Polytope::from_rational_vertices(2, vec![vec![rat(0), rat(0)], vec![rat(1), rat(0)]])
                .expect("segment"),
        ),
        (
            "point",
            Polytope::from_rational_vertices(2, vec![vec![rat(0), rat(0)]]).expect("point"),
        ),
    ];
    for (name, p) in &bodies {
        for (i, eps) in [0.1f64, 0.5, 1.0].iter().enumerate() {
            let seed = 0xC500 + i as u64 * 17 + name.len() as u64;
            match steiner_check(p, *eps, 1_000_000, seed) {
                Ok(c) => {
                    let sigma = (c.mc_sigma.powi(2) + c.steiner_sigma.powi(2)).sqrt();
                    let z = c.residual / sigma;
                    worst = worst.max(z);
                    if z >= 3.0 {
                        failures.push(format!(
                            "{name} eps={eps}: residual {:.3e} is {z:.1} sigma",
                            c.residual
                        ));
                    }
                }
                Err(e) => failures.push(format!("{name} eps={eps}: {e}")),
            }
        }
    }
    finish(
        "criterion-5",
        "tube volumes follow the intrinsic-volume polynomial",
        start,
        failures,
        format!("4 bodies x 3 radii at 1e6 samples, worst z = {worst:.2}"),
    )
}

/// External-angle suite: orthant corners, facet angles, vertex-angle sums,
/// and inclusion-exclusion over triangulations.
pub fn criterion_6() -> CheckResult {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    // orthant corner of R^n: 2^-n
    for n in [2usize, 3, 4, 5] {
        let rays = (0..n)
            .map(|i| {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                v
            })
            .collect();
        let c = PolyCone::from_rays(n, rays).expect("valid");
        let target = 0.5f64.powi(n as i32);
        let a = c.external_angle(AngleOpts { samples: 400_000, seed: 0xC600 + n as u64 });
        if n <= 3 {
            if !a.exact || (a.value - target).abs() > 1e-12 {
                failures.push(format!("orthant n={n}: {} (exact branch)", a.value));
            }
        } else if (a.value - target).abs() > 3.0 * a.sigma {
            failures.push(format!("orthant n={n}: {} vs {target} +- {}", a.value, a.sigma));
        }
    }
    // facet angle is exactly 1/2
    let cube = Polytope::unit_cube(3).expect("cube");
    let facet = cube.faces_of_dim(2).next().expect("cube facet");
    let a = cube.tangent_cone(facet).external_angle(AngleOpts::default());
    if !a.exact || (a.value - 0.5).abs() > 1e-12 {
        failures.push(format!("facet angle {} != 1/2", a.value));
    }
    // vertex-angle sums equal 1
    let pyramid = Polytope::from_f64_vertices(
        3,
        &[
            vec![1.0, 1.0, 0.0],
            vec![1.0, -1.0, 0.0],
            vec![-1.0, 1.0, 0.0],
            vec![-1.0, -1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ],
    )
    .expect("pyramid");
    let exact_bodies = [
        ("square", Polytope::unit_cube(2).expect("square")),
        ("cube", Polytope::unit_cube(3).expect("cube")),
        ("simplex3", Polytope::standard_simplex(3).expect("simplex")),
        ("pyramid", pyramid),
    ];
    for (name, p) in &exact_bodies {
        let (v0, s) = intrinsic_volume(p, 0, EvalOpts::default()).expect("evaluable");
        if s > 0.0 || (v0 - 1.0).abs() > 1e-9 {
            failures.push(format!("{name}: vertex angles sum to {v0}"));
        }
    }
    let simplex4 = Polytope::standard_simplex(4).expect("simplex4");
    let (v0, s) = intrinsic_volume(
        &simplex4,
        0,
        EvalOpts { angle_samples: 400_000, volume_samples: 1000, seed: 0xC611 },
    )
    .expect("evaluable");
    if (v0 - 1.0).abs() > 3.0 * s {
        failures.push(format!("simplex4: vertex angles sum to {v0} +- {s}"));
    }
    // inclusion-exclusion residuals on random cones
    let mut rng = mc::substream(0xC620, 0);
    for trial in 0..20 {
        let n = if trial < 10 { 3 } else { 4 };
        let rays: Vec<Vec<f64>> = (0..(n + 2))
            .map(|_| {
                let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                v[n - 1] = v[n - 1].abs() + 0.3;
                let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.iter().map(|x| x / norm).collect()
            })
            .collect();
        let c = PolyCone::from_rays(n, rays).expect("valid");
        match c.angle_additivity_check(AngleOpts { samples: 200_000, seed: 0xC630 + trial }) {
            Ok((res, sigma)) => {
                if res >= 3.0 * sigma + 1e-9 {
                    failures.push(format!(
                        "cone {trial} (n={n}): residual {res:.3e} vs sigma {sigma:.3e}"
                    ));
                }
            }
            Err(e) => failures.push(format!("cone {trial}: {e}")),
        }
    }
    finish(
        "criterion-6",
        "external-angle identities",
        start,
        failures,
        "orthants, facet 1/2, vertex sums, 20 inclusion-exclusion cones".into(),
    )
}

/// Crofton estimates match face-sum intrinsic volumes.
pub fn criterion_7() -> CheckResult {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut rng = mc::substream(0xC700, 0);
    let mut bodies: Vec<(String, Polytope)> = vec![
        ("simplex2".into(), Polytope::standard_simplex(2).expect("simplex2")),
        ("simplex3".into(), Polytope::standard_simplex(3).expect("simplex3")),
    ];
    for i in 0..2 {
        bodies.push((format!("random2-{i}"), random_full_dim_polytope(2, &mut rng)));
    }
    for i in 0..3 {
        bodies.push((format!("random3-{i}"), random_full_dim_polytope(3, &mut rng)));
    }
    for (bi, (name, p)) in bodies.iter().enumerate() {
        let n = p.n();
        for k in 1..n {
            let seed = 0xC710 + bi as u64 * 31 + k as u64;
            let meas = match FlatMeasure::for_body(p, k)
                .and_then(|m| m.calibrate(1_000_000, seed))
            {
                Ok(m) => m,
                Err(e) => {
                    failures.push(format!("{name} k={k}: calibration failed: {e}"));
                    continue;
                }
            };
            let est = match crofton_estimate(p, k, &meas, 1_000_000, seed ^ 0xE) {
                Ok(e) => e,
                Err(e) => {
                    failures.push(format!("{name} k={k}: {e}"));
                    continue;
                }
            };
            let (vk, vs) = intrinsic_volume(p, k, EvalOpts::default()).expect("face sum");
            let sigma = (est.sigma.powi(2) + vs.powi(2)).sqrt();
            let z = (est.value - vk).abs() / sigma;
            worst = worst.max(z);
            if z >= 3.0 {
                failures.push(format!(
                    "{name} k={k}: crofton {} vs face-sum {vk} is {z:.1} sigma",
                    est.value
                ));
            }
            if est.sigma > 0.01 * vk.abs().max(1.0) {
                failures.push(format!(
                    "{name} k={k}: sigma {:.3e} exceeds the 1% noise budget",
                    est.sigma
                ));
            }
        }
    }
    finish(
        "criterion-7",
        "calibrated flat integrals reproduce intrinsic volumes",
        start,
        failures,
        format!("7 bodies, all degrees, 1e6 flats each, worst z = {worst:.2}"),
    )
}

/// The repeated line integral on the unit square equals pi/2.
pub fn criterion_8() -> CheckResult {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    let sq = Polytope::unit_cube(2).expect("square");
    let target = std::f64::consts::FRAC_PI_2;
    let mut detail = String::new();
    match FlatMeasure::for_body(&sq, 1).and_then(|m| m.calibrate(1_000_000, 0xC800)) {
        Ok(meas) => {
            match vk_action(
                &[WeightSpec::Federer { k: 1 }],
                &sq,
                &BorelBox::All,
                1,
                &meas,
                1_000_000,
                0xC801,
            ) {
                Ok((v, s)) => {
                    detail = format!("{v:.5} +- {s:.5} vs pi/2 = {target:.5}");
                    if (v - target).abs() >= 3.0 * s {
                        failures.push(format!("off target: {detail}"));
                    }
                    if s > 0.01 * target {
                        failures.push(format!("noise {s:.2e} above 1%"));
                    }
                }
                Err(e) => failures.push(e.to_string()),
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    finish(
        "criterion-8",
        "repeated line integral gives pi/2 on the unit square",
        start,
        failures,
        detail,
    )
}

/// Exact representation-theoretic identities.
pub fn criterion_9() -> CheckResult {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    for n in 2..=10usize {
        for k in 1..n {
            match tensor_difference_dim_check(n, k) {
                Ok(r) if r == num::BigInt::from(0) => {}
                Ok(r) => failures.push(format!("binomial identity ({n},{k}): residual {r}")),
                Err(e) => failures.push(format!("({n},{k}): {e}")),
            }
        }
    }
    for n in 3..=8usize {
        for k in 0..=(n / 2) {
            match so_branch_dim_check(k, n) {
                Ok(r) if r == num::BigInt::from(0) => {}
                Ok(r) => failures.push(format!("branch dims ({n},{k}): residual {r}")),
                Err(e) => failures.push(format!("branch ({n},{k}): {e}")),
            }
        }
    }
    // the rectangle (2^k) restricts to exactly (2^i), i <= k, each once
    for (k, n) in [(1usize, 3usize), (2, 4), (2, 5), (3, 6), (3, 7), (4, 8)] {
        match littlewood_restrict(&Partition::rectangle(k, 2), n) {
            Ok(list) => {
                let mut expected: Vec<(Partition, u64)> =
                    (0..=k).map(|i| (Partition::rectangle(i, 2), 1)).collect();
                expected.sort();
                if list != expected {
                    failures.push(format!("restriction of (2^{k}) at n={n}: {list:?}"));
                }
            }
            Err(e) => failures.push(format!("restrict (2^{k}) n={n}: {e}")),
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 1.0 {
        failures.push(format!("took {elapsed:.2}s > 1s"));
    }
    finish(
        "criterion-9",
        "exact partition identities",
        start,
        failures,
        "binomial vs Weyl dims (n<=10), branch dims (n<=8), rectangle restrictions".into(),
    )
}

/// The determinantal family equals cos^{2 m1} and the quadratic fit
/// separates m1 <= 1 from m1 >= 2.
pub fn criterion_10() -> CheckResult {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    let grid: Vec<f64> =
        (0..100).map(|i| 2.0 * std::f64::consts::PI * i as f64 / 100.0).collect();
    let mut worst_family: f64 = 0.0;
    for n in [3usize, 4, 5, 6] {
        let k = match n {
            3 => 1,
            4 | 5 => 2,
            _ => 3,
        };
        for m1 in 0..=3i64 {
            match obstruction_family_check(n, k, m1, &grid) {
                Ok(r) => {
                    worst_family = worst_family.max(r.max_family_residual);
                    if r.max_family_residual >= 1e-10 {
                        failures.push(format!(
                            "family (n={n},k={k},m1={m1}): residual {:.2e}",
                            r.max_family_residual
                        ));
                    }
                    if m1 <= 1 && r.quadratic_fit_residual >= 1e-8 {
                        failures.push(format!(
                            "fit (n={n},m1={m1}) should vanish: {:.2e}",
                            r.quadratic_fit_residual
                        ));
                    }
                    if m1 >= 2 && r.quadratic_fit_residual <= 0.01 {
                        failures.push(format!(
                            "fit (n={n},m1={m1}) should fail: {:.2e}",
                            r.quadratic_fit_residual
                        ));
                    }
                }
                Err(e) => failures.push(format!("(n={n},m1={m1}): {e}")),
            }
        }
    }
    finish(
        "criterion-10",
        "determinantal family values and quadratic-fit split",
        start,
        failures,
        format!("m1 in 0..3, n in 3..6, worst family residual {worst_family:.2e}"),
    )
}

/// Run all criteria in order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}

/// Convenience wrapper used by the CLI.
pub fn run_by_id(id: &str) -> Result<CheckResult> {
    match id {
        "1" | "criterion-1" => Ok(criterion_1()),
        "2" | "criterion-2" => Ok(criterion_2()),
        "3" | "criterion-3" => Ok(criterion_3()),
        "4" | "criterion-4" => Ok(criterion_4()),
        "5" | "criterion-5" => Ok(criterion_5()),
        "6" | "criterion-6" => Ok(criterion_6()),
        "7" | "criterion-7" => Ok(criterion_7()),
        "8" | "criterion-8" => Ok(criterion_8()),
        "9" | "criterion-9" => Ok(criterion_9()),
        "10" | "criterion-10" => Ok(criterion_10()),
        _ => Err(crate::error::Error::invalid(format!("unknown criterion '{id}'"))),
    }
}
