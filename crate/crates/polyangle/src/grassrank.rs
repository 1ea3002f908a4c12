//! Numerical classification of angular weights on Grassmannians.
//!
//! The restriction of quadratic polynomials in Plucker coordinates to the
//! Grassmannian of k-planes spans a space whose dimension is the integer
//! C(n,k) C(n+1,k+1)/(n-k+1) = C(n,k)^2 - C(n,k-1) C(n,k+1). This module
//! measures that dimension as the numerical rank of a sample matrix of
//! quadratic monomials, cross-checks it against the weights induced by
//! random constant-coefficient forms, and evaluates the determinantal
//! highest-weight functions whose restriction to a one-parameter family of
//! planes is cos^{2 m_1}(phi) - quadratic precisely when m_1 <= 1.

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use serde::Serialize;

use crate::comb::binomial;
use crate::curvmeas::const_coeff_weight;
use crate::error::{Error, Result};
use crate::exterior::{plucker, Frame};
use crate::mc;

/// Haar-random orthonormal k-frame in R^n (Gram-Schmidt of a Gaussian
/// matrix with positive pivots).
pub fn haar_frame(n: usize, k: usize, rng: &mut impl Rng) -> Frame {
    'redraw: loop {
        let cols: Vec<Vec<f64>> = (0..k).map(|_| mc::gaussian_vector(n, rng)).collect();
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
        for v in &cols {
            let mut w = v.clone();
            for b in &basis {
                let d: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= d * bi;
                }
            }
            let nw: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nw < 1e-8 {
                continue 'redraw;
            }
            for x in &mut w {
                *x /= nw;
            }
            basis.push(w);
        }
        return Frame::new(n, basis).expect("constructed with length n");
    }
}

/// A batch of orthonormal frames representing points of the Grassmannian.
#[derive(Debug, Clone)]
pub struct GrassSample {
    pub n: usize,
    pub k: usize,
    pub frames: Vec<Frame>,
    pub seed: u64,
}

/// Invariant-measure sample of the Grassmannian.
pub fn sample_grassmann(n: usize, k: usize, count: usize, seed: u64) -> Result<GrassSample> {
    if k == 0 || k >= n {
        return Err(Error::invalid("need 1 <= k <= n-1"));
    }
    let mut rng = mc::substream(seed, 0);
    let frames = (0..count).map(|_| haar_frame(n, k, &mut rng)).collect();
    Ok(GrassSample { n, k, frames, seed })
}

/// The classification dimension: (1/(n-k+1)) C(n,k) C(n+1,k+1), cross-checked
/// against the binomial difference C(n,k)^2 - C(n,k-1) C(n,k+1).
pub fn dim_formula(n: usize, k: usize) -> Result<u64> {
    if k + 1 >= n {
        return Err(Error::invalid(format!("dim_formula needs 0 <= k < n-1, got ({n},{k})")));
    }
    let a = binomial(n, k) as u128 * binomial(n + 1, k + 1) as u128;
    debug_assert_eq!(a % (n - k + 1) as u128, 0);
    let v = (a / (n - k + 1) as u128) as u64;
    let b = (binomial(n, k) as i128).pow(2)
        - if k == 0 { 0 } else { binomial(n, k - 1) as i128 * binomial(n, k + 1) as i128 };
    debug_assert_eq!(v as i128, b, "the two dimension formulas disagree");
    Ok(v)
}

/// Numerical-rank report for the sampled function spaces.
#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub n: usize,
    pub k: usize,
    pub expected: u64,
    pub rank: usize,
    /// Ratio of the singular values straddling the cutoff.
    pub gap: f64,
    pub samples: usize,
}

const RANK_CUTOFF_REL: f64 = 1e-9;
const MIN_STABLE_GAP: f64 = 10.0;

fn numerical_rank(matrix: DMatrix<f64>) -> Result<(usize, f64)> {
    let sv = matrix.singular_values();
    let mut s: Vec<f64> = sv.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok((0, f64::INFINITY));
    }
    let cutoff = RANK_CUTOFF_REL * smax;
    let rank = s.iter().filter(|&&x| x > cutoff).count();
    let gap = if rank == 0 {
        f64::INFINITY
    } else if rank < s.len() && s[rank] > 0.0 {
        s[rank - 1] / s[rank]
    } else {
        f64::INFINITY
    };
    if gap < MIN_STABLE_GAP {
        return Err(Error::UnstableRank { above: s[rank - 1], below: s[rank] });
    }
    Ok((rank, gap))
}

/// All quadratic monomials p_I p_J (I <= J lexicographically) of the Plucker
/// coordinates of a frame.
pub fn quadratic_monomials(frame: &Frame) -> Result<Vec<f64>> {
    let p = plucker(frame)?;
    let c = p.coeffs();
    let nn = c.len();
    let mut out = Vec::with_capacity(nn * (nn + 1) / 2);
    for i in 0..nn {
        for j in i..nn {
            out.push(c[i] * c[j]);
        }
    }
    Ok(out)
}

/// Rank of the space spanned by quadratic Plucker monomials restricted to
/// the Grassmannian, sampled at `sample_count` Haar frames.
pub fn restriction_rank(n: usize, k: usize, sample_count: usize, seed: u64) -> Result<RankReport> {
    let expected = dim_formula(n, k)?;
    let nn = binomial(n, k);
    let ncols = nn * (nn + 1) / 2;
    if sample_count < 2 * ncols {
        return Err(Error::invalid(format!(
            "need at least {} samples for ({n},{k})",
            2 * ncols
        )));
    }
    let sample = sample_grassmann(n, k, sample_count, seed)?;
    let mut m = DMatrix::<f64>::zeros(sample_count, ncols);
    for (r, frame) in sample.frames.iter().enumerate() {
        for (c, v) in quadratic_monomials(frame)?.iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    let (rank, gap) = numerical_rank(m)?;
    Ok(RankReport { n, k, expected, rank, gap, samples: sample_count })
}

/// Weight-space rank report with the span cross-check.
#[derive(Debug, Clone, Serialize)]
pub struct WeightRankReport {
    pub n: usize,
    pub k: usize,
    pub expected: u64,
    pub rank: usize,
    pub gap: f64,
    pub forms: usize,
    pub samples: usize,
    /// Worst relative residual of a weight row against the quadratic span.
    pub max_span_residual: f64,
}

/// Rank of the weight functions induced by random constant-coefficient forms
/// of bidegree (k, n-k), evaluated on a shared Grassmannian sample, plus the
/// residual of each weight row against the span of quadratic monomials.
pub fn constcoeff_weight_rank(
    n: usize,
    k: usize,
    form_count: usize,
    sample_count: usize,
    seed: u64,
) -> Result<WeightRankReport> {
    let expected = dim_formula(n, k)?;
    if (form_count as u64) < 2 * expected {
        return Err(Error::invalid(format!("need at least {} forms", 2 * expected)));
    }
    let nn = binomial(n, k);
    let ncols = nn * (nn + 1) / 2;
    if sample_count < 2 * ncols {
        return Err(Error::invalid(format!("need at least {} samples", 2 * ncols)));
    }
    let sample = sample_grassmann(n, k, sample_count, seed)?;
    let mut rng = mc::substream(seed, 1);
    let mut weight_matrix = DMatrix::<f64>::zeros(form_count, sample_count);
    let mut weight_rows: Vec<Vec<f64>> = Vec::with_capacity(form_count);
    for fi in 0..form_count {
        let omega = crate::curvmeas::random_bigraded(n, k, n - k, &mut rng);
        let mut row = Vec::with_capacity(sample_count);
        for (si, frame) in sample.frames.iter().enumerate() {
            let v = const_coeff_weight(&omega, frame)?;
            weight_matrix[(fi, si)] = v;
            row.push(v);
        }
        weight_rows.push(row);
    }
    let (rank, gap) = numerical_rank(weight_matrix)?;

    // span check: each weight row must be a combination of the quadratic
    // monomial functions on the same sample
    let mut monomials = DMatrix::<f64>::zeros(sample_count, ncols);
    for (r, frame) in sample.frames.iter().enumerate() {
        for (c, v) in quadratic_monomials(frame)?.iter().enumerate() {
            monomials[(r, c)] = *v;
        }
    }
    let svd = monomials.svd(true, true);
    let mut max_span_residual = 0.0f64;
    for row in &weight_rows {
        let b = nalgebra::DVector::from_column_slice(row);
        let x = svd
            .solve(&b, 1e-12)
            .map_err(|e| Error::invalid(format!("least squares failed: {e}")))?;
        let u = svd.u.as_ref().expect("svd computed with u");
        let vt = svd.v_t.as_ref().expect("svd computed with v_t");
        let approx = u * DMatrix::from_diagonal(&svd.singular_values) * vt * &x;
        let resid = (&b - &approx).norm() / b.norm().max(1e-300);
        max_span_residual = max_span_residual.max(resid);
    }
    Ok(WeightRankReport {
        n,
        k,
        expected,
        rank,
        gap,
        forms: form_count,
        samples: sample_count,
        max_span_residual,
    })
}

/// Dominant weight data for the determinantal highest-weight functions:
/// m_1 >= ... >= m_{k-1} >= |m_k|, and m_k >= 0 when 2k < n.
#[derive(Debug, Clone)]
pub struct HighestWeightSpec {
    pub m: Vec<i64>,
    pub n: usize,
    pub k: usize,
}

impl HighestWeightSpec {
    pub fn new(m: Vec<i64>, n: usize, k: usize) -> Result<Self> {
        if m.len() != k {
            return Err(Error::invalid("weight length must equal k"));
        }
        if 2 * k > n {
            return Err(Error::invalid("need k <= n/2 for the determinantal realization"));
        }
        for i in 0..k.saturating_sub(1) {
            let next = if i + 1 == k - 1 { m[i + 1].abs() } else { m[i + 1] };
            if m[i] < next {
                return Err(Error::invalid("weight entries must be weakly decreasing"));
            }
        }
        if 2 * k < n && k > 0 && m[k - 1] < 0 {
            return Err(Error::invalid("last entry must be nonnegative when 2k < n"));
        }
        Ok(HighestWeightSpec { m, n, k })
    }
}

/// The determinantal highest-weight function: products of powers of
/// det(A(l) A(l)^t) where A(l) stacks the complexified coordinate rows
/// X_{2j-1} + i X_{2j} of an orthonormal basis of the plane.
pub fn strichartz_vector(spec: &HighestWeightSpec, frame: &Frame) -> Result<Complex<f64>> {
    let n = spec.n;
    let k = spec.k;
    if frame.n() != n || frame.k() != k {
        return Err(Error::dim("frame does not match the weight spec"));
    }
    if !frame.is_orthonormal(1e-9) {
        return Err(Error::invalid("frame must be orthonormal"));
    }
    // complex rows Z_j = X_{2j-1} + i X_{2j}, j = 1..floor(n/2); X_r is the
    // vector of r-th coordinates across the frame
    let max_l = k;
    let mut z: Vec<Vec<Complex<f64>>> = Vec::with_capacity(max_l);
    for j in 0..max_l {
        let re = 2 * j;
        let im = 2 * j + 1;
        let row: Vec<Complex<f64>> = (0..k)
            .map(|c| {
                let x = frame.vectors()[c][re];
                let y = if im < n { frame.vectors()[c][im] } else { 0.0 };
                Complex::new(x, y)
            })
            .collect();
        z.push(row);
    }
    let det_l = |l: usize| -> Complex<f64> {
        let mut m = DMatrix::<Complex<f64>>::zeros(l, l);
        for r in 0..l {
            for c in 0..l {
                let mut s = Complex::new(0.0, 0.0);
                for t in 0..k {
                    s += z[r][t] * z[c][t];
                }
                m[(r, c)] = s;
            }
        }
        m.determinant()
    };
    let powu = |base: Complex<f64>, e: u64| -> Complex<f64> {
        let mut acc = Complex::new(1.0, 0.0);
        for _ in 0..e {
            acc *= base;
        }
        acc
    };
    let m = &spec.m;
    let mut val = Complex::new(1.0, 0.0);
    if k == 0 {
        return Ok(val);
    }
    if m[k - 1] >= 0 {
        for l in 1..=k {
            let next = if l == k { 0 } else { m[l] };
            let e = m[l - 1] - next;
            debug_assert!(e >= 0);
            if e > 0 {
                val *= powu(det_l(l), e as u64);
            }
        }
    } else {
        for l in 1..k {
            let next = m[l].abs();
            let e = m[l - 1] - next;
            debug_assert!(e >= 0);
            if e > 0 {
                val *= powu(det_l(l), e as u64);
            }
        }
        val *= powu(det_l(k).conj(), m[k - 1].unsigned_abs());
    }
    Ok(val)
}

/// The one-parameter family of k-planes on which every determinantal
/// highest-weight function with leading entry m_1 takes the value
/// cos^{2 m_1}(phi): for n >= 4 the plane spanned by cos(phi) e1 +
/// sin(phi) e4 and e3, e5, ..., e_{2k-1}; for n = 3 the line spanned by
/// cos(phi) e1 + sin(phi) e3.
pub fn obstruction_frame(n: usize, k: usize, phi: f64) -> Result<Frame> {
    if n == 3 {
        if k != 1 {
            return Err(Error::invalid("the n = 3 family needs k = 1"));
        }
        return Frame::new(3, vec![vec![phi.cos(), 0.0, phi.sin()]]);
    }
    if n < 4 {
        return Err(Error::invalid("family needs n >= 3"));
    }
    if k == 0 || 2 * k > n || (k >= 2 && 2 * k - 1 > n) {
        return Err(Error::invalid("family needs 1 <= k <= n/2"));
    }
    let mut vectors = Vec::with_capacity(k);
    let mut v1 = vec![0.0; n];
    v1[0] = phi.cos();
    v1[3] = phi.sin();
    vectors.push(v1);
    for j in 2..=k {
        let mut v = vec![0.0; n];
        v[2 * j - 2] = 1.0; // e_{2j-1} in 1-based indexing
        vectors.push(v);
    }
    Frame::new(n, vectors)
}

/// Least-squares fit of sampled values by quadratic monomials in Plucker
/// coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct QuadraticFit {
    pub coefficients: Vec<f64>,
    pub rms_residual: f64,
    pub condition: f64,
}

pub fn fit_quadratic(frames: &[Frame], values: &[f64]) -> Result<QuadraticFit> {
    if frames.is_empty() || frames.len() != values.len() {
        return Err(Error::invalid("need equally many frames and values"));
    }
    let cols = quadratic_monomials(&frames[0])?.len();
    if frames.len() < cols {
        // underdetermined fits are allowed only for restricted families;
        // the SVD solve below still produces the minimum-norm solution
    }
    let mut m = DMatrix::<f64>::zeros(frames.len(), cols);
    for (r, frame) in frames.iter().enumerate() {
        for (c, v) in quadratic_monomials(frame)?.iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    let b = nalgebra::DVector::from_column_slice(values);
    let svd = m.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-12)
        .map_err(|e| Error::invalid(format!("least squares failed: {e}")))?;
    let resid = (&m * &x - &b).norm() / (frames.len() as f64).sqrt();
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let smin = svd
        .singular_values
        .iter()
        .cloned()
        .filter(|&s| s > 1e-12 * smax)
        .fold(f64::INFINITY, f64::min);
    Ok(QuadraticFit {
        coefficients: x.iter().copied().collect(),
        rms_residual: resid,
        condition: if smin.is_finite() { smax / smin } else { f64::INFINITY },
    })
}

/// Residuals of the determinantal family against cos^{2 m1}(phi) and of its
/// best quadratic fit.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub n: usize,
    pub k: usize,
    pub m1: i64,
    pub max_family_residual: f64,
    pub quadratic_fit_residual: f64,
}

pub fn obstruction_family_check(
    n: usize,
    k: usize,
    m1: i64,
    phi_grid: &[f64],
) -> Result<ObstructionReport> {
    if m1 < 0 {
        return Err(Error::invalid("m1 must be nonnegative"));
    }
    let mut m = vec![0i64; k];
    if k > 0 {
        m[0] = m1;
    }
    let spec = HighestWeightSpec::new(m, n, k)?;
    let mut frames = Vec::with_capacity(phi_grid.len());
    let mut values = Vec::with_capacity(phi_grid.len());
    let mut max_residual = 0.0f64;
    for &phi in phi_grid {
        let frame = obstruction_frame(n, k, phi)?;
        let v = strichartz_vector(&spec, &frame)?;
        let target = phi.cos().powi(2 * m1 as i32);
        max_residual = max_residual.max((v - Complex::new(target, 0.0)).norm());
        frames.push(frame);
        values.push(v.re);
    }
    let fit = fit_quadratic(&frames, &values)?;
    Ok(ObstructionReport {
        n,
        k,
        m1,
        max_family_residual: max_residual,
        quadratic_fit_residual: fit.rms_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvmeas::WeightSpec;
    use rand::Rng;

    #[test]
    fn dim_formula_examples() {
        assert_eq!(dim_formula(3, 1).unwrap(), 6);
        assert_eq!(dim_formula(4, 2).unwrap(), 20);
        assert_eq!(dim_formula(4, 1).unwrap(), 10);
        assert_eq!(dim_formula(5, 2).unwrap(), 50);
        assert_eq!(dim_formula(5, 3).unwrap(), 50);
        assert_eq!(dim_formula(6, 2).unwrap(), 105);
        assert_eq!(dim_formula(6, 3).unwrap(), 175);
        for n in 2..=12usize {
            assert_eq!(dim_formula(n, 0).unwrap(), 1);
        }
        assert!(dim_formula(4, 3).is_err());
    }

    #[test]
    fn binomial_difference_sweep() {
        // the debug assertion inside dim_formula checks the identity; sweep it
        for n in 2..=12usize {
            for k in 0..n.saturating_sub(1) {
                dim_formula(n, k).unwrap();
            }
        }
    }

    #[test]
    fn grassmann_sampling_statistics() {
        let s = sample_grassmann(2, 1, 3, 5).unwrap();
        assert_eq!(s.frames.len(), 3);
        for f in &s.frames {
            assert!(f.is_orthonormal(1e-12));
        }
        // plucker coordinate means vanish by symmetry; mean squared norm is
        // 1/C(n,k) per coordinate
        let s = sample_grassmann(4, 2, 10_000, 6).unwrap();
        let nn = binomial(4, 2);
        let mut mean = vec![0.0; nn];
        let mut mean_sq = vec![0.0; nn];
        for f in &s.frames {
            let p = plucker(f).unwrap();
            for (i, c) in p.coeffs().iter().enumerate() {
                mean[i] += c;
                mean_sq[i] += c * c;
            }
        }
        let count = s.frames.len() as f64;
        for i in 0..nn {
            mean[i] /= count;
            mean_sq[i] /= count;
            let sigma = (1.0 / count).sqrt();
            assert!(mean[i].abs() < 3.0 * sigma, "coordinate {i} mean {}", mean[i]);
            assert!(
                (mean_sq[i] - 1.0 / nn as f64).abs() < 4.0 * sigma,
                "coordinate {i} mean square {}",
                mean_sq[i]
            );
        }
    }

    #[test]
    fn restriction_ranks_match_formula() {
        let r = restriction_rank(3, 1, 500, 7).unwrap();
        assert_eq!(r.rank as u64, r.expected);
        assert_eq!(r.rank, 6);
        assert!(r.gap > 1e3);

        let r = restriction_rank(4, 1, 2000, 8).unwrap();
        assert_eq!(r.rank, 10);

        let r = restriction_rank(4, 2, 200, 9).unwrap();
        assert_eq!(r.rank, 20);
    }

    #[test]
    fn weight_rank_matches_formula() {
        let r = constcoeff_weight_rank(3, 1, 15, 60, 10).unwrap();
        assert_eq!(r.rank as u64, r.expected);
        assert!(r.max_span_residual < 1e-8, "span residual {}", r.max_span_residual);
    }

    #[test]
    fn strichartz_examples() {
        // m = (1), E = span(e1): det(A(1)A(1)^t) = 1
        let spec = HighestWeightSpec::new(vec![1], 4, 1).unwrap();
        let f = Frame::standard(4, &[0]).unwrap();
        let v = strichartz_vector(&spec, &f).unwrap();
        assert!((v - Complex::new(1.0, 0.0)).norm() < 1e-14);

        // m = (1), E = span(e3) in R^3: value 0
        let spec = HighestWeightSpec::new(vec![1], 3, 1).unwrap();
        let f = Frame::standard(3, &[2]).unwrap();
        assert!(strichartz_vector(&spec, &f).unwrap().norm() < 1e-14);
    }

    #[test]
    fn strichartz_basis_independent() {
        let spec = HighestWeightSpec::new(vec![2, 1], 5, 2).unwrap();
        let mut rng = mc::substream(11, 0);
        for _ in 0..20 {
            let f = haar_frame(5, 2, &mut rng);
            let v1 = strichartz_vector(&spec, &f).unwrap();
            // rotate the frame inside its own plane
            let theta: f64 = 1.1;
            let (a, b) = (f.vectors()[0].clone(), f.vectors()[1].clone());
            let r1: Vec<f64> = a
                .iter()
                .zip(&b)
                .map(|(x, y)| theta.cos() * x + theta.sin() * y)
                .collect();
            let r2: Vec<f64> = a
                .iter()
                .zip(&b)
                .map(|(x, y)| -theta.sin() * x + theta.cos() * y)
                .collect();
            let g = Frame::new(5, vec![r1, r2]).unwrap();
            let v2 = strichartz_vector(&spec, &g).unwrap();
            assert!((v1 - v2).norm() < 1e-10, "{v1} vs {v2}");
        }
    }

    #[test]
    fn negative_last_entry_conjugates() {
        // with m = (1,-1) the l = k factor is conjugated, so at n = 2k the
        // value is the conjugate of the m = (1,1) value
        let pos = HighestWeightSpec::new(vec![1, 1], 4, 2).unwrap();
        let neg = HighestWeightSpec::new(vec![1, -1], 4, 2).unwrap();
        let mut rng = mc::substream(31, 0);
        for _ in 0..20 {
            let f = haar_frame(4, 2, &mut rng);
            let a = strichartz_vector(&pos, &f).unwrap();
            let b = strichartz_vector(&neg, &f).unwrap();
            assert!((a.conj() - b).norm() < 1e-12, "{a} vs {b}");
        }
        // negative last entry is rejected below the middle dimension
        assert!(HighestWeightSpec::new(vec![1, -1], 5, 2).is_err());
    }

    #[test]
    fn obstruction_values() {
        // m1 = 1 at phi = pi/3: cos^2 = 1/4
        let r = obstruction_family_check(4, 2, 1, &[std::f64::consts::FRAC_PI_3]).unwrap();
        assert!(r.max_family_residual < 1e-12);
        let spec = HighestWeightSpec::new(vec![1, 0], 4, 2).unwrap();
        let f = obstruction_frame(4, 2, std::f64::consts::FRAC_PI_3).unwrap();
        let v = strichartz_vector(&spec, &f).unwrap();
        assert!((v.re - 0.25).abs() < 1e-14 && v.im.abs() < 1e-14);

        // m1 = 2 at phi = pi/3: cos^4 = 1/16 = 0.0625
        let spec = HighestWeightSpec::new(vec![2, 0], 4, 2).unwrap();
        let v = strichartz_vector(&spec, &f).unwrap();
        assert!((v.re - 0.0625).abs() < 1e-14);
    }

    #[test]
    fn obstruction_quadratic_fit_thresholds() {
        let grid: Vec<f64> = (0..100)
            .map(|i| 2.0 * std::f64::consts::PI * i as f64 / 100.0)
            .collect();
        for (n, k) in [(3usize, 1usize), (4, 2), (5, 2), (6, 3)] {
            for m1 in 0..=3i64 {
                let r = obstruction_family_check(n, k, m1, &grid).unwrap();
                assert!(
                    r.max_family_residual < 1e-10,
                    "family mismatch n={n} k={k} m1={m1}: {}",
                    r.max_family_residual
                );
                if m1 <= 1 {
                    assert!(
                        r.quadratic_fit_residual < 1e-8,
                        "fit should be exact for m1={m1}: {}",
                        r.quadratic_fit_residual
                    );
                } else {
                    assert!(
                        r.quadratic_fit_residual > 0.01,
                        "fit should fail for m1={m1} (n={n},k={k}): {}",
                        r.quadratic_fit_residual
                    );
                }
            }
        }
    }

    #[test]
    fn quadratic_fit_in_and_out_of_model() {
        // in-model: values from a quadratic weight -> tiny residual
        let s = sample_grassmann(4, 2, 300, 13).unwrap();
        let nn = binomial(4, 2);
        let mut q = vec![vec![0.0; nn]; nn];
        let mut rng = mc::substream(14, 0);
        for i in 0..nn {
            for j in i..nn {
                let v: f64 = rng.gen_range(-1.0..1.0);
                q[i][j] = v;
                q[j][i] = v;
            }
        }
        let w = WeightSpec::Quadratic { k: 2, q };
        let values: Vec<f64> = s
            .frames
            .iter()
            .map(|f| crate::curvmeas::weight_eval(&w, f).unwrap())
            .collect();
        let fit = fit_quadratic(&s.frames, &values).unwrap();
        assert!(fit.rms_residual < 1e-10, "{}", fit.rms_residual);

        // out of model: a quartic in the first coordinate
        let values: Vec<f64> = s
            .frames
            .iter()
            .map(|f| plucker(f).unwrap().coeffs()[0].powi(4))
            .collect();
        let fit = fit_quadratic(&s.frames, &values).unwrap();
        assert!(fit.rms_residual > 0.01, "{}", fit.rms_residual);

        // constants are in the model because the plucker norm is 1
        let values = vec![3.5; s.frames.len()];
        let fit = fit_quadratic(&s.frames, &values).unwrap();
        assert!(fit.rms_residual < 1e-10);
    }
}
