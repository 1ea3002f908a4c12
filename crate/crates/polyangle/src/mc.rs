//! Monte Carlo plumbing: seeded substreams, Welford accumulation, and a
//! chunked parallel driver whose results do not depend on the thread count.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Deterministic substream: the same (seed, index) pair always yields the
/// same generator, independent of which thread consumes it.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Running mean and variance (Welford), mergeable across chunks.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanVar {
    count: u64,
    mean: f64,
    m2: f64,
}

impl MeanVar {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &MeanVar) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / total as f64;
        self.m2 += other.m2 + d * d * (self.count as f64) * (other.count as f64) / total as f64;
        self.count = total;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn sigma_mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

const CHUNK: u64 = 16_384;

/// Evaluate `f` on `samples` draws in parallel chunks. Chunk `i` uses
/// substream (seed, i); partial accumulators are merged in chunk order, so
/// the result is identical for any number of worker threads.
pub fn parallel_mc<F>(samples: u64, seed: u64, f: F) -> MeanVar
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let partials: Vec<MeanVar> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, c);
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(samples);
            let mut acc = MeanVar::default();
            for _ in lo..hi {
                acc.push(f(&mut rng));
            }
            acc
        })
        .collect();
    let mut total = MeanVar::default();
    for p in &partials {
        total.merge(p);
    }
    total
}

/// Standard Gaussian vector.
pub fn gaussian_vector(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform point on the unit sphere of R^n.
pub fn uniform_sphere(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let mut v = gaussian_vector(n, rng);
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for x in &mut v {
                *x /= norm;
            }
            return v;
        }
    }
}

/// Uniform point in the unit ball of R^n.
pub fn uniform_ball(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let mut v = uniform_sphere(n, rng);
    let r: f64 = rng.gen::<f64>().powf(1.0 / n as f64);
    for x in &mut v {
        *x *= r;
    }
    v
}

/// Haar-random rotation matrix (QR of a Gaussian matrix with the sign of the
/// R diagonal absorbed, determinant forced to +1).
pub fn random_rotation(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    loop {
        let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        let mut ok = true;
        for i in 0..n {
            if r[(i, i)].abs() < 1e-12 {
                ok = false;
                break;
            }
            if r[(i, i)] < 0.0 {
                for j in 0..n {
                    q[(j, i)] = -q[(j, i)];
                }
            }
        }
        if !ok {
            continue;
        }
        if q.determinant() < 0.0 {
            for j in 0..n {
                q[(j, 0)] = -q[(j, 0)];
            }
        }
        return q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.13).collect();
        let mut all = MeanVar::default();
        for &x in &xs {
            all.push(x);
        }
        let mut a = MeanVar::default();
        let mut b = MeanVar::default();
        for &x in &xs[..321] {
            a.push(x);
        }
        for &x in &xs[321..] {
            b.push(x);
        }
        a.merge(&b);
        assert!((a.mean() - all.mean()).abs() < 1e-12);
        assert!((a.variance() - all.variance()).abs() < 1e-9);
    }

    #[test]
    fn substreams_are_deterministic() {
        let a: Vec<f64> = {
            let mut r = substream(42, 3);
            (0..5).map(|_| r.gen::<f64>()).collect()
        };
        let b: Vec<f64> = {
            let mut r = substream(42, 3);
            (0..5).map(|_| r.gen::<f64>()).collect()
        };
        assert_eq!(a, b);
        let c: Vec<f64> = {
            let mut r = substream(42, 4);
            (0..5).map(|_| r.gen::<f64>()).collect()
        };
        assert_ne!(a, c);
    }

    #[test]
    fn parallel_mc_thread_count_independent() {
        let f = |rng: &mut ChaCha8Rng| rng.gen::<f64>();
        let r1 = parallel_mc(100_000, 9, f);
        let r2 = parallel_mc(100_000, 9, f);
        assert_eq!(r1.mean(), r2.mean());
        assert!((r1.mean() - 0.5).abs() < 0.01);
    }

    #[test]
    fn rotations_are_orthogonal() {
        let mut rng = substream(5, 0);
        for n in 2..=5 {
            let q = random_rotation(n, &mut rng);
            let qt = q.transpose();
            let id = &q * &qt;
            for i in 0..n {
                for j in 0..n {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((id[(i, j)] - target).abs() < 1e-10);
                }
            }
            assert!((q.determinant() - 1.0).abs() < 1e-10);
        }
    }
}
