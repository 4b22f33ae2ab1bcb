use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Samples per shard. Fixed so the shard decomposition does not depend on the thread count.
const SHARD: usize = 2048;

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Independent stream keyed by `(seed, purpose)` and numbered by `index`.
pub(crate) fn stream(seed: u64, purpose: &str, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a(purpose).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Uniform point on the unit sphere of `R^{2n}`.
pub(crate) fn unit_sphere(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..2 * n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return g.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Radius of a uniform point in the shell `r_in < |x| < r_out` of `R^{2n}`.
pub(crate) fn shell_radius(rng: &mut impl Rng, n: usize, r_in: f64, r_out: f64) -> f64 {
    let d = (2 * n) as f64;
    let ratio = (r_in / r_out).powf(d);
    let u: f64 = rng.random();
    r_out * (ratio + u * (1.0 - ratio)).powf(1.0 / d)
}

/// Running mean and variance (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    pub count: f64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if self.count == 0.0 {
            return other;
        }
        if other.count == 0.0 {
            return self;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + d * other.count / count,
            m2: self.m2 + other.m2 + d * d * self.count * other.count / count,
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.count < 2.0 {
            return 0.0;
        }
        (self.m2 / (self.count - 1.0) / self.count).sqrt()
    }
}

/// Draws `samples` values of `draw` in parallel shards and merges them in shard order.
///
/// `draw` returns `None` to reject a sample (it is redrawn).
pub(crate) fn sharded_moments<F>(seed: u64, purpose: &str, stratum: u64, samples: usize, draw: F) -> Moments
where
    F: Fn(&mut ChaCha8Rng) -> Option<f64> + Sync,
{
    let shards = samples.div_ceil(SHARD).max(1);
    let parts: Vec<Moments> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream(seed, purpose, (stratum << 24) | s as u64);
            let want = SHARD.min(samples - s * SHARD);
            let mut m = Moments::default();
            let mut rejected = 0usize;
            while (m.count as usize) < want {
                match draw(&mut rng) {
                    Some(x) => m.push(x),
                    None => {
                        rejected += 1;
                        assert!(rejected < 1_000_000, "sampler rejects almost every draw");
                    }
                }
            }
            m
        })
        .collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_differ_and_repeat() {
        let a: u64 = stream(1, "x", 0).random();
        let b: u64 = stream(1, "x", 1).random();
        let c: u64 = stream(1, "y", 0).random();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, stream(1, "x", 0).random::<u64>());
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64).sin() * 10.0 + 3.0).collect();
        let mut all = Moments::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Moments::default(), Moments::default());
        xs[..37].iter().for_each(|&x| a.push(x));
        xs[37..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert!((merged.mean - all.mean).abs() < 1e-12);
        assert!((merged.stderr() - all.stderr()).abs() < 1e-12);
    }

    #[test]
    fn sharding_is_deterministic() {
        let f = |rng: &mut ChaCha8Rng| Some(rng.random::<f64>());
        let a = sharded_moments(7, "t", 0, 10_000, f);
        let b = sharded_moments(7, "t", 0, 10_000, f);
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert!((a.mean - 0.5).abs() < 4.0 * a.stderr());
    }

    #[test]
    fn shell_radius_in_range() {
        let mut rng = stream(3, "r", 0);
        for _ in 0..1000 {
            let r = shell_radius(&mut rng, 3, 0.5, 1.0);
            assert!((0.5..=1.0).contains(&r));
        }
    }
}
