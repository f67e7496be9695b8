//! Seedable additive noise: Gaussian, single impulse, and their sum.
//!
//! Every generator is a ChaCha8 stream seeded from a 64-bit seed, so a
//! `(NoiseSpec, n)` pair always yields the same vector on every platform.
//! The Gaussian part reads stream 0 and the impulse part stream 1 of the same
//! key, which keeps the two components of mixed noise independent.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::math;

const GAUSSIAN_STREAM: u64 = 0;
const IMPULSE_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    /// i.i.d. `N(0, σ²)`.
    Gaussian { sigma: f64 },
    /// With probability 1/2 a uniform draw on `[-a, a]`, otherwise 0.
    Impulse { amplitude: f64 },
    /// Independent sum of the two.
    Mixed { sigma: f64, amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    kind: NoiseKind,
    seed: u64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(alloc::format!(
            "{name} must be positive, got {v}"
        )))
    }
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, seed: u64) -> Result<Self> {
        match kind {
            NoiseKind::Gaussian { sigma } => positive("sigma", sigma)?,
            NoiseKind::Impulse { amplitude } => positive("impulse amplitude", amplitude)?,
            NoiseKind::Mixed { sigma, amplitude } => {
                positive("sigma", sigma)?;
                positive("impulse amplitude", amplitude)?;
            }
        }
        Ok(Self { kind, seed })
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// A sub-Gaussian variance factor `ν`: `σ²` for Gaussian noise, `a²` for
    /// the impulse variable (bounded in `[-a, a]`), and their sum for mixed
    /// noise.
    pub fn variance_factor(&self) -> f64 {
        match self.kind {
            NoiseKind::Gaussian { sigma } => sigma * sigma,
            NoiseKind::Impulse { amplitude } => amplitude * amplitude,
            NoiseKind::Mixed { sigma, amplitude } => sigma * sigma + amplitude * amplitude,
        }
    }

    /// `√(2ν log n)`, the bound on `E max_j |ε_j|`.
    pub fn sup_bound(&self, n: usize) -> f64 {
        math::sqrt(2.0 * self.variance_factor() * math::ln(n as f64))
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn add_gaussian(out: &mut [f64], sigma: f64, seed: u64) {
    let mut rng = stream(seed, GAUSSIAN_STREAM);
    for e in out.iter_mut() {
        let z: f64 = rng.sample(StandardNormal);
        *e += sigma * z;
    }
}

fn add_impulse(out: &mut [f64], amplitude: f64, seed: u64) {
    let mut rng = stream(seed, IMPULSE_STREAM);
    for e in out.iter_mut() {
        let hit = rng.random::<f64>() < 0.5;
        let u = 2.0 * rng.random::<f64>() - 1.0;
        if hit {
            *e += amplitude * u;
        }
    }
}

/// `n` noise values drawn according to `spec`.
pub fn sample_noise(spec: &NoiseSpec, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::param("noise length must be at least 1"));
    }
    let mut out = alloc::vec![0.0; n];
    match spec.kind {
        NoiseKind::Gaussian { sigma } => add_gaussian(&mut out, sigma, spec.seed),
        NoiseKind::Impulse { amplitude } => add_impulse(&mut out, amplitude, spec.seed),
        NoiseKind::Mixed { sigma, amplitude } => {
            add_gaussian(&mut out, sigma, spec.seed);
            add_impulse(&mut out, amplitude, spec.seed);
        }
    }
    Ok(out)
}

/// SplitMix64 of `master ⊕ index`; gives each trial its own key.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    /// Monte-Carlo mean of `max_j |ε_j|`.
    pub mean_sup: f64,
    /// Sample standard deviation of `max_j |ε_j|`.
    pub std_sup: f64,
    /// `√(2ν log n)`.
    pub bound: f64,
    pub trials: usize,
}

/// Estimates `E ‖ε‖∞` over `trials` independent draws of length `n`.
pub fn sup_noise_envelope(spec: &NoiseSpec, n: usize, trials: usize) -> Result<Envelope> {
    if trials == 0 {
        return Err(Error::param("need at least one trial"));
    }
    let sups: Vec<f64> = (0..trials as u64)
        .map(|t| {
            let eps = sample_noise(&spec.with_seed(derive_seed(spec.seed, t)), n)?;
            Ok(eps.iter().fold(0.0, |m: f64, e| m.max(math::abs(*e))))
        })
        .collect::<Result<_>>()?;
    let mean = sups.iter().sum::<f64>() / trials as f64;
    let var = if trials > 1 {
        sups.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    Ok(Envelope {
        mean_sup: mean,
        std_sup: math::sqrt(var),
        bound: spec.sup_bound(n),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let spec = NoiseSpec::new(
            NoiseKind::Mixed {
                sigma: 0.1,
                amplitude: 0.3,
            },
            42,
        )
        .unwrap();
        assert_eq!(
            sample_noise(&spec, 500).unwrap(),
            sample_noise(&spec, 500).unwrap()
        );
        let other = spec.with_seed(43);
        assert_ne!(
            sample_noise(&spec, 500).unwrap(),
            sample_noise(&other, 500).unwrap()
        );
    }

    #[test]
    fn prefix_stable_in_length() {
        let spec = NoiseSpec::new(NoiseKind::Gaussian { sigma: 1.0 }, 9).unwrap();
        let long = sample_noise(&spec, 100).unwrap();
        let short = sample_noise(&spec, 10).unwrap();
        assert_eq!(&long[..10], &short[..]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(NoiseSpec::new(NoiseKind::Gaussian { sigma: 0.0 }, 1).is_err());
        assert!(NoiseSpec::new(NoiseKind::Impulse { amplitude: -1.0 }, 1).is_err());
        assert!(NoiseSpec::new(
            NoiseKind::Mixed {
                sigma: 0.1,
                amplitude: f64::NAN
            },
            1
        )
        .is_err());
        let spec = NoiseSpec::new(NoiseKind::Gaussian { sigma: 1.0 }, 1).unwrap();
        assert!(sample_noise(&spec, 0).is_err());
        assert!(sup_noise_envelope(&spec, 10, 0).is_err());
    }

    #[test]
    fn impulse_is_bounded_and_half_zero() {
        let a = 2.0;
        let n = 100_000;
        let spec = NoiseSpec::new(NoiseKind::Impulse { amplitude: a }, 5).unwrap();
        let eps = sample_noise(&spec, n).unwrap();
        assert!(eps.iter().all(|e| e.abs() <= a));
        let zeros = eps.iter().filter(|e| **e == 0.0).count() as f64;
        // binomial(n, 1/2): 3σ = 3 √n / 2
        assert!((zeros - n as f64 / 2.0).abs() <= 1.5 * (n as f64).sqrt());
    }

    #[test]
    fn gaussian_variance_in_chi_square_interval() {
        let spec = NoiseSpec::new(NoiseKind::Gaussian { sigma: 0.15 }, 2024).unwrap();
        let eps = sample_noise(&spec, 100_000).unwrap();
        let mean = eps.iter().sum::<f64>() / eps.len() as f64;
        let var = eps.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (eps.len() - 1) as f64;
        assert!((0.0214..=0.0236).contains(&var), "{var}");
    }

    #[test]
    fn single_sample_envelope_matches_half_normal_mean() {
        let sigma = 0.15;
        let spec = NoiseSpec::new(NoiseKind::Gaussian { sigma }, 77).unwrap();
        let trials = 20_000;
        let env = sup_noise_envelope(&spec, 1, trials).unwrap();
        let expected = sigma * (2.0 / core::f64::consts::PI).sqrt();
        // standard error of |N(0, σ²)| is σ √(1 - 2/π) / √trials
        let se = sigma * (1.0 - 2.0 / core::f64::consts::PI).sqrt() / (trials as f64).sqrt();
        assert!((env.mean_sup - expected).abs() < 4.0 * se);
    }

    #[test]
    fn gaussian_envelope_under_bound() {
        let spec = NoiseSpec::new(NoiseKind::Gaussian { sigma: 0.15 }, 3).unwrap();
        let env = sup_noise_envelope(&spec, 300, 200).unwrap();
        assert!((env.bound - 0.506626).abs() < 1e-6);
        assert!(env.mean_sup <= env.bound);
    }
}
