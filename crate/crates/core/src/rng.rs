//! Seeded randomness shared by the randomized searches and the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, CMat, C64};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream seed for `(seed, stream)`; splitmix64 finalizer.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard complex Gaussian, `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Complex number with modulus uniform in `[lo, hi]` and uniform phase.
pub fn annulus<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> C64 {
    let r = rng.random_range(lo..=hi);
    let t = rng.random_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, t)
}

/// `I + s G / ||G||` for a Gaussian `G`; condition number at most `(1+s)/(1-s)` for `s < 1`.
pub fn well_conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize, s: f64) -> CMat {
    let g = gaussian_matrix(rng, n, n);
    let norm = crate::linalg::op_norm(&g).max(f64::MIN_POSITIVE);
    CMat::identity(n, n) + g.scale(s / norm)
}
