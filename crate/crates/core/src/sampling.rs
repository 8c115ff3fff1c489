//! Seeded random samplers shared by the numeric checks.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x006e_55e1_2013;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point `s·a + t·b` with `(s, t)` in the unit square.
pub fn in_parallelogram(rng: &mut SampleRng, a: Complex64, b: Complex64) -> Complex64 {
    let s: f64 = rng.gen();
    let t: f64 = rng.gen();
    a * s + b * t
}

/// Nonzero rational with numerator and denominator in `1..=bound`, random sign.
pub fn nonzero_rational(rng: &mut SampleRng, bound: i64) -> BigRational {
    let n = rng.gen_range(1..=bound);
    let d = rng.gen_range(1..=bound);
    let sign = if rng.gen::<bool>() { 1 } else { -1 };
    BigRational::new(BigInt::from(sign * n), BigInt::from(d))
}
