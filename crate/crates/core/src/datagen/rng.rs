use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Stream used for affine and deformation draws.
pub const GEOMETRY_STREAM: u64 = 0;
/// Stream used for salt-noise placement, so noise settings never shift the
/// geometry of a sample.
pub const SALT_STREAM: u64 = 1;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-sample seed from `(master, class, index)`, independent of the order
/// in which samples are generated.
pub fn derive_seed(master: u64, class: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ class) ^ index.rotate_left(32))
}

/// ChaCha8 generator on the given stream.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Closed interval of admissible parameter values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!("range [{lo}, {hi}] is not ordered")));
        }
        Ok(Self { lo, hi })
    }

    pub const fn fixed(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn is_fixed(&self) -> bool {
        self.lo == self.hi
    }

    /// Uniform draw; a degenerate range returns its value without
    /// consuming randomness differently from a proper one.
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        let u: f64 = rng.gen();
        if self.is_fixed() {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * u
        }
    }
}
