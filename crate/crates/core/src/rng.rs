//! Seeded, splittable random streams and the noise primitives the mechanisms use.
//!
//! Each independent task draws from its own ChaCha stream. The key comes from
//! the master seed and a purpose tag; the 64-bit stream id comes from two task
//! coordinates (typically query node and trial index). Results therefore do
//! not depend on scheduling or thread count.

use rand::distr::{Distribution, OpenClosed01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

pub type TaskRng = ChaCha12Rng;

/// What a stream is used for. Different purposes never share a stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Purpose {
    Split,
    Mechanism,
    Generator,
    Audit,
    Simulation,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Split => 0x5350_4c49,
            Purpose::Mechanism => 0x4d45_4348,
            Purpose::Generator => 0x4745_4e52,
            Purpose::Audit => 0x4155_4449,
            Purpose::Simulation => 0x5349_4d55,
        }
    }
}

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream for task `(a, b)` of the given purpose under `master_seed`.
pub fn task_rng(master_seed: u64, purpose: Purpose, a: u64, b: u64) -> TaskRng {
    let mut state = master_seed ^ purpose.tag().rotate_left(32);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha12Rng::from_seed(seed);
    let mut coords = a.wrapping_mul(0xD6E8_FEB8_6659_FD93) ^ b;
    rng.set_stream(splitmix64(&mut coords));
    rng
}

/// Standard Gumbel variate `-ln(-ln U)`, `U` uniform on (0, 1].
pub fn standard_gumbel<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = OpenClosed01.sample(rng);
    if u == 1.0 {
        // -ln(-ln 1) is +inf; the probability of hitting this is 2^-53
        return f64::MAX.ln();
    }
    -(-u.ln()).ln()
}

/// Zero-mean Laplace variate with the given scale, by inverse CDF.
pub fn laplace<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> f64 {
    let u: f64 = OpenClosed01.sample(rng);
    let centered = u - 0.5;
    let magnitude = -(1.0 - 2.0 * centered.abs()).max(f64::MIN_POSITIVE).ln();
    scale * magnitude.copysign(centered)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, std_dev: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    std_dev * z
}
