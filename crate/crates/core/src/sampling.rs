//! Seeded, platform-independent random point sets.
//!
//! Coordinates are drawn from a ChaCha8 stream seeded with a 64-bit value;
//! each coordinate takes the top 53 bits of one `u64` draw, giving a uniform
//! value in `[0, 1)`. The same seed produces the same set on every platform.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point, PointSet};

/// One uniform draw in `[0, 1)` from the top 53 bits of a `u64`.
pub fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0f64 / (1u64 << 53) as f64)
}

/// `n` independent uniform points in `[0, 1)^d`, deterministic in `seed`.
pub fn uniform_point_set(n: usize, d: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| {
            Point::new((0..d).map(|_| unit_f64(&mut rng)).collect()).expect("draws lie in [0, 1)")
        })
        .collect();
    PointSet::new(d, points).expect("d >= 1")
}
