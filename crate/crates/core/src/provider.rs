//! Sources of label patterns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::pattern::{BinaryPattern, PATTERN_SIDE};
use crate::qr;

/// Where the bit pattern for a catalog label comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternProvider {
    /// Version 3-L QR symbol rendered at 4 pixels per module.
    Qr,
    /// Independent fair coin per pixel, seeded from `seed` and the label's catalog position.
    SeededRandom { seed: u64 },
}

impl PatternProvider {
    /// Pattern for label number `index` of group number `group`.
    pub fn pattern(&self, group: usize, index: usize, label: &str) -> Result<BinaryPattern> {
        match *self {
            PatternProvider::Qr => qr::render(&qr::encode_label(label)?, qr::DEFAULT_SCALE),
            PatternProvider::SeededRandom { seed } => Ok(random_pattern(
                seed ^ ((group as u64) << 32 | index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
                PATTERN_SIDE,
                PATTERN_SIDE,
            )),
        }
    }
}

/// A width × height pattern with each pixel dark with probability 1/2.
pub fn random_pattern(seed: u64, width: usize, height: usize) -> BinaryPattern {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = (0..width * height).map(|_| rng.random_bool(0.5)).collect();
    BinaryPattern::new(width, height, bits).expect("bit count matches dimensions")
}
