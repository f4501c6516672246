//! Seed derivation.
//!
//! Every random draw in the crate comes from a ChaCha stream whose seed is a
//! hash of a master seed and a path of integers (member index, sequence id,
//! epoch, ...). Two call sites that derive the same path see the same stream,
//! so work can be reordered or parallelized without changing results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash a master seed together with a path of stream identifiers.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derive_rng(master: u64, path: &[u64]) -> Rng {
    rng_from_seed(derive_seed(master, path))
}

/// Stream tags used as the first element of derivation paths.
pub(crate) mod stream {
    pub const AUGMENT: u64 = 0xA0;
    pub const MEMBER: u64 = 0xA1;
    pub const INIT: u64 = 0xA2;
    pub const SHUFFLE: u64 = 0xA3;
    pub const DROPOUT: u64 = 0xA4;
    pub const GENERALIST: u64 = 0xA5;
    pub const BOOTSTRAP: u64 = 0xA6;
    pub const RUN: u64 = 0xA7;
    pub const SYNTH: u64 = 0xA8;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    #[test]
    fn derivation_is_stable_and_path_sensitive() {
        assert_eq!(derive_seed(7, &[1, 2]), derive_seed(7, &[1, 2]));
        assert_ne!(derive_seed(7, &[1, 2]), derive_seed(7, &[2, 1]));
        assert_ne!(derive_seed(7, &[1]), derive_seed(8, &[1]));
        let a: f64 = derive_rng(3, &[4]).random();
        let b: f64 = derive_rng(3, &[4]).random();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
