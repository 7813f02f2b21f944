//! Counter-based randomness.
//!
//! Every random draw is a function of `(seed, domain, index, position)`:
//! the user seed and a domain tag form the ChaCha key, the index (message,
//! trial, ...) selects the stream, and draws within a stream are sequential.
//! Nothing depends on scheduling or on how many draws other streams made.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Separates uses of one user seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Codebook = 1,
    ErrorTrial = 2,
    Derandomize = 3,
    Sweep = 4,
}

pub fn stream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// A seed derived from `seed` and a tuple of parameters, one stream hop per part.
pub fn derive_seed(seed: u64, domain: Domain, parts: &[u64]) -> u64 {
    use rand::RngCore;
    parts.iter().fold(seed, |acc, &part| stream(acc, domain, part).next_u64())
}

/// Inverse-CDF draw from a probability vector.
pub fn sample_index<R: Rng>(rng: &mut R, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_positive = i;
            if u < acc {
                return i;
            }
        }
    }
    last_positive
}
