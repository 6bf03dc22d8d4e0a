use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Fe, PrimeField};

/// Seeded coordinates are drawn uniformly from `[0, COEFF_BOUND)`.
///
/// The bound sits below every admissible modulus, so one seed produces the same
/// integer configuration under every prime and ranks over two primes compare the
/// same integer matrix.
pub const COEFF_BOUND: u64 = 1 << 30;

/// Derives a sub-stream seed from a root seed and a tuple of labels.
///
/// SplitMix64 finalizer folded over `labels`:
/// `h = mix(root)`, then `h = mix(h ^ (label + 0x9e37_79b9_7f4a_7c15))` per label.
pub fn stream_seed(root: u64, labels: &[u64]) -> u64 {
    let mut h = splitmix(root);
    for &l in labels {
        h = splitmix(h ^ l.wrapping_add(0x9e37_79b9_7f4a_7c15));
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic source of coefficients (ChaCha8, portable across platforms).
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng { seed, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn for_stream(root: u64, labels: &[u64]) -> Self {
        Self::new(stream_seed(root, labels))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_coeff(&mut self) -> u64 {
        self.inner.gen_range(0..COEFF_BOUND)
    }

    /// A nonzero vector of length `len`; an all-zero draw is discarded and redrawn.
    ///
    /// Panics if `len == 0`.
    pub fn random_vector(&mut self, field: &PrimeField, len: usize) -> Vec<Fe> {
        assert!(len >= 1, "random_vector needs len >= 1");
        let support: Vec<usize> = (0..len).collect();
        self.random_vector_on(field, len, &support)
    }

    /// A nonzero vector of length `len` supported on the coordinates in `support`.
    ///
    /// Panics if `support` is empty or out of range.
    pub fn random_vector_on(&mut self, field: &PrimeField, len: usize, support: &[usize]) -> Vec<Fe> {
        assert!(!support.is_empty(), "support must be nonempty");
        assert!(support.iter().all(|&i| i < len), "support index out of range");
        loop {
            let mut v = vec![Fe::ZERO; len];
            for &i in support {
                v[i] = field.elem(self.next_coeff());
            }
            if v.iter().any(|x| !x.is_zero()) {
                return v;
            }
        }
    }
}
