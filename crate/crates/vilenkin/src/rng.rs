//! Deterministic pseudo-random generator for reproducible experiments.
//!
//! Random atoms and random test functions must be reproducible across
//! platforms and library versions, so instead of depending on an external
//! RNG whose stream may change we pin the full algorithm here.  This is
//! SplitMix64 (Steele, Lea, Flood 2014): a 64-bit counter advanced by the
//! golden-ratio increment, finalized with a variant of the MurmurHash3
//! mixer.  It passes BigCrush and is more than adequate for sampling test
//! profiles; it is *not* a cryptographic generator.

/// SplitMix64 generator with 64 bits of state.
///
/// The same seed always yields the same stream, on every platform.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    /// Creates a generator from a seed.  Every seed is valid.
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform double in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)` via the widening-multiply reduction.
    /// The modulo bias is below 2^-64 for the small bounds used here.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "below() requires a positive bound");
        (((self.next_u64() as u128) * (bound as u128)) >> 64) as usize
    }

    /// Uniform signed integer in `[-magnitude, magnitude]`.
    pub fn signed(&mut self, magnitude: usize) -> i64 {
        self.below(2 * magnitude + 1) as i64 - magnitude as i64
    }

    /// Derives an independent stream seed for a sub-experiment.  Mixing the
    /// label through the output function decorrelates neighboring labels.
    pub fn derive_seed(base: u64, label: u64) -> u64 {
        let mut g = SplitMix64::new(base ^ label.wrapping_mul(0xA076_1D64_78BD_642F));
        g.next_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_stream_is_stable() {
        // Reference values for seed 0 from the published SplitMix64 sample
        // implementation; pins the stream across refactors.
        let mut g = SplitMix64::new(0);
        assert_eq!(g.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(g.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(g.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn doubles_land_in_unit_interval() {
        let mut g = SplitMix64::new(12345);
        for _ in 0..1000 {
            let x = g.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn below_respects_bound_and_hits_all_residues() {
        let mut g = SplitMix64::new(7);
        let mut seen = [false; 5];
        for _ in 0..200 {
            let k = g.below(5);
            assert!(k < 5);
            seen[k] = true;
        }
        assert!(seen.iter().all(|&s| s), "all residues should occur");
    }

    #[test]
    fn signed_covers_symmetric_range() {
        let mut g = SplitMix64::new(99);
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for _ in 0..500 {
            let v = g.signed(8);
            assert!((-8..=8).contains(&v));
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert_eq!(lo, -8);
        assert_eq!(hi, 8);
    }
}
