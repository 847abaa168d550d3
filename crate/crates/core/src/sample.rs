//! Deterministic column sampling.
//!
//! Bound estimation on large relations draws a column subsample from each
//! side. The generator is a fixed 64-bit mix so a (relation, seed) pair
//! yields the same draw on every platform and run, independent of any
//! thread scheduling around the call.

use crate::relation::Relation;

/// SplitMix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (`bound > 0`), via unbiased rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below(0) is empty");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let v = self.next_u64();
            if v >= threshold {
                return v % bound;
            }
        }
    }

    /// Uniform f64 in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Mix a base seed with a stream index, so independent draws can be derived
/// from one user-facing seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = SplitMix64::new(seed ^ stream.wrapping_mul(0xA076_1D64_78BD_642F));
    rng.next_u64()
}

/// Draw `k` distinct column indices uniformly without replacement,
/// returned in ascending order. `k` is clamped to the column count.
pub fn sample_indices(count: usize, k: usize, seed: u64) -> Vec<usize> {
    let k = k.min(count);
    let mut indices: Vec<usize> = (0..count).collect();
    let mut rng = SplitMix64::new(seed);
    for i in 0..k {
        let j = i + rng.below((count - i) as u64) as usize;
        indices.swap(i, j);
    }
    let mut chosen = indices[..k].to_vec();
    chosen.sort_unstable();
    chosen
}

/// The subrelation on a seeded draw of `k` columns (without replacement).
pub fn sample_columns(relation: &Relation, k: usize, seed: u64) -> Relation {
    let chosen = sample_indices(relation.y_count(), k, seed);
    relation.select_columns(&chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draw() {
        assert_eq!(sample_indices(100, 10, 7), sample_indices(100, 10, 7));
        assert_ne!(sample_indices(100, 10, 7), sample_indices(100, 10, 8));
    }

    #[test]
    fn draw_is_without_replacement() {
        let drawn = sample_indices(50, 50, 3);
        assert_eq!(drawn, (0..50).collect::<Vec<_>>());
        let partial = sample_indices(50, 20, 3);
        assert_eq!(partial.len(), 20);
        assert!(partial.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn oversized_request_takes_everything() {
        let r = Relation::from_rows(&[vec![1, 0, 1]]).unwrap();
        let s = sample_columns(&r, 10, 42);
        assert_eq!(s.y_count(), 3);
        assert_eq!(s.to_matrix(), r.to_matrix());
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..1000 {
            assert!(rng.below(7) < 7);
        }
    }
}
