//! Seeded workloads shared by the benchmarks.

use queens_core::threshold::random_config;
use queens_core::PartialConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` random partial configurations on the `n x n` board with up to
/// `max_queens` queens each; sizes that fail to sample fall back to empty boards.
pub fn random_boards(n: usize, max_queens: usize, count: usize, seed: u64) -> Vec<PartialConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(0..=max_queens);
            random_config(n, k, &mut rng, 200)
                .ok()
                .flatten()
                .unwrap_or_else(|| PartialConfig::empty(n).expect("n >= 1"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boards_are_reproducible() {
        let a = random_boards(10, 4, 5, 1);
        assert_eq!(a, random_boards(10, 4, 5, 1));
        assert!(a.iter().all(|c| c.n() == 10 && c.len() <= 4));
    }
}
