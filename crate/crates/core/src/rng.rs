//! Seeded random streams.
//!
//! Every consumer of randomness asks for its own ChaCha stream keyed by
//! `(seed, stream)`. ChaCha is counter-based, so the draws seen by one block
//! of a graph never depend on how many draws another block made first.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Independent generator for the given `(seed, stream)` pair.
pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream ids used by the graph generator.
pub(crate) mod ids {
    pub const OUTLIER_W: u64 = 1;
    pub const OUTLIER_Z: u64 = 2;
    pub const OUTLIER_LAW: u64 = 3;
    pub const PERMUTATION: u64 = 4;
    /// Inlier block `(a, b)` with `a <= b` uses `INLIER_BASE + a * r + b`.
    pub const INLIER_BASE: u64 = 1 << 32;
    /// k-means replicate `k` uses `KMEANS_BASE + k`.
    pub const KMEANS_BASE: u64 = 1 << 48;
}

#[cfg(test)]
mod tests {
    use rand::Rng;

    use super::*;

    #[test]
    fn streams_are_independent_of_each_other() {
        let a: Vec<u64> = stream(7, 1).random_iter().take(4).collect();
        let b: Vec<u64> = stream(7, 2).random_iter().take(4).collect();
        let a2: Vec<u64> = stream(7, 1).random_iter().take(4).collect();
        assert_ne!(a, b);
        assert_eq!(a, a2);
    }
}
