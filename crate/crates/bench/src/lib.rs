//! Seeded inputs shared by the benchmarks.

use gamecond::MatrixGame;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `m x n` game with entries uniform in `[-1, 1]`.
pub fn random_game(m: usize, n: usize, seed: u64) -> MatrixGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let payoff = (0..m * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    MatrixGame::from_row_major(m, n, payoff).expect("finite rectangular matrix")
}
