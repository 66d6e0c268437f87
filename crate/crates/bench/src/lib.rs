//! Fixed inputs shared by the benchmarks.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unidisc::numerics::Mat4;
use unidisc::{sampling, PhaseSet};

/// `n` pairs of random magic-diagonal gates from a fixed seed.
pub fn magic_diagonal_pairs(n: usize) -> Vec<(Mat4, Mat4)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe7c);
    (0..n)
        .map(|_| {
            (
                sampling::random_magic_diagonal(&mut rng),
                sampling::random_magic_diagonal(&mut rng),
            )
        })
        .collect()
}

/// `n` random general two-qubit gates `L1 · U_d · L2`.
pub fn dressed_gates(n: usize) -> Vec<Mat4> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..n)
        .map(|_| {
            let (_, ud) = sampling::random_ud(&mut rng);
            sampling::random_local(&mut rng) * ud * sampling::random_local(&mut rng)
        })
        .collect()
}

pub fn phase_sets(n: usize) -> Vec<PhaseSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xface);
    (0..n).map(|_| sampling::random_phase_set(&mut rng)).collect()
}
