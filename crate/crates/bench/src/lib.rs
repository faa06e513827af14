//! Seeded inputs shared by the benchmarks under `benches/`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slocc_rank::{CoefficientMatrix, PureState, Scalar};

/// Dense state with integer amplitudes in `-3..=3`, at least one nonzero.
pub fn random_state(seed: u64, dims: &[usize]) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let volume: usize = dims.iter().product();
    let mut amps: Vec<Scalar> = (0..volume).map(|_| Scalar::int(rng.random_range(-3..=3))).collect();
    amps[0] = Scalar::int(1);
    PureState::from_dense(dims.to_vec(), amps).expect("nonzero state")
}

/// `rows x cols` matrix of rank at most `rank`, as a product of two random
/// integer factors.
pub fn low_rank_matrix(seed: u64, rows: usize, cols: usize, rank: usize) -> CoefficientMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..rank).map(|_| rng.random_range(-4..=4)).collect()).collect();
    let b: Vec<Vec<i64>> = (0..rank).map(|_| (0..cols).map(|_| rng.random_range(-4..=4)).collect()).collect();
    let data = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| Scalar::int((0..rank).map(|k| a[r][k] * b[k][c]).sum()))
                .collect()
        })
        .collect();
    CoefficientMatrix::from_rows(data).expect("nonempty matrix")
}
