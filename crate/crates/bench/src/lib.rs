//! Shared fixtures for the benchmarks.

use glq_core::glq::{build_upper, OperatorMatrix};
use glq_core::numeric::braid::random_triple;
use glq_core::numeric::CMat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn upper_matrix(n: usize) -> OperatorMatrix {
    build_upper(n).expect("upper chart").1
}

/// A fixed clock/shift triple for the braid map.
pub fn triple(d: usize) -> (CMat, CMat, CMat) {
    random_triple(d, &mut ChaCha8Rng::seed_from_u64(d as u64)).expect("triple")
}
