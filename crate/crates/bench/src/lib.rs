//! Workloads shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subsat_core::{dense_pair, CheckRecord, PairGenerator, Signature};

fn records(pairs: impl IntoIterator<Item = (String, String)>) -> Vec<CheckRecord> {
    pairs
        .into_iter()
        .enumerate()
        .map(|(k, (side, main))| CheckRecord {
            line: k + 1,
            side,
            main,
            expected: None,
        })
        .collect()
}

/// Random pairs over the standard signature, at most five literals a side.
pub fn random_log(seed: u64, count: usize) -> Vec<CheckRecord> {
    let mut g = PairGenerator::new(seed, Signature::standard(), 5, 5);
    records((0..count).map(|_| g.next_pair()))
}

/// Pairs where every side literal matches several main literals.
pub fn dense_log(seed: u64, size: usize, count: usize) -> Vec<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    records((0..count).map(|_| dense_pair(&mut rng, size)))
}
