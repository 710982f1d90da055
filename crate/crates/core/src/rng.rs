//! Seeded random streams.
//!
//! Stream `i` of master seed `s` is ChaCha8 keyed by `seed_from_u64(s)` with
//! its 64-bit stream id set to `i`. Distinct ids select disjoint keystreams
//! of the same key, so per-trial streams are independent and a trial's draws
//! never depend on how trials are scheduled across workers.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type StreamRng = ChaCha8Rng;

pub const RNG_ALGORITHM: &str = "ChaCha8Rng(seed_from_u64(master)).set_stream(index)";

pub fn seed_stream(master_seed: u64, stream_index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_index);
    rng
}

/// Uniform draw on the open interval (0, 1).
pub fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

/// Runs `trial(i, rng_i)` for `i in 0..trials` on the rayon pool and returns
/// the results in trial order.
pub fn run_trials<T, F>(master_seed: u64, trials: usize, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut StreamRng) -> T + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed_stream(master_seed, i as u64);
            trial(i, &mut rng)
        })
        .collect()
}
