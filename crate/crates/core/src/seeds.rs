//! Seed derivation.
//!
//! Every random stream is a ChaCha8 generator keyed by a 64-bit seed and
//! separated by the ChaCha stream id:
//!
//! | purpose                  | key             | stream |
//! |--------------------------|-----------------|--------|
//! | `gnp` host sampling      | `seed`          | 0      |
//! | extractor trial `i`      | `seed ^ i`      | 1      |
//! | partial Steiner shuffle  | `seed`          | 2      |
//!
//! Trial streams depend only on `(seed, i)`, so trials can run on any number
//! of workers and a run with `k` trials is a prefix of a run with `k + 1`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const HOST_STREAM: u64 = 0;
const TRIAL_STREAM: u64 = 1;
const STEINER_STREAM: u64 = 2;

fn keyed(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn host_rng(seed: u64) -> ChaCha8Rng {
    keyed(seed, HOST_STREAM)
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    keyed(seed ^ trial, TRIAL_STREAM)
}

pub fn steiner_rng(seed: u64) -> ChaCha8Rng {
    keyed(seed, STEINER_STREAM)
}
