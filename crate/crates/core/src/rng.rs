//! Deterministic random-number plumbing.
//!
//! All Monte Carlo entry points take an explicit `u64` seed and derive
//! per-shard ChaCha12 streams from it. Shards are a fixed partition of the
//! trial count, so results are bit-identical regardless of how many worker
//! threads execute them.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Identifier of the generator algorithm, recorded in run manifests.
pub const RNG_ALGORITHM: &str = "chacha12";

/// Number of trials handled by one shard; fixed so the shard split never
/// depends on the worker count.
pub const SHARD_SIZE: u64 = 4096;

/// RNG for a given (seed, stream) pair.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `trials` into fixed-size shards, returning `(stream, count)`
/// pairs.
pub fn shards(trials: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut remaining = trials;
    let mut stream = 0;
    while remaining > 0 {
        let n = remaining.min(SHARD_SIZE);
        out.push((stream, n));
        remaining -= n;
        stream += 1;
    }
    out
}
