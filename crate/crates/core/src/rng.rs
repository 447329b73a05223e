//! Seeded randomness.
//!
//! Every random choice in the crate draws from a ChaCha8 generator
//! (`rand_chacha::ChaCha8Rng`) keyed by `SeedableRng::seed_from_u64(seed)`.
//! Independent components read from separate ChaCha streams selected with
//! `set_stream`, so adding draws to one component never shifts another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// ChaCha stream ids, one per consumer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Restriction = 1,
    InducedSubgraph = 2,
    Process = 3,
    GreedyColoring = 4,
    GreedyIndependent = 5,
    CapTrace = 6,
    MixingSamples = 7,
    CherryExperiment = 8,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
