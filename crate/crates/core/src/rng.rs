use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random streams derived from one replication seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stream {
    Placement = 1,
    Orientation = 2,
    Sensing = 3,
    Decisions = 4,
}

pub(crate) fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
