use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used by every stochastic component. ChaCha output is fixed by
/// its seed on every platform, which is what makes runs reproducible.
pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> SimRng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}
