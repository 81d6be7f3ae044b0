//! Deterministic random sources for exercising stochastic branches.

use rand::RngCore;

/// Every uniform draw is 0.0, so every `rand() < p` gate with `p > 0` passes.
#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysFire;

/// Every uniform draw is just below 1.0, so no `rand() < p` gate with `p < 1` passes.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeverFire;

impl RngCore for AlwaysFire {
    fn next_u32(&mut self) -> u32 {
        0
    }

    fn next_u64(&mut self) -> u64 {
        0
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        dst.fill(0);
    }
}

impl RngCore for NeverFire {
    fn next_u32(&mut self) -> u32 {
        u32::MAX
    }

    fn next_u64(&mut self) -> u64 {
        u64::MAX
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        dst.fill(u8::MAX);
    }
}
