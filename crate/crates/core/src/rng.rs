//! Counter-based deterministic random numbers.
//!
//! Every random draw in the crate is a pure function of `(seed, counter)`,
//! so results are reproducible across runs, platforms and thread counts.
//! The mixer is the SplitMix64 finalizer.

/// Counter-based generator: stateless except for an advancing counter.
#[derive(Debug, Clone, Copy)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

/// SplitMix64 finalizer: a bijective mix of a 64-bit word.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl CounterRng {
    /// Generator for a top-level seed.
    pub fn new(seed: u64) -> Self {
        CounterRng { seed, counter: 0 }
    }

    /// Independent stream for a named subtask. Streams derived with
    /// different tags never collide with each other or with the parent.
    pub fn stream(&self, tag: u64) -> Self {
        CounterRng { seed: mix(self.seed ^ mix(tag)), counter: 0 }
    }

    /// Next raw 64-bit word.
    pub fn next_u64(&mut self) -> u64 {
        let v = mix(self.seed.wrapping_add(mix(self.counter)));
        self.counter += 1;
        v
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`. `n` must be positive.
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        // Desk-scale n: modulo bias is negligible and determinism matters more.
        (self.next_u64() % n as u64) as usize
    }

    /// Rademacher sign: ±1 with equal probability.
    pub fn next_sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}
