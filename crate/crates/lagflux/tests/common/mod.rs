//! Shared helpers for the integration tests: seeded generators so every run
//! exercises exactly the same random cases.
//!
//! Each test target compiles its own copy and uses its own subset, so the
//! unused-code lint is off here.
#![allow(dead_code)]

use lagflux::euler::PrimitiveState;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A positive, wide-range state: density and pressure log-uniform over six
/// decades, velocity up to a few times the typical sound speed.
pub fn random_primitive(rng: &mut ChaCha8Rng) -> PrimitiveState {
    PrimitiveState {
        rho: 10f64.powf(rng.gen_range(-3.0..3.0)),
        u: rng.gen_range(-10.0..10.0),
        p: 10f64.powf(rng.gen_range(-3.0..3.0)),
    }
}

/// A moderate-range state (one decade around unity); useful where extreme
/// ratios would make a tolerance meaningless rather than strict.
pub fn random_moderate_primitive(rng: &mut ChaCha8Rng) -> PrimitiveState {
    PrimitiveState {
        rho: 10f64.powf(rng.gen_range(-0.5..0.5)),
        u: rng.gen_range(-2.0..2.0),
        p: 10f64.powf(rng.gen_range(-0.5..0.5)),
    }
}

