//! Seeded generation of Gaussian increments and Brownian paths.
//!
//! Reproducibility contract: every path is a pure function of
//! `(master_seed, path_index)`. The generator is ChaCha8 keyed by the
//! master seed, with the 64-bit stream counter set to the path index. That
//! gives 2^64 non-overlapping streams per master seed, so paths can be
//! produced independently, in any order, and on any number of threads
//! without coupling. Normal draws go through `rand_distr`'s ziggurat
//! sampler (`StandardNormal`); the sampling method is part of the
//! determinism contract and is pinned per release by the lockfile.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::types::{BrownianPath, TimeGrid};

/// Addresses one path of a reproducible ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub path_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, path_index: u64) -> Self {
        Self {
            master_seed,
            path_index,
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.path_index);
        rng
    }
}

/// `grid.steps()` i.i.d. draws from `N(0, dt)`: unit normals scaled by
/// `sqrt(dt)`.
pub fn gaussian_increments(seed: SeedSpec, grid: TimeGrid) -> Vec<f64> {
    let sd = grid.dt().sqrt();
    let mut rng = seed.rng();
    (0..grid.steps())
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            z * sd
        })
        .collect()
}

/// Brownian path on `grid`: running sum of [`gaussian_increments`],
/// starting from zero.
pub fn brownian_path(seed: SeedSpec, grid: TimeGrid) -> BrownianPath {
    let incs = gaussian_increments(seed, grid);
    BrownianPath::from_increments(grid, &incs)
        .expect("increment count matches the grid by construction")
}
