//! Deterministic parallel Monte Carlo over many driving paths.
//!
//! Each path is addressed by `(master_seed, path_index)` and generated
//! independently, so the ensemble parallelizes trivially. To keep the
//! output bit-reproducible regardless of thread count, paths are folded in
//! fixed-size chunks of consecutive indices: a chunk accumulates its
//! partial sums sequentially in path order, rayon distributes whole chunks,
//! and the chunk partials are merged in chunk order at the end. The
//! floating-point summation tree is therefore a function of the
//! configuration alone, never of scheduling.
//!
//! The per-path protocol is the squaring check: build the requested
//! schemes on the same driving path, recover the Brownian jumps from each
//! (subtracting the `mu0^2 sgn` plateau where the scheme leaves one), and
//! average everything per step across the ensemble. A faithful scheme puts
//! the mean recovered jumps on top of the mean Brownian jumps.

use rayon::prelude::*;

use crate::clifford::{clifford_path, clifford_square, PauliPair};
use crate::error::Error;
use crate::fracpower::{
    recover_brownian, sqrt_rep_path, Alpha, MuZero, RecoveryScheme, SqrtRepMode,
};
use crate::pathgen::{brownian_path, SeedSpec};
use crate::types::{cumulative_sum, BrownianPath, TimeGrid};

/// Paths per sequential chunk. Fixed: changing it changes the summation
/// tree and breaks bit-reproducibility against previously written runs.
const PATH_CHUNK: u64 = 64;

/// Discretization scheme selector for ensemble runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scheme {
    DirectPower,
    SqrtRep,
    Clifford,
}

impl Scheme {
    /// Stable lowercase name used in summary keys and file names.
    pub fn name(self) -> &'static str {
        match self {
            Scheme::DirectPower => "direct_power",
            Scheme::SqrtRep => "sqrt_rep",
            Scheme::Clifford => "clifford",
        }
    }

    pub fn all() -> [Scheme; 3] {
        [Scheme::DirectPower, Scheme::SqrtRep, Scheme::Clifford]
    }
}

/// Which schemes a run builds; iteration order is fixed so downstream
/// serialization is stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeSet {
    direct_power: bool,
    sqrt_rep: bool,
    clifford: bool,
}

impl SchemeSet {
    pub fn new(schemes: &[Scheme]) -> Result<Self, Error> {
        if schemes.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one scheme must be enabled".into(),
            ));
        }
        let mut set = Self {
            direct_power: false,
            sqrt_rep: false,
            clifford: false,
        };
        for s in schemes {
            match s {
                Scheme::DirectPower => set.direct_power = true,
                Scheme::SqrtRep => set.sqrt_rep = true,
                Scheme::Clifford => set.clifford = true,
            }
        }
        Ok(set)
    }

    pub fn all() -> Self {
        Self {
            direct_power: true,
            sqrt_rep: true,
            clifford: true,
        }
    }

    pub fn contains(self, scheme: Scheme) -> bool {
        match scheme {
            Scheme::DirectPower => self.direct_power,
            Scheme::SqrtRep => self.sqrt_rep,
            Scheme::Clifford => self.clifford,
        }
    }

    /// Enabled schemes in the fixed order direct, sqrt, clifford.
    pub fn iter(self) -> impl Iterator<Item = Scheme> {
        Scheme::all().into_iter().filter(move |&s| self.contains(s))
    }

    pub fn len(self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }
}

/// Everything that determines an ensemble run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleConfig {
    /// Number of Monte Carlo paths (M).
    pub paths: u64,
    pub grid: TimeGrid,
    pub mu0: MuZero,
    pub alpha: Alpha,
    pub master_seed: u64,
    pub schemes: SchemeSet,
}

impl EnsembleConfig {
    /// The protocol defaults: 10000 paths of 256 steps with dt = 2^-8,
    /// mu0 = 30, alpha = 1/2, every scheme enabled.
    pub fn defaults() -> Self {
        Self {
            paths: 10_000,
            grid: TimeGrid::from_dt(0.00390625, 256).expect("static grid is valid"),
            mu0: MuZero::new(30.0).expect("static mu0 is valid"),
            alpha: Alpha::half(),
            master_seed: 42,
            schemes: SchemeSet::all(),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.paths == 0 {
            return Err(Error::InvalidConfig("paths must be at least 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one scheme must be enabled".into(),
            ));
        }
        // total work must stay addressable; a clean error beats an abort
        // deep inside an allocator
        if self
            .paths
            .checked_mul(self.grid.steps() as u64)
            .is_none()
        {
            return Err(Error::InvalidConfig(format!(
                "paths = {} over {} steps overflows the work counter",
                self.paths,
                self.grid.steps()
            )));
        }
        Ok(())
    }
}

/// Per-scheme ensemble output.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSummary {
    pub scheme: Scheme,
    /// Per-step mean of the recovered jumps.
    pub mean_recovered_increments: Vec<f64>,
    /// Running sum of the mean recovered jumps.
    pub mean_recovered_cumsum: Vec<f64>,
    /// `max_i |mean recovered jump_i - mean Brownian jump_i|`.
    pub coincidence_max_abs_err: f64,
    /// Square-root scheme only: mean of the squared jumps *before* the
    /// `mu0^2 sgn` removal, cumulative, so the plateau is visible next to
    /// the corrected series.
    pub mean_raw_square_cumsum: Option<Vec<f64>>,
}

/// Per-step ensemble means of the expansion ingredients (the four panels
/// of the residual story), plus whole-run magnitude summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualStats {
    /// Mean of `sgn(dW_i)` across paths, per step.
    pub mean_sgn: Vec<f64>,
    /// Mean of `dW_i^2 - dt` across paths, per step.
    pub mean_dw_sq_minus_dt: Vec<f64>,
    /// Mean of `dW_i * dt` across paths, per step.
    pub mean_dw_dt: Vec<f64>,
    /// Mean of `dW_i` across paths, per step.
    pub mean_dw: Vec<f64>,
    /// Grand mean of `|dW|`; should sit on sqrt(2 dt / pi).
    pub mean_abs_dw: f64,
    /// Grand mean of `|dW^2 - dt|`.
    pub mean_abs_dw_sq_minus_dt: f64,
    /// Grand mean of `|dW * dt|`.
    pub mean_abs_dw_dt: f64,
}

impl ResidualStats {
    pub fn max_abs_mean_sgn(&self) -> f64 {
        max_abs(&self.mean_sgn)
    }

    pub fn max_abs_mean_dw_sq_minus_dt(&self) -> f64 {
        max_abs(&self.mean_dw_sq_minus_dt)
    }

    pub fn max_abs_mean_dw_dt(&self) -> f64 {
        max_abs(&self.mean_dw_dt)
    }
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Shape of one square-root path: per-step modulus, phase in degrees, and
/// jump modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct PathProfile {
    pub path_index: u64,
    pub modulus: Vec<f64>,
    pub phase_degrees: Vec<f64>,
    pub jump_modulus: Vec<f64>,
}

/// Everything an ensemble run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub config: EnsembleConfig,
    /// Running sum of the per-step mean Brownian increments.
    pub mean_brownian: Vec<f64>,
    /// The per-step mean Brownian increments themselves.
    pub mean_brownian_increments: Vec<f64>,
    /// One summary per enabled scheme, in [`SchemeSet::iter`] order.
    pub schemes: Vec<SchemeSummary>,
    pub residuals: ResidualStats,
    /// Square-root profile of path 0, the designated representative.
    pub single_path_profile: PathProfile,
}

impl EnsembleSummary {
    pub fn scheme(&self, scheme: Scheme) -> Option<&SchemeSummary> {
        self.schemes.iter().find(|s| s.scheme == scheme)
    }
}

/// Runs the ensemble with the seeded Gaussian path source.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleSummary, Error> {
    let seed = cfg.master_seed;
    let grid = cfg.grid;
    run_ensemble_with(cfg, move |idx| brownian_path(SeedSpec::new(seed, idx), grid))
}

/// Runs the ensemble with a caller-supplied path source (used to inject
/// deterministic streams in tests). `source` must be a pure function of
/// the path index and must return paths on `cfg.grid`.
pub fn run_ensemble_with<F>(cfg: &EnsembleConfig, source: F) -> Result<EnsembleSummary, Error>
where
    F: Fn(u64) -> BrownianPath + Sync,
{
    cfg.validate()?;
    let probe = source(0);
    if probe.grid() != cfg.grid {
        return Err(Error::GridMismatch(format!(
            "path source yields {} steps of dt = {}, config wants {} steps of dt = {}",
            probe.grid().steps(),
            probe.grid().dt(),
            cfg.grid.steps(),
            cfg.grid.dt()
        )));
    }

    let steps = cfg.grid.steps();
    let order: Vec<Scheme> = cfg.schemes.iter().collect();
    let total = fold_chunks(
        cfg.paths,
        || Accumulator::new(steps, order.len(), cfg.schemes.contains(Scheme::SqrtRep)),
        |acc, idx| acc.absorb(cfg, &order, &source(idx)),
        Accumulator::merge,
    );

    let m = cfg.paths as f64;
    let mn = m * steps as f64;
    let mean_brownian_increments: Vec<f64> = total.sum_dw.iter().map(|s| s / m).collect();
    let mean_brownian = cumulative_sum(&mean_brownian_increments);

    let schemes = order
        .iter()
        .zip(total.sum_recovered)
        .map(|(&scheme, sums)| {
            let mean_recovered_increments: Vec<f64> = sums.iter().map(|s| s / m).collect();
            let coincidence_max_abs_err = mean_recovered_increments
                .iter()
                .zip(&mean_brownian_increments)
                .fold(0.0f64, |worst, (r, w)| worst.max((r - w).abs()));
            let mean_raw_square_cumsum = if scheme == Scheme::SqrtRep {
                total
                    .sum_raw_square
                    .as_ref()
                    .map(|raw| cumulative_sum(&raw.iter().map(|s| s / m).collect::<Vec<_>>()))
            } else {
                None
            };
            SchemeSummary {
                scheme,
                mean_recovered_cumsum: cumulative_sum(&mean_recovered_increments),
                mean_recovered_increments,
                coincidence_max_abs_err,
                mean_raw_square_cumsum,
            }
        })
        .collect();

    let residuals = ResidualStats {
        mean_sgn: total.sum_sgn.iter().map(|s| s / m).collect(),
        mean_dw_sq_minus_dt: total.sum_dw_sq_minus_dt.iter().map(|s| s / m).collect(),
        mean_dw_dt: total.sum_dw_dt.iter().map(|s| s / m).collect(),
        mean_dw: mean_brownian_increments.clone(),
        mean_abs_dw: total.sum_abs_dw / mn,
        mean_abs_dw_sq_minus_dt: total.sum_abs_dw_sq_minus_dt / mn,
        mean_abs_dw_dt: total.sum_abs_dw_dt / mn,
    };

    let single_path_profile = profile_of(&probe, cfg.mu0, 0);

    Ok(EnsembleSummary {
        config: *cfg,
        mean_brownian,
        mean_brownian_increments,
        schemes,
        residuals,
        single_path_profile,
    })
}

/// Per-step ensemble means of the expansion ingredients only; the cheap
/// run behind the residual panels when no schemes are wanted.
pub fn residual_decomposition_stats(cfg: &EnsembleConfig) -> Result<ResidualStats, Error> {
    cfg.validate()?;
    let steps = cfg.grid.steps();
    let dt = cfg.grid.dt();
    let seed = cfg.master_seed;
    let grid = cfg.grid;

    let total = fold_chunks(
        cfg.paths,
        || ResidualAccumulator::new(steps),
        |acc, idx| {
            let w = brownian_path(SeedSpec::new(seed, idx), grid);
            acc.absorb(dt, &w.increments());
        },
        ResidualAccumulator::merge,
    );

    let m = cfg.paths as f64;
    let mn = m * steps as f64;
    Ok(ResidualStats {
        mean_sgn: total.sum_sgn.iter().map(|s| s / m).collect(),
        mean_dw_sq_minus_dt: total.sum_dw_sq_minus_dt.iter().map(|s| s / m).collect(),
        mean_dw_dt: total.sum_dw_dt.iter().map(|s| s / m).collect(),
        mean_dw: total.sum_dw.iter().map(|s| s / m).collect(),
        mean_abs_dw: total.sum_abs_dw / mn,
        mean_abs_dw_sq_minus_dt: total.sum_abs_dw_sq_minus_dt / mn,
        mean_abs_dw_dt: total.sum_abs_dw_dt / mn,
    })
}

/// Square-root profile of one designated path of the ensemble.
pub fn single_path_profile(cfg: &EnsembleConfig, path_index: u64) -> Result<PathProfile, Error> {
    cfg.validate()?;
    if path_index >= cfg.paths {
        return Err(Error::PathIndexOutOfRange {
            index: path_index,
            paths: cfg.paths,
        });
    }
    let w = brownian_path(SeedSpec::new(cfg.master_seed, path_index), cfg.grid);
    Ok(profile_of(&w, cfg.mu0, path_index))
}

fn profile_of(w: &BrownianPath, mu0: MuZero, path_index: u64) -> PathProfile {
    let (x, _) = sqrt_rep_path(w, mu0, SqrtRepMode::IncrementBased);
    PathProfile {
        path_index,
        modulus: x.moduli(),
        phase_degrees: x.phases_degrees(),
        jump_modulus: x.jump_moduli(),
    }
}

/// Chunked deterministic fold: chunks of consecutive indices run in
/// parallel, each accumulating sequentially, and partials merge in chunk
/// order.
fn fold_chunks<A, M, F, G>(paths: u64, make: M, absorb: F, merge: G) -> A
where
    A: Send,
    M: Fn() -> A + Sync,
    F: Fn(&mut A, u64) + Sync,
    G: Fn(&mut A, A),
{
    let chunks = paths.div_ceil(PATH_CHUNK);
    let partials: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = make();
            let lo = chunk * PATH_CHUNK;
            let hi = (lo + PATH_CHUNK).min(paths);
            for idx in lo..hi {
                absorb(&mut acc, idx);
            }
            acc
        })
        .collect();
    let mut iter = partials.into_iter();
    let mut total = iter.next().expect("at least one chunk since paths >= 1");
    for partial in iter {
        merge(&mut total, partial);
    }
    total
}

struct Accumulator {
    sum_dw: Vec<f64>,
    sum_recovered: Vec<Vec<f64>>,
    sum_raw_square: Option<Vec<f64>>,
    sum_sgn: Vec<f64>,
    sum_dw_sq_minus_dt: Vec<f64>,
    sum_dw_dt: Vec<f64>,
    sum_abs_dw: f64,
    sum_abs_dw_sq_minus_dt: f64,
    sum_abs_dw_dt: f64,
}

impl Accumulator {
    fn new(steps: usize, n_schemes: usize, with_raw: bool) -> Self {
        Self {
            sum_dw: vec![0.0; steps],
            sum_recovered: vec![vec![0.0; steps]; n_schemes],
            sum_raw_square: with_raw.then(|| vec![0.0; steps]),
            sum_sgn: vec![0.0; steps],
            sum_dw_sq_minus_dt: vec![0.0; steps],
            sum_dw_dt: vec![0.0; steps],
            sum_abs_dw: 0.0,
            sum_abs_dw_sq_minus_dt: 0.0,
            sum_abs_dw_dt: 0.0,
        }
    }

    fn absorb(&mut self, cfg: &EnsembleConfig, order: &[Scheme], w: &BrownianPath) {
        debug_assert!(w.grid() == cfg.grid, "path source drifted off the grid");
        let dt = cfg.grid.dt();
        let incs = w.increments();
        for (i, &d) in incs.iter().enumerate() {
            let sgn = crate::types::sign_of(d);
            let dev = d * d - dt;
            let cross = d * dt;
            self.sum_dw[i] += d;
            self.sum_sgn[i] += sgn;
            self.sum_dw_sq_minus_dt[i] += dev;
            self.sum_dw_dt[i] += cross;
            self.sum_abs_dw += d.abs();
            self.sum_abs_dw_sq_minus_dt += dev.abs();
            self.sum_abs_dw_dt += cross.abs();
        }

        for (slot, &scheme) in order.iter().enumerate() {
            match scheme {
                Scheme::DirectPower => {
                    let x = crate::fracpower::direct_power_path(w, cfg.alpha);
                    let rec =
                        recover_brownian(&x, w, cfg.alpha, None, RecoveryScheme::DirectPower)
                            .expect("grids match by construction");
                    for (acc, r) in self.sum_recovered[slot].iter_mut().zip(rec.increments()) {
                        *acc += r;
                    }
                }
                Scheme::SqrtRep => {
                    let (x, _) = sqrt_rep_path(w, cfg.mu0, SqrtRepMode::IncrementBased);
                    if let Some(raw) = self.sum_raw_square.as_mut() {
                        for (acc, dx) in raw.iter_mut().zip(x.increments()) {
                            *acc += (dx * dx).re;
                        }
                    }
                    let rec = recover_brownian(
                        &x,
                        w,
                        cfg.alpha,
                        Some(cfg.mu0),
                        RecoveryScheme::SqrtRep,
                    )
                    .expect("grids match by construction");
                    for (acc, r) in self.sum_recovered[slot].iter_mut().zip(rec.increments()) {
                        *acc += r;
                    }
                }
                Scheme::Clifford => {
                    let path = clifford_path(w, cfg.mu0, PauliPair::default());
                    for (acc, jump) in
                        self.sum_recovered[slot].iter_mut().zip(path.increments())
                    {
                        *acc += clifford_square(&jump).entry(0, 0).re;
                    }
                }
            }
        }
    }

    fn merge(&mut self, other: Self) {
        add_into(&mut self.sum_dw, &other.sum_dw);
        for (mine, theirs) in self.sum_recovered.iter_mut().zip(&other.sum_recovered) {
            add_into(mine, theirs);
        }
        if let (Some(mine), Some(theirs)) =
            (self.sum_raw_square.as_mut(), other.sum_raw_square.as_ref())
        {
            add_into(mine, theirs);
        }
        add_into(&mut self.sum_sgn, &other.sum_sgn);
        add_into(&mut self.sum_dw_sq_minus_dt, &other.sum_dw_sq_minus_dt);
        add_into(&mut self.sum_dw_dt, &other.sum_dw_dt);
        self.sum_abs_dw += other.sum_abs_dw;
        self.sum_abs_dw_sq_minus_dt += other.sum_abs_dw_sq_minus_dt;
        self.sum_abs_dw_dt += other.sum_abs_dw_dt;
    }
}

struct ResidualAccumulator {
    sum_dw: Vec<f64>,
    sum_sgn: Vec<f64>,
    sum_dw_sq_minus_dt: Vec<f64>,
    sum_dw_dt: Vec<f64>,
    sum_abs_dw: f64,
    sum_abs_dw_sq_minus_dt: f64,
    sum_abs_dw_dt: f64,
}

impl ResidualAccumulator {
    fn new(steps: usize) -> Self {
        Self {
            sum_dw: vec![0.0; steps],
            sum_sgn: vec![0.0; steps],
            sum_dw_sq_minus_dt: vec![0.0; steps],
            sum_dw_dt: vec![0.0; steps],
            sum_abs_dw: 0.0,
            sum_abs_dw_sq_minus_dt: 0.0,
            sum_abs_dw_dt: 0.0,
        }
    }

    fn absorb(&mut self, dt: f64, incs: &[f64]) {
        for (i, &d) in incs.iter().enumerate() {
            let dev = d * d - dt;
            let cross = d * dt;
            self.sum_dw[i] += d;
            self.sum_sgn[i] += crate::types::sign_of(d);
            self.sum_dw_sq_minus_dt[i] += dev;
            self.sum_dw_dt[i] += cross;
            self.sum_abs_dw += d.abs();
            self.sum_abs_dw_sq_minus_dt += dev.abs();
            self.sum_abs_dw_dt += cross.abs();
        }
    }

    fn merge(&mut self, other: Self) {
        add_into(&mut self.sum_dw, &other.sum_dw);
        add_into(&mut self.sum_sgn, &other.sum_sgn);
        add_into(&mut self.sum_dw_sq_minus_dt, &other.sum_dw_sq_minus_dt);
        add_into(&mut self.sum_dw_dt, &other.sum_dw_dt);
        self.sum_abs_dw += other.sum_abs_dw;
        self.sum_abs_dw_sq_minus_dt += other.sum_abs_dw_sq_minus_dt;
        self.sum_abs_dw_dt += other.sum_abs_dw_dt;
    }
}

fn add_into(acc: &mut [f64], inc: &[f64]) {
    for (a, b) in acc.iter_mut().zip(inc) {
        *a += b;
    }
}
