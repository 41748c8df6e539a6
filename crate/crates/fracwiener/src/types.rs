//! Shared domain types: the time grid, real and complex discretized paths,
//! and the sign / branch-factor sequences the square-root scheme runs on.
//!
//! Paths store the state *after* each increment and start implicitly at
//! zero, so `values[0]` is already one jump in. Under that convention
//! [`increments`] and [`cumulative_sum`] invert each other: the first
//! increment of a path is its first value.

use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::error::Error;

/// Complex scalar for path values. Plain field arithmetic, so the
/// well-trodden `num_complex` type is used directly rather than wrapped.
pub type ComplexScalar = Complex64;

/// Uniform partition of `[0, t_max]` into `steps` increments of width `dt`.
///
/// Both constructors keep `dt * steps == t_max` to within rounding of the
/// single division or multiplication that relates them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    steps: usize,
    dt: f64,
}

impl TimeGrid {
    /// Grid over `[0, t_max]` with `steps` uniform increments.
    pub fn new(t_max: f64, steps: usize) -> Result<Self, Error> {
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "t_max = {t_max} must be finite and positive"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidGrid("steps must be at least 1".into()));
        }
        Ok(Self {
            t_max,
            steps,
            dt: t_max / steps as f64,
        })
    }

    /// Grid with prescribed increment width; `t_max` becomes `dt * steps`.
    pub fn from_dt(dt: f64, steps: usize) -> Result<Self, Error> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "dt = {dt} must be finite and positive"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidGrid("steps must be at least 1".into()));
        }
        let t_max = dt * steps as f64;
        if !t_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "dt = {dt} over {steps} steps overflows the horizon"
            )));
        }
        Ok(Self { t_max, steps, dt })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Time reached after increment `i`; the last increment lands on `t_max`.
    pub fn time_at(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.dt
    }
}

/// Real-valued discretized path on a [`TimeGrid`], one value per step.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianPath {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl BrownianPath {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self, Error> {
        if values.len() != grid.steps() {
            return Err(Error::LengthMismatch {
                got: values.len(),
                want: grid.steps(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Accumulates per-step increments into a path starting from zero.
    pub fn from_increments(grid: TimeGrid, incs: &[f64]) -> Result<Self, Error> {
        if incs.len() != grid.steps() {
            return Err(Error::LengthMismatch {
                got: incs.len(),
                want: grid.steps(),
            });
        }
        Ok(Self {
            grid,
            values: cumulative_sum(incs),
        })
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Per-step jumps, the first being the first value itself.
    pub fn increments(&self) -> Vec<f64> {
        increments(&self.values)
    }
}

/// Complex-valued discretized path on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPath {
    grid: TimeGrid,
    values: Vec<ComplexScalar>,
}

impl ComplexPath {
    pub fn new(grid: TimeGrid, values: Vec<ComplexScalar>) -> Result<Self, Error> {
        if values.len() != grid.steps() {
            return Err(Error::LengthMismatch {
                got: values.len(),
                want: grid.steps(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_increments(grid: TimeGrid, incs: &[ComplexScalar]) -> Result<Self, Error> {
        if incs.len() != grid.steps() {
            return Err(Error::LengthMismatch {
                got: incs.len(),
                want: grid.steps(),
            });
        }
        Ok(Self {
            grid,
            values: cumulative_sum(incs),
        })
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn values(&self) -> &[ComplexScalar] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn increments(&self) -> Vec<ComplexScalar> {
        increments(&self.values)
    }

    /// `|X_i|` per step.
    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }

    /// `arg(X_i)` per step, in degrees.
    pub fn phases_degrees(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.arg().to_degrees()).collect()
    }

    /// `|X_i - X_{i-1}|` per step.
    pub fn jump_moduli(&self) -> Vec<f64> {
        self.increments().iter().map(|z| z.norm()).collect()
    }
}

/// Hard signs, each entry exactly `+1.0` or `-1.0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignSequence {
    values: Vec<f64>,
}

impl SignSequence {
    pub fn new(values: Vec<f64>) -> Result<Self, Error> {
        for (index, &value) in values.iter().enumerate() {
            if value != 1.0 && value != -1.0 {
                return Err(Error::InvalidSign { index, value });
            }
        }
        Ok(Self { values })
    }

    /// Signs of the path's increments.
    pub fn from_increment_signs(path: &BrownianPath) -> Self {
        Self {
            values: path.increments().iter().map(|&d| sign_of(d)).collect(),
        }
    }

    /// Signs of the path's values themselves (the level-based variant).
    pub fn from_level_signs(path: &BrownianPath) -> Self {
        Self {
            values: path.values().iter().map(|&w| sign_of(w)).collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Per-step branch factors: entry `k` is `1` or `i` and squares back to the
/// sign it was built from, exactly, since both values and their squares are
/// representable without rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSequence {
    values: Vec<ComplexScalar>,
}

impl PhiSequence {
    pub fn from_signs(signs: &SignSequence) -> Self {
        Self {
            values: signs.values().iter().map(|&s| phi_from_sign(s)).collect(),
        }
    }

    pub fn values(&self) -> &[ComplexScalar] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Squares each entry back into the sign it encodes.
    pub fn signs(&self) -> SignSequence {
        SignSequence {
            values: self.values.iter().map(|p| (p * p).re).collect(),
        }
    }
}

/// Sign of `x` with the zero convention pinned to `+1`.
///
/// The increments this sees are continuous random variables, so an exact
/// zero has probability zero; fixing the convention anyway keeps the branch
/// factor well defined on injected test data (a zero-noise stream maps to
/// all-ones signs, not NaNs).
///
/// Panics on non-finite input: a NaN sign would silently poison every
/// downstream jump.
pub fn sign_of(x: f64) -> f64 {
    assert!(x.is_finite(), "sign_of needs a finite value, got {x}");
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Branch factor for one step: `(1 - i)/2 * s + (1 + i)/2`, i.e. `1` when
/// `s = +1` and `i` when `s = -1`. Squaring returns `s`.
///
/// Panics unless `s` is exactly `+1.0` or `-1.0`.
pub fn phi_from_sign(s: f64) -> ComplexScalar {
    assert!(
        s == 1.0 || s == -1.0,
        "branch factor needs a hard sign, got {s}"
    );
    if s > 0.0 {
        ComplexScalar::new(1.0, 0.0)
    } else {
        ComplexScalar::new(0.0, 1.0)
    }
}

/// First differences with the leading value passed through: `out[0] =
/// values[0]`, matching the implicit zero start of every path here.
///
/// Panics on an empty slice; an empty path has no increments.
pub fn increments<T>(values: &[T]) -> Vec<T>
where
    T: Copy + Sub<Output = T>,
{
    assert!(!values.is_empty(), "increments of an empty path");
    let mut out = Vec::with_capacity(values.len());
    out.push(values[0]);
    for i in 1..values.len() {
        out.push(values[i] - values[i - 1]);
    }
    out
}

/// Running sums; inverse of [`increments`] up to floating-point roundoff.
pub fn cumulative_sum<T>(incs: &[T]) -> Vec<T>
where
    T: Copy + Add<Output = T>,
{
    let mut out = Vec::with_capacity(incs.len());
    let mut iter = incs.iter();
    if let Some(&first) = iter.next() {
        let mut acc = first;
        out.push(acc);
        for &inc in iter {
            acc = acc + inc;
            out.push(acc);
        }
    }
    out
}
