//! Matrix lift of the square-root scheme onto the algebra generated by the
//! Pauli matrices.
//!
//! Pick two distinct Pauli matrices `sigma_i`, `sigma_k`. The per-step
//! element is
//!
//! ```text
//! dE = sigma_i * (mu0 + |dW|/(2 mu0) - dt/(8 mu0^3)) * phi
//!    + i sigma_k * mu0 * phi
//! ```
//!
//! with the same coefficient and branch factor as the scalar scheme (the
//! coefficient code path is shared, see `fracpower::jump_coefficient`).
//! Because `sigma_n^2 = I` and distinct Pauli matrices anticommute,
//! squaring kills the cross terms and the two `mu0^2` plateaus arrive with
//! opposite signs:
//!
//! ```text
//! (dE)^2 = I * (coeff^2 - mu0^2) * phi^2 = I * (dW + residuals)
//! ```
//!
//! The sign plateau the scalar recovery must subtract never appears. In
//! floating point the cancellation in the off-diagonal entries is between
//! bit-identical products, so those entries are exact zeros, and the two
//! diagonal entries agree.

use crate::error::Error;
use crate::fracpower::{jump_coefficient, MuZero};
use crate::types::{
    cumulative_sum, increments, phi_from_sign, sign_of, BrownianPath, ComplexScalar, TimeGrid,
};

/// Element of the matrix algebra: a dense 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CliffordElement {
    m: [[ComplexScalar; 2]; 2],
}

impl CliffordElement {
    pub fn zero() -> Self {
        let z = ComplexScalar::new(0.0, 0.0);
        Self { m: [[z, z], [z, z]] }
    }

    pub fn identity() -> Self {
        let z = ComplexScalar::new(0.0, 0.0);
        let one = ComplexScalar::new(1.0, 0.0);
        Self { m: [[one, z], [z, one]] }
    }

    pub fn from_rows(m: [[ComplexScalar; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn entry(&self, row: usize, col: usize) -> ComplexScalar {
        self.m[row][col]
    }

    pub fn entries(&self) -> &[[ComplexScalar; 2]; 2] {
        &self.m
    }

    /// Entrywise scaling by a complex factor.
    pub fn scale(&self, z: ComplexScalar) -> Self {
        let mut out = *self;
        for row in &mut out.m {
            for e in row {
                *e *= z;
            }
        }
        out
    }

    /// Largest entrywise absolute difference; the comparison metric for
    /// the 1e-12 matrix checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }
}

impl std::ops::Add for CliffordElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] += rhs.m[r][c];
            }
        }
        out
    }
}

impl std::ops::Sub for CliffordElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] -= rhs.m[r][c];
            }
        }
        out
    }
}

impl std::ops::Mul for CliffordElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] = self.m[r][0] * rhs.m[0][c] + self.m[r][1] * rhs.m[1][c];
            }
        }
        out
    }
}

/// The generator `sigma_n`. Panics unless `n` is 1, 2 or 3; validated
/// index pairs come from [`PauliPair`].
pub fn pauli(n: u8) -> CliffordElement {
    let z = ComplexScalar::new(0.0, 0.0);
    let one = ComplexScalar::new(1.0, 0.0);
    let i = ComplexScalar::new(0.0, 1.0);
    match n {
        1 => CliffordElement::from_rows([[z, one], [one, z]]),
        2 => CliffordElement::from_rows([[z, -i], [i, z]]),
        3 => CliffordElement::from_rows([[one, z], [z, -one]]),
        _ => panic!("pauli index {n} outside 1..=3"),
    }
}

/// Ordered pair of distinct Pauli indices `(i, k)` selecting the two
/// generators of the lift. The conventional choice is `(1, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliPair {
    i_index: u8,
    k_index: u8,
}

impl PauliPair {
    pub fn new(i_index: u8, k_index: u8) -> Result<Self, Error> {
        for n in [i_index, k_index] {
            if !(1..=3).contains(&n) {
                return Err(Error::InvalidPauliIndex(n));
            }
        }
        if i_index == k_index {
            return Err(Error::DegeneratePauliPair(i_index));
        }
        Ok(Self { i_index, k_index })
    }

    pub fn i_index(&self) -> u8 {
        self.i_index
    }

    pub fn k_index(&self) -> u8 {
        self.k_index
    }

    /// All six valid pairs, for invariance sweeps.
    pub fn all() -> [PauliPair; 6] {
        [
            Self { i_index: 1, k_index: 2 },
            Self { i_index: 2, k_index: 1 },
            Self { i_index: 1, k_index: 3 },
            Self { i_index: 3, k_index: 1 },
            Self { i_index: 2, k_index: 3 },
            Self { i_index: 3, k_index: 2 },
        ]
    }
}

impl Default for PauliPair {
    fn default() -> Self {
        Self { i_index: 1, k_index: 2 }
    }
}

/// One step of the matrix lift. Accepts `dt = 0` for limit checks; there
/// the coefficient reduces to `mu0` and the square cancels to the zero
/// matrix at `dW = 0`.
pub fn clifford_jump(dw: f64, mu0: MuZero, dt: f64, pair: PauliPair) -> CliffordElement {
    let phi = phi_from_sign(sign_of(dw));
    let coeff = phi * jump_coefficient(dw.abs(), mu0, dt);
    let pseudo = ComplexScalar::new(0.0, 1.0) * phi * mu0.value();
    pauli(pair.i_index()).scale(coeff) + pauli(pair.k_index()).scale(pseudo)
}

/// Matrix square, named for the protocol step it implements: applied to a
/// jump it collapses to `I * (dW + residuals)` with exact zeros off the
/// diagonal.
pub fn clifford_square(e: &CliffordElement) -> CliffordElement {
    *e * *e
}

/// Matrix-valued path accumulated from per-step jumps on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordPath {
    grid: TimeGrid,
    values: Vec<CliffordElement>,
}

impl CliffordPath {
    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn values(&self) -> &[CliffordElement] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn increments(&self) -> Vec<CliffordElement> {
        increments(&self.values)
    }
}

/// `E_i = sum_{j <= i} dE_j` over the increments of `w`.
pub fn clifford_path(w: &BrownianPath, mu0: MuZero, pair: PauliPair) -> CliffordPath {
    let dt = w.grid().dt();
    let jumps: Vec<CliffordElement> = w
        .increments()
        .iter()
        .map(|&dw| clifford_jump(dw, mu0, dt, pair))
        .collect();
    CliffordPath {
        grid: w.grid(),
        values: cumulative_sum(&jumps),
    }
}
