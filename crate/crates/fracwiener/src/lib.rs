//! Fractional powers of a Wiener process, built step by step on a uniform
//! time grid and checked by squaring the construction back into the driving
//! Brownian motion.
//!
//! The process of interest solves `dX = (dW)^alpha` in the Euler sense: each
//! Gaussian increment is raised to the power `alpha` on the principal branch
//! and the results are accumulated. For `alpha = 1/2` there is also a
//! closed-form representation whose per-step jump is
//!
//! ```text
//! dX_i = (mu0 + |dW_i| / (2 mu0) - dt / (8 mu0^3)) * phi_i
//! ```
//!
//! with `phi_i` equal to `1` where the increment is nonnegative and `i`
//! where it is negative, so that `phi_i^2 = sgn(dW_i)`. Squaring that jump
//! gives `mu0^2 sgn(dW_i) + dW_i` plus residuals that vanish with `dt` and
//! `1/mu0`; dropping the sign term recovers the Brownian increment. The same
//! coefficient also drives a matrix-valued variant built on Pauli matrices
//! in which the sign term cancels algebraically instead of being subtracted.
//!
//! Module map:
//!
//! - [`types`]: time grid, real and complex paths, sign and branch-factor
//!   sequences shared by everything below.
//! - [`pathgen`]: seeded Gaussian increments and Brownian paths with
//!   reproducible per-path streams.
//! - [`fracpower`]: the direct-power and square-root discretizations, the
//!   exact expansion of a squared jump, and Brownian recovery.
//! - [`clifford`]: the Pauli-matrix lift whose square collapses to the
//!   Brownian increment times the identity.
//! - [`ensemble`]: deterministic parallel Monte Carlo over many paths with
//!   per-step means, coincidence errors, and residual statistics.

pub mod clifford;
pub mod ensemble;
pub mod error;
pub mod fracpower;
pub mod pathgen;
pub mod types;

pub use error::Error;
