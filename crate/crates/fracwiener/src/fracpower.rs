//! Fractional-power discretizations of a Brownian path and their inversion.
//!
//! Two constructions of `X` solving `dX = (dW)^alpha` in the Euler sense:
//!
//! - [`direct_power_path`]: raise each increment to `alpha` on the
//!   principal branch and accumulate. Any `alpha` in `(0, 2]`.
//! - [`sqrt_rep_path`]: closed form for `alpha = 1/2`. The per-step jump is
//!   `(mu0 + |d|/(2 mu0) - dt/(8 mu0^3)) * phi` with `phi^2 = sgn(d)`; the
//!   scale `mu0` is a free parameter of the representation and large values
//!   suppress the residual terms of a squared jump like `1/mu0^2`.
//!
//! Squaring one closed-form jump expands exactly into
//!
//! ```text
//! (dX)^2 = mu0^2 sgn(d) + d
//!        + d^2 sgn(d) / (4 mu0^2)
//!        - dt  sgn(d) / (4 mu0^2)
//!        + dt^2 sgn(d) / (64 mu0^6)
//!        - dt d / (8 mu0^4)
//! ```
//!
//! and [`squared_jump_decomposition`] hands the terms back separately. The
//! first line is the dominant pair: a sign plateau of height `mu0^2` plus
//! the Brownian increment itself. Everything below it decays with `dt` and
//! `1/mu0`, which is why [`recover_brownian`] can read the increment back
//! out of a squared jump by subtracting `mu0^2 sgn(d)`.

use num_complex::Complex64;

use crate::error::Error;
use crate::types::{
    sign_of, BrownianPath, ComplexPath, ComplexScalar, PhiSequence, SignSequence,
};

/// Exponent of the driving increments, restricted to `(0, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self, Error> {
        if value.is_finite() && value > 0.0 && value <= 2.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidAlpha(value))
        }
    }

    /// The square-root case, the one with a closed-form representation.
    pub fn half() -> Self {
        Self(0.5)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Scale of the square-root representation; `|mu0|` must exceed `1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuZero(f64);

impl MuZero {
    pub fn new(value: f64) -> Result<Self, Error> {
        if value.is_finite() && value.abs() > 0.5 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidMuZero(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Which series the square-root scheme reads signs and moduli from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqrtRepMode {
    /// Drive each jump with the increment `W_i - W_{i-1}`. Canonical: this
    /// is the variant whose squared jumps sit on `mu0^2 sgn(dW) + dW`, so
    /// it is what the recovery protocol inverts.
    #[default]
    IncrementBased,
    /// Drive each jump with the level `W_i` itself. Kept for completeness;
    /// squaring these jumps reproduces levels rather than increments.
    LevelBased,
}

/// Scheme selector for [`recover_brownian`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryScheme {
    DirectPower,
    SqrtRep,
}

/// The closed-form jump coefficient `mu0 + |d|/(2 mu0) - dt/(8 mu0^3)`.
///
/// `abs_d` is the modulus of the driving datum (increment or level). Shared
/// by the scalar scheme and the matrix lift so the two cannot drift apart.
/// Accepts `dt = 0` for limit checks.
pub fn jump_coefficient(abs_d: f64, mu0: MuZero, dt: f64) -> f64 {
    assert!(
        dt.is_finite() && dt >= 0.0,
        "dt must be finite and nonnegative, got {dt}"
    );
    debug_assert!(abs_d >= 0.0, "abs_d is a modulus, got {abs_d}");
    let m = mu0.value();
    m + abs_d / (2.0 * m) - dt / (8.0 * m * m * m)
}

/// `X_i = sum_{j <= i} (dW_j)^alpha`, each power on the principal branch:
/// a negative increment contributes modulus `|dW|^alpha` at phase
/// `pi * alpha`, so for `alpha = 1/2` it lands on the positive imaginary
/// axis.
pub fn direct_power_path(w: &BrownianPath, alpha: Alpha) -> ComplexPath {
    let a = alpha.value();
    let jumps: Vec<ComplexScalar> = w
        .increments()
        .iter()
        .map(|&dw| Complex64::new(dw, 0.0).powf(a))
        .collect();
    ComplexPath::from_increments(w.grid(), &jumps)
        .expect("jump count matches the grid by construction")
}

/// Closed-form square-root path. Returns the path together with the branch
/// factors actually used, so callers can later recover signs without the
/// driving path in hand.
pub fn sqrt_rep_path(
    w: &BrownianPath,
    mu0: MuZero,
    mode: SqrtRepMode,
) -> (ComplexPath, PhiSequence) {
    let (data, signs) = match mode {
        SqrtRepMode::IncrementBased => {
            (w.increments(), SignSequence::from_increment_signs(w))
        }
        SqrtRepMode::LevelBased => {
            (w.values().to_vec(), SignSequence::from_level_signs(w))
        }
    };
    let phi = PhiSequence::from_signs(&signs);
    let dt = w.grid().dt();
    let jumps: Vec<ComplexScalar> = data
        .iter()
        .zip(phi.values())
        .map(|(&d, &p)| p * jump_coefficient(d.abs(), mu0, dt))
        .collect();
    let path = ComplexPath::from_increments(w.grid(), &jumps)
        .expect("jump count matches the grid by construction");
    (path, phi)
}

/// One squared closed-form jump, split into its exact expansion terms.
///
/// `total()` reproduces the direct complex square `(coefficient * phi)^2`
/// to rounding. The `dt^2` term carries `1/(64 mu0^6)`: squaring
/// `-dt/(8 mu0^3)` leaves no other possibility, and the tests pin the
/// identity at 1e-12 relative, which a `1/(64 mu0^4)` variant fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquaredJumpDecomposition {
    /// `mu0^2 * sgn(d)`: the plateau the recovery subtracts.
    pub dominant_sign_term: f64,
    /// `d`: the increment itself, the term everything is run for.
    pub dominant_dw_term: f64,
    /// `d^2 * sgn(d) / (4 mu0^2)`
    pub dw_sq_sign_term: f64,
    /// `-dt * sgn(d) / (4 mu0^2)`
    pub dt_sign_term: f64,
    /// `dt^2 * sgn(d) / (64 mu0^6)`
    pub dt_sq_sign_term: f64,
    /// `-dt * d / (8 mu0^4)`
    pub dt_dw_term: f64,
}

impl SquaredJumpDecomposition {
    /// The four suppressed terms, labeled, in expansion order.
    pub fn residual_terms(&self) -> [(&'static str, f64); 4] {
        [
            ("dw_sq_sign", self.dw_sq_sign_term),
            ("dt_sign", self.dt_sign_term),
            ("dt_sq_sign", self.dt_sq_sign_term),
            ("dt_dw", self.dt_dw_term),
        ]
    }

    /// Sum of the residual terms: the recovery error of one jump.
    pub fn residual_sum(&self) -> f64 {
        self.dw_sq_sign_term + self.dt_sign_term + self.dt_sq_sign_term + self.dt_dw_term
    }

    /// Sum of all six terms.
    pub fn total(&self) -> f64 {
        self.dominant_sign_term + self.dominant_dw_term + self.residual_sum()
    }
}

/// Exact term-by-term expansion of a squared closed-form jump driven by
/// the datum `d` (an increment in the canonical mode).
pub fn squared_jump_decomposition(d: f64, mu0: MuZero, dt: f64) -> SquaredJumpDecomposition {
    assert!(
        dt.is_finite() && dt > 0.0,
        "dt must be finite and positive, got {dt}"
    );
    let s = sign_of(d);
    let m = mu0.value();
    let m2 = m * m;
    let m4 = m2 * m2;
    SquaredJumpDecomposition {
        dominant_sign_term: m2 * s,
        dominant_dw_term: d,
        dw_sq_sign_term: d * d * s / (4.0 * m2),
        dt_sign_term: -dt * s / (4.0 * m2),
        dt_sq_sign_term: dt * dt * s / (64.0 * m4 * m2),
        dt_dw_term: -dt * d / (8.0 * m4),
    }
}

/// Worst-case magnitude of the residual sum over a path: plug the largest
/// increment modulus into each term. Used by the verification suite so its
/// pass bound adapts to whatever `mu0` and `dt` it is handed.
pub fn residual_bound(max_abs_d: f64, mu0: MuZero, dt: f64) -> f64 {
    let m2 = mu0.value() * mu0.value();
    let m4 = m2 * m2;
    (max_abs_d * max_abs_d + dt) / (4.0 * m2)
        + dt * max_abs_d / (8.0 * m4)
        + dt * dt / (64.0 * m4 * m2)
}

/// Inverts a fractional-power path back into the Brownian path that drove
/// it, following the squaring protocol.
///
/// - `DirectPower`: `S_i = (dX_i)^(1/alpha)` on the principal branch. For
///   `alpha <= 1` the branch composition is the identity and `S_i` equals
///   the reference increment to rounding. For `alpha > 1` a negative
///   increment wraps the branch (its forward phase `pi * alpha` exceeds
///   `pi`), so the recovered jump keeps the right modulus but the wrong
///   phase; those steps are put back with the reference increment's sign.
/// - `SqrtRep`: `S_i = (dX_i)^2 - mu0^2 * sgn(dW_i)`, the squared jump
///   with its sign plateau removed; needs `mu0` and assumes the path was
///   built increment-based. Accurate to the residual sum of
///   [`squared_jump_decomposition`], see [`residual_bound`].
///
/// The recovered increments are accumulated into a path on the same grid.
pub fn recover_brownian(
    x: &ComplexPath,
    w_reference: &BrownianPath,
    alpha: Alpha,
    mu0: Option<MuZero>,
    scheme: RecoveryScheme,
) -> Result<BrownianPath, Error> {
    if x.grid() != w_reference.grid() {
        return Err(Error::GridMismatch(format!(
            "power path has {} steps of dt = {}, reference has {} steps of dt = {}",
            x.grid().steps(),
            x.grid().dt(),
            w_reference.grid().steps(),
            w_reference.grid().dt()
        )));
    }
    let jumps = x.increments();
    let ref_incs = w_reference.increments();
    let recovered: Vec<f64> = match scheme {
        RecoveryScheme::DirectPower => {
            let a = alpha.value();
            let inv = 1.0 / a;
            jumps
                .iter()
                .zip(&ref_incs)
                .map(|(&dx, &j)| {
                    let s = dx.powf(inv);
                    if a > 1.0 && branch_wrapped(s, j) {
                        s.norm() * sign_of(j)
                    } else {
                        s.re
                    }
                })
                .collect()
        }
        RecoveryScheme::SqrtRep => {
            let m = mu0.ok_or(Error::MissingMuZero)?.value();
            let m2 = m * m;
            jumps
                .iter()
                .zip(&ref_incs)
                .map(|(&dx, &j)| (dx * dx).re - m2 * sign_of(j))
                .collect()
        }
    };
    BrownianPath::from_increments(w_reference.grid(), &recovered)
}

/// Reference-free square-root recovery: reads the per-step signs off the
/// branch factors returned by [`sqrt_rep_path`] instead of off a driving
/// path.
pub fn recover_brownian_with_phi(
    x: &ComplexPath,
    phi: &PhiSequence,
    mu0: MuZero,
) -> Result<BrownianPath, Error> {
    if phi.len() != x.len() {
        return Err(Error::LengthMismatch {
            got: phi.len(),
            want: x.len(),
        });
    }
    let m2 = mu0.value() * mu0.value();
    let recovered: Vec<f64> = x
        .increments()
        .iter()
        .zip(phi.values())
        .map(|(&dx, &p)| (dx * dx).re - m2 * (p * p).re)
        .collect();
    BrownianPath::from_increments(x.grid(), &recovered)
}

// A wrapped branch shows up as a recovered jump off the real axis, or (at
// alpha = 2 exactly) on it with the wrong sign.
fn branch_wrapped(s: ComplexScalar, reference_increment: f64) -> bool {
    s.im.abs() > 1e-8 * s.norm()
        || (s.re != 0.0 && sign_of(s.re) != sign_of(reference_increment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::TimeGrid;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const DT: f64 = 0.00390625; // 2^-8

    fn mu30() -> MuZero {
        MuZero::new(30.0).unwrap()
    }

    fn path_from_increments(incs: &[f64]) -> BrownianPath {
        let grid = TimeGrid::from_dt(DT, incs.len()).unwrap();
        BrownianPath::from_increments(grid, incs).unwrap()
    }

    #[test]
    fn alpha_accepts_its_interval_only() {
        assert!(Alpha::new(0.5).is_ok());
        assert!(Alpha::new(2.0).is_ok());
        assert!(Alpha::new(0.0).is_err());
        assert!(Alpha::new(-1.0).is_err());
        assert!(Alpha::new(2.1).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
        assert_eq!(Alpha::half().value(), 0.5);
    }

    #[test]
    fn mu_zero_needs_half_unit_magnitude() {
        assert!(MuZero::new(30.0).is_ok());
        assert!(MuZero::new(-30.0).is_ok());
        assert!(MuZero::new(0.6).is_ok());
        assert!(MuZero::new(0.5).is_err());
        assert!(MuZero::new(0.4).is_err());
        assert!(MuZero::new(0.0).is_err());
        assert!(MuZero::new(f64::INFINITY).is_err());
    }

    #[test]
    fn positive_increment_roots_stay_real() {
        let w = path_from_increments(&[0.04]);
        let x = direct_power_path(&w, Alpha::half());
        assert_relative_eq!(x.values()[0].re, 0.2, max_relative = 1e-15);
        assert_eq!(x.values()[0].im, 0.0);
    }

    #[test]
    fn negative_increment_roots_are_imaginary() {
        let w = path_from_increments(&[-0.04]);
        let x = direct_power_path(&w, Alpha::half());
        // 0.2 * cos(pi/2) leaves a ~1e-17 crumb on the real axis
        assert!(x.values()[0].re.abs() < 1e-16);
        assert_relative_eq!(x.values()[0].im, 0.2, max_relative = 1e-15);
    }

    #[test]
    fn unit_alpha_reproduces_the_driving_path() {
        let w = path_from_increments(&[0.1, -0.15, 0.02, -0.01]);
        let x = direct_power_path(&w, Alpha::new(1.0).unwrap());
        for (xv, wv) in x.values().iter().zip(w.values()) {
            assert!((xv.re - wv).abs() <= 1e-15 * (1.0 + wv.abs()));
            assert!(xv.im.abs() <= 1e-15);
        }
    }

    #[test]
    fn jump_coefficient_matches_the_frozen_value() {
        // independent evaluation of mu0 + |d|/(2 mu0) - dt/(8 mu0^3)
        // at mu0 = 30, dt = 2^-8, d = 0.05
        let by_hand = 30.0 + 0.05 / 60.0 - 0.00390625 / 216_000.0;
        let c = jump_coefficient(0.05, mu30(), DT);
        assert_eq!(c, by_hand);
        assert!((c - 30.000_833_315_248_84).abs() < 1e-12);
    }

    #[test]
    fn sqrt_jump_sits_on_the_axis_its_sign_picks() {
        let c = jump_coefficient(0.05, mu30(), DT);

        let (x_pos, _) = sqrt_rep_path(&path_from_increments(&[0.05]), mu30(), SqrtRepMode::IncrementBased);
        assert_eq!(x_pos.values()[0], ComplexScalar::new(c, 0.0));

        let (x_neg, phi) = sqrt_rep_path(&path_from_increments(&[-0.05]), mu30(), SqrtRepMode::IncrementBased);
        assert_eq!(x_neg.values()[0], ComplexScalar::new(0.0, c));
        assert_eq!(phi.values()[0], ComplexScalar::new(0.0, 1.0));
    }

    #[test]
    fn level_mode_reads_the_path_values() {
        // values [0.1, -0.05]: second jump must use |W_1| = 0.05 and the
        // sign of the level, not of the increment
        let grid = TimeGrid::from_dt(DT, 2).unwrap();
        let w = BrownianPath::new(grid, vec![0.1, -0.05]).unwrap();
        let (x, phi) = sqrt_rep_path(&w, mu30(), SqrtRepMode::LevelBased);
        let jumps = x.increments();
        assert_eq!(jumps[0], ComplexScalar::new(jump_coefficient(0.1, mu30(), DT), 0.0));
        let expected = jump_coefficient(0.05, mu30(), DT);
        assert!((jumps[1].im - expected).abs() < 1e-12);
        assert_eq!(phi.values()[1], ComplexScalar::new(0.0, 1.0));
    }

    #[test]
    fn squared_jump_lands_on_the_plateau_plus_increment() {
        // frozen: (mu0 + 0.05/60 - dt/216000)^2 at the defaults
        let dec = squared_jump_decomposition(0.05, mu30(), DT);
        assert!((dec.total() - 900.049_999_609_344_7).abs() < 1e-10);
        assert!((dec.total() - (900.0 + 0.05)).abs() < 1e-4);
        assert_eq!(dec.dominant_sign_term, 900.0);
        assert_eq!(dec.dominant_dw_term, 0.05);
    }

    #[test]
    fn decomposition_of_a_zero_increment() {
        let dec = squared_jump_decomposition(0.0, mu30(), DT);
        assert_eq!(dec.dominant_dw_term, 0.0);
        assert_eq!(dec.dominant_sign_term, 900.0); // sgn(0) = +1 convention
        assert_eq!(dec.dw_sq_sign_term, 0.0);
        assert!((dec.dt_sign_term - (-1.085_069_444_444_444_4e-6)).abs() < 1e-18);
        assert!((dec.dt_sq_sign_term - 3.270_488_053_519_376e-16).abs() < 1e-28);
        assert_eq!(dec.dt_dw_term, 0.0);
    }

    #[test]
    fn decomposition_matches_the_direct_square() {
        // oracle: square the actual complex jump, which exercises complex
        // multiplication instead of the expansion formulas
        for &d in &[0.05, -0.05, 0.3, -0.41, 0.0, 1e-6] {
            let phi = crate::types::phi_from_sign(sign_of(d));
            let jump = phi * jump_coefficient(d.abs(), mu30(), DT);
            let direct = (jump * jump).re;
            let dec = squared_jump_decomposition(d, mu30(), DT);
            assert!(
                (dec.total() - direct).abs() <= 1e-12 * direct.abs(),
                "expansion {} vs direct {direct} at d = {d}",
                dec.total()
            );
        }
    }

    #[test]
    fn residual_terms_stay_small_across_the_increment_range() {
        // scan |d| <= 0.5 at the default scale: every residual term must sit
        // below 1e-4 (the dominant one, d^2/(4 mu0^2), peaks at 6.9e-5)
        let mut max_term: f64 = 0.0;
        let mut d = -0.5;
        while d <= 0.5 {
            let dec = squared_jump_decomposition(d, mu30(), DT);
            for (_, term) in dec.residual_terms() {
                max_term = max_term.max(term.abs());
            }
            d += 0.001;
        }
        assert!(max_term < 1e-4, "largest residual term {max_term}");
        assert!(max_term > 6e-5, "scan should reach the d^2 peak, got {max_term}");
    }

    #[test]
    fn direct_recovery_inverts_the_half_power() {
        let w = path_from_increments(&[0.1, -0.15, 0.07, -0.02]);
        let x = direct_power_path(&w, Alpha::half());
        let rec = recover_brownian(&x, &w, Alpha::half(), None, RecoveryScheme::DirectPower)
            .unwrap();
        for (r, t) in rec.values().iter().zip(w.values()) {
            assert!((r - t).abs() <= 1e-10, "recovered {r}, wanted {t}");
        }
    }

    #[test]
    fn wrapped_branches_are_put_back_with_the_reference_sign() {
        // alpha = 2: a negative increment squares to a positive real jump,
        // and the root takes the positive branch; the reference sign flips
        // it back
        let w = path_from_increments(&[-0.1, 0.2, -0.3]);
        let alpha = Alpha::new(2.0).unwrap();
        let x = direct_power_path(&w, alpha);
        let rec = recover_brownian(&x, &w, alpha, None, RecoveryScheme::DirectPower).unwrap();
        for (r, t) in rec.values().iter().zip(w.values()) {
            assert!((r - t).abs() <= 1e-10, "recovered {r}, wanted {t}");
        }
    }

    #[test]
    fn sqrt_recovery_stays_inside_the_residual_bound() {
        let incs = [0.1, -0.15, 0.07, -0.02, 0.31, -0.44];
        let w = path_from_increments(&incs);
        let (x, phi) = sqrt_rep_path(&w, mu30(), SqrtRepMode::IncrementBased);
        let rec =
            recover_brownian(&x, &w, Alpha::half(), Some(mu30()), RecoveryScheme::SqrtRep)
                .unwrap();
        let max_abs = incs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let bound = residual_bound(max_abs, mu30(), DT);
        for (r, t) in rec.increments().iter().zip(&w.increments()) {
            assert!(
                (r - t).abs() <= bound,
                "per-step error {} above bound {bound}",
                (r - t).abs()
            );
        }

        // the reference-free overload must agree with the referenced one
        // on increment-based input, where phi encodes the same signs
        let rec_phi = recover_brownian_with_phi(&x, &phi, mu30()).unwrap();
        assert_eq!(rec.values(), rec_phi.values());
    }

    #[test]
    fn recovery_rejects_mismatched_grids() {
        let w = path_from_increments(&[0.1, -0.15]);
        let other = path_from_increments(&[0.1, -0.15, 0.07]);
        let x = direct_power_path(&w, Alpha::half());
        let err = recover_brownian(&x, &other, Alpha::half(), None, RecoveryScheme::DirectPower);
        assert!(matches!(err, Err(Error::GridMismatch(_))));
    }

    #[test]
    fn sqrt_recovery_requires_mu_zero() {
        let w = path_from_increments(&[0.1, -0.15]);
        let (x, _) = sqrt_rep_path(&w, mu30(), SqrtRepMode::IncrementBased);
        let err = recover_brownian(&x, &w, Alpha::half(), None, RecoveryScheme::SqrtRep);
        assert!(matches!(err, Err(Error::MissingMuZero)));
    }

    #[test]
    fn jump_moduli_track_the_coefficient_band() {
        let incs = [0.1, -0.15, 0.07, -0.02, 0.31, -0.44, 0.0, 0.5];
        let w = path_from_increments(&incs);
        let (x, _) = sqrt_rep_path(&w, mu30(), SqrtRepMode::IncrementBased);
        let m = 30.0;
        for (jump, d) in x.jump_moduli().iter().zip(&incs) {
            let lo = m - d.abs() / (2.0 * m) - DT / (8.0 * m * m * m);
            let hi = m + d.abs() / (2.0 * m);
            // 1e-9 slack for reconstructing jumps from the running sums
            assert!(
                (lo - 1e-9..=hi + 1e-9).contains(jump),
                "|jump| = {jump} outside [{lo}, {hi}] at d = {d}"
            );
        }
        // modulus of the partial sums never shrinks: each jump pushes one
        // axis outward
        let moduli = x.moduli();
        for pair in moduli.windows(2) {
            assert!(pair[1] >= pair[0] - 1e-12);
        }
    }

    proptest! {
        #[test]
        fn decomposition_equals_direct_square_for_random_triples(
            d in -1.0f64..1.0,
            dt in 1e-6f64..0.1,
            mu_mag in 0.51f64..100.0,
            mu_neg in proptest::bool::ANY,
        ) {
            let mu0 = MuZero::new(if mu_neg { -mu_mag } else { mu_mag }).unwrap();
            let phi = crate::types::phi_from_sign(sign_of(d));
            let jump = phi * jump_coefficient(d.abs(), mu0, dt);
            let direct = (jump * jump).re;
            let dec = squared_jump_decomposition(d, mu0, dt);
            prop_assert!(
                (dec.total() - direct).abs() <= 1e-12 * direct.abs().max(1e-300),
                "expansion {} vs direct {} at d = {}, dt = {}, mu0 = {}",
                dec.total(), direct, d, dt, mu0.value()
            );
        }

        #[test]
        fn direct_roundtrip_is_exact_below_unit_alpha(
            incs in prop::collection::vec(-0.5f64..0.5, 1..64),
            a in 0.05f64..=1.0,
        ) {
            let alpha = Alpha::new(a).unwrap();
            let w = path_from_increments(&incs);
            let x = direct_power_path(&w, alpha);
            let rec = recover_brownian(&x, &w, alpha, None, RecoveryScheme::DirectPower)
                .unwrap();
            for (r, t) in rec.increments().iter().zip(&incs) {
                prop_assert!((r - t).abs() <= 1e-10, "step error {}", (r - t).abs());
            }
        }

        #[test]
        fn direct_roundtrip_holds_above_unit_alpha_with_sign_repair(
            incs in prop::collection::vec(-0.5f64..0.5, 1..64),
            a in 1.0f64..=2.0,
        ) {
            let alpha = Alpha::new(a).unwrap();
            let w = path_from_increments(&incs);
            let x = direct_power_path(&w, alpha);
            let rec = recover_brownian(&x, &w, alpha, None, RecoveryScheme::DirectPower)
                .unwrap();
            for (r, t) in rec.increments().iter().zip(&incs) {
                prop_assert!((r - t).abs() <= 1e-10, "step error {}", (r - t).abs());
            }
        }

        #[test]
        fn sqrt_jump_leaves_the_real_axis_exactly_on_negative_increments(
            incs in prop::collection::vec(-0.5f64..0.5, 1..64),
        ) {
            let w = path_from_increments(&incs);
            let (x, _) = sqrt_rep_path(&w, mu30(), SqrtRepMode::IncrementBased);
            for (jump, &d) in x.increments().iter().zip(&incs) {
                // the imaginary accumulator only moves on negative steps, so
                // reconstruction is exact here
                prop_assert_eq!(jump.im != 0.0, d < 0.0);
            }
        }

        #[test]
        fn modulus_times_sign_reassembles_the_datum(
            incs in prop::collection::vec(-10.0f64..10.0, 1..64),
        ) {
            let w = path_from_increments(&incs);
            for &d in &w.increments() {
                prop_assert_eq!(d.abs() * sign_of(d), d);
            }
            for &v in w.values() {
                prop_assert_eq!(v.abs() * sign_of(v), v);
            }
        }

        #[test]
        fn sqrt_recovery_error_is_bounded_for_random_paths(
            incs in prop::collection::vec(-0.5f64..0.5, 1..64),
            mu_mag in 2.0f64..60.0,
        ) {
            let mu0 = MuZero::new(mu_mag).unwrap();
            let w = path_from_increments(&incs);
            let (x, _) = sqrt_rep_path(&w, mu0, SqrtRepMode::IncrementBased);
            let rec = recover_brownian(&x, &w, Alpha::half(), Some(mu0), RecoveryScheme::SqrtRep)
                .unwrap();
            let max_abs = incs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
            // small fp slack on top of the analytic bound: jumps are
            // reconstructed from partial sums of size ~ mu0 * steps
            let bound = residual_bound(max_abs, mu0, DT) + 1e-9;
            for (r, t) in rec.increments().iter().zip(&incs) {
                prop_assert!((r - t).abs() <= bound, "step error {}", (r - t).abs());
            }
        }
    }
}
