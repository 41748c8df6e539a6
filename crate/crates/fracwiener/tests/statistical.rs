//! Distributional checks on the seeded Gaussian driver. Bounds are CLT
//! envelopes (4 sigma unless noted) evaluated on pinned seeds, so every
//! run sees the same draws and the assertions are deterministic.

use fracwiener::ensemble::{residual_decomposition_stats, EnsembleConfig, SchemeSet};
use fracwiener::fracpower::{sqrt_rep_path, MuZero, SqrtRepMode};
use fracwiener::pathgen::{brownian_path, gaussian_increments, SeedSpec};
use fracwiener::types::TimeGrid;

const DT: f64 = 0.00390625; // 2^-8
const STEPS: usize = 256;

fn grid() -> TimeGrid {
    TimeGrid::from_dt(DT, STEPS).unwrap()
}

#[test]
fn terminal_variance_matches_elapsed_time() {
    // Var[W(T)] = T; the sample variance over m paths has relative
    // standard error sqrt(2/m), about 1.4% here
    let m = 10_000u64;
    let g = grid();
    let t_max = g.t_max();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for idx in 0..m {
        let w = brownian_path(SeedSpec::new(7, idx), g);
        let end = *w.values().last().unwrap();
        sum += end;
        sum_sq += end * end;
    }
    let mean = sum / m as f64;
    let var = sum_sq / m as f64 - mean * mean;
    assert!(
        (var - t_max).abs() <= 0.05 * t_max,
        "Var[W(T)] = {var}, want {t_max} within 5%"
    );
}

#[test]
fn increment_variance_matches_dt() {
    // pooled over m*n = 512000 samples the relative standard error of the
    // variance is sqrt(2/(m*n)) ~ 0.2%
    let m = 2_000u64;
    let g = grid();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for idx in 0..m {
        for d in gaussian_increments(SeedSpec::new(19, idx), g) {
            sum += d;
            sum_sq += d * d;
        }
    }
    let count = (m as usize * STEPS) as f64;
    let mean = sum / count;
    let var = sum_sq / count - mean * mean;
    assert!(
        (var - DT).abs() <= 0.01 * DT,
        "Var[dW] = {var}, want {DT} within 1%"
    );
}

#[test]
fn distinct_streams_are_uncorrelated() {
    // sample correlation between two streams over n = 2^16 increments;
    // under independence it is O(1/sqrt(n))
    let n = 1 << 16;
    let g = TimeGrid::from_dt(DT, n).unwrap();
    let a = gaussian_increments(SeedSpec::new(23, 0), g);
    let b = gaussian_increments(SeedSpec::new(23, 1), g);
    let nf = n as f64;
    let mean_a: f64 = a.iter().sum::<f64>() / nf;
    let mean_b: f64 = b.iter().sum::<f64>() / nf;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (x, y) in a.iter().zip(&b) {
        cov += (x - mean_a) * (y - mean_b);
        var_a += (x - mean_a) * (x - mean_a);
        var_b += (y - mean_b) * (y - mean_b);
    }
    let corr = cov / (var_a * var_b).sqrt();
    assert!(
        corr.abs() <= 4.0 / nf.sqrt(),
        "corr = {corr}, bound {}",
        4.0 / nf.sqrt()
    );
}

#[test]
fn mean_path_stays_inside_the_clt_envelope() {
    // the mean of m Brownian paths is Gaussian with sd sqrt(t/m) at each
    // point; demand it stays inside 4 sigma everywhere
    let m = 1_000u64;
    let g = grid();
    let mut mean = vec![0.0f64; STEPS];
    for idx in 0..m {
        let w = brownian_path(SeedSpec::new(31, idx), g);
        for (acc, v) in mean.iter_mut().zip(w.values()) {
            *acc += v;
        }
    }
    for (i, acc) in mean.iter().enumerate() {
        let avg = acc / m as f64;
        let bound = 4.0 * (g.time_at(i) / m as f64).sqrt();
        assert!(
            avg.abs() <= bound,
            "|mean W(t_{i})| = {} exceeds {bound}",
            avg.abs()
        );
    }
}

#[test]
fn abs_increment_mean_sits_on_the_half_normal_value() {
    let cfg = EnsembleConfig {
        paths: 1_000,
        grid: grid(),
        mu0: MuZero::new(30.0).unwrap(),
        alpha: fracwiener::fracpower::Alpha::half(),
        master_seed: 37,
        schemes: SchemeSet::all(),
    };
    let stats = residual_decomposition_stats(&cfg).unwrap();
    let expected = (2.0 * DT / std::f64::consts::PI).sqrt();
    assert!(
        (stats.mean_abs_dw - expected).abs() <= 0.05 * expected,
        "E|dW| = {}, want {expected} within 5%",
        stats.mean_abs_dw
    );
}

#[test]
fn sqrt_path_phase_concentrates_at_45_degrees() {
    // the path collects positive-real and positive-imaginary jumps of
    // near-equal modulus, so arg X(T) ~ atan(n_-/n_+) with n_+- binomial;
    // per path that is 45 deg +- ~3.6 deg (1 sigma)
    let m = 1_000u64;
    let g = grid();
    let mu0 = MuZero::new(30.0).unwrap();
    let mut sum_phase = 0.0;
    for idx in 0..m {
        let w = brownian_path(SeedSpec::new(41, idx), g);
        let (x, _) = sqrt_rep_path(&w, mu0, SqrtRepMode::IncrementBased);
        let phase = *x.phases_degrees().last().unwrap();
        assert!(
            (phase - 45.0).abs() <= 20.0,
            "path {idx}: terminal phase {phase} strayed from 45 deg"
        );
        sum_phase += phase;
    }
    let mean_phase = sum_phase / m as f64;
    assert!(
        (mean_phase - 45.0).abs() <= 1.0,
        "mean terminal phase {mean_phase}"
    );
}
