//! Subcommand bodies. Each returns `Ok(())` or a [`CliError`] whose exit
//! code follows the 0/1/2/3 contract (success, validation, I/O,
//! verification).

use std::fs;
use std::path::{Path, PathBuf};

use fracwiener::clifford::{clifford_path, clifford_square, pauli, CliffordElement, PauliPair};
use fracwiener::ensemble::{
    residual_decomposition_stats, run_ensemble, single_path_profile, Scheme,
};
use fracwiener::fracpower::{
    direct_power_path, recover_brownian, recover_brownian_with_phi, residual_bound,
    sqrt_rep_path, squared_jump_decomposition, SqrtRepMode,
};
use fracwiener::pathgen::{brownian_path, SeedSpec};
use fracwiener::types::{phi_from_sign, sign_of, BrownianPath, ComplexScalar};

use crate::config::{EnsembleArgs, FormatArg, ModeArg, ResolvedCommon, SimulateArgs, VerifyArgs};
use crate::error::CliError;
use crate::output::{
    ensemble_series_csv, parse_simulate_csv, simulate_csv, summary_doc, to_json_string,
    write_text, SimulateConfigDoc, SimulateDoc, SimulateRow,
};

pub fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let common = args.common.resolve()?;
    fs::create_dir_all(&common.out_dir).map_err(CliError::io(&common.out_dir))?;

    let w = brownian_path(SeedSpec::new(common.seed, args.path_index), common.grid);
    for scheme in common.schemes.iter() {
        let rows = simulate_rows(&w, scheme, &common, args.mode)?;
        let ext = match common.format {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        };
        let path = common
            .out_dir
            .join(format!("simulate_{}.{ext}", scheme.name()));
        let text = match common.format {
            FormatArg::Csv => simulate_csv(&rows),
            FormatArg::Json => {
                let doc = SimulateDoc {
                    config: SimulateConfigDoc {
                        scheme: scheme.name(),
                        master_seed: common.seed,
                        path_index: args.path_index,
                        steps: common.grid.steps(),
                        dt: common.grid.dt(),
                        t_max: common.grid.t_max(),
                        mu0: common.mu0.value(),
                        alpha: common.alpha.value(),
                        mode: match args.mode {
                            ModeArg::Increment => "increment",
                            ModeArg::Level => "level",
                        },
                    },
                    rows: &rows,
                };
                to_json_string(&doc)?
            }
        };
        write_text(&path, &text)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Per-step table of one scheme built on one driving path. The complex
/// series for the Clifford scheme is its (0,1) matrix entry; recovery
/// reads the real part of the squared jump's diagonal.
fn simulate_rows(
    w: &BrownianPath,
    scheme: Scheme,
    common: &ResolvedCommon,
    mode: ModeArg,
) -> Result<Vec<SimulateRow>, CliError> {
    let reference = w.increments();
    let (values, jumps, recovered): (Vec<ComplexScalar>, Vec<ComplexScalar>, Vec<f64>) =
        match scheme {
            Scheme::DirectPower => {
                let x = direct_power_path(w, common.alpha);
                let rec = recover_brownian(
                    &x,
                    w,
                    common.alpha,
                    None,
                    fracwiener::fracpower::RecoveryScheme::DirectPower,
                )?;
                (x.values().to_vec(), x.increments(), rec.increments())
            }
            Scheme::SqrtRep => {
                let (x, phi) = sqrt_rep_path(w, common.mu0, mode.into());
                // the phi-based recovery works for either sign mode, so
                // the emitted column is honest in both
                let rec = recover_brownian_with_phi(&x, &phi, common.mu0)?;
                (x.values().to_vec(), x.increments(), rec.increments())
            }
            Scheme::Clifford => {
                let path = clifford_path(w, common.mu0, PauliPair::default());
                let values: Vec<ComplexScalar> =
                    path.values().iter().map(|e| e.entry(0, 1)).collect();
                let jumps_m = path.increments();
                let jumps: Vec<ComplexScalar> =
                    jumps_m.iter().map(|e| e.entry(0, 1)).collect();
                let recovered: Vec<f64> = jumps_m
                    .iter()
                    .map(|j| clifford_square(j).entry(0, 0).re)
                    .collect();
                (values, jumps, recovered)
            }
        };

    Ok((0..w.len())
        .map(|i| SimulateRow {
            step: i + 1,
            t: common.grid.time_at(i),
            w: w.values()[i],
            re_x: values[i].re,
            im_x: values[i].im,
            abs_dx: jumps[i].norm(),
            recovered_increment: recovered[i],
            reference_increment: reference[i],
        })
        .collect())
}

pub fn cmd_ensemble(args: &EnsembleArgs) -> Result<(), CliError> {
    let common = args.common.resolve()?;
    let cfg = common.ensemble_config(args.paths);
    let summary = run_ensemble(&cfg)?;
    let profile = if args.profile_path_index == 0 {
        summary.single_path_profile.clone()
    } else {
        single_path_profile(&cfg, args.profile_path_index)?
    };

    fs::create_dir_all(&common.out_dir).map_err(CliError::io(&common.out_dir))?;

    let summary_path = common.out_dir.join("ensemble_summary.json");
    write_text(&summary_path, &to_json_string(&summary_doc(&summary, &profile))?)?;
    println!("wrote {}", summary_path.display());

    if common.format == FormatArg::Csv {
        let series_path = common.out_dir.join("ensemble_series.csv");
        write_text(&series_path, &ensemble_series_csv(&summary))?;
        println!("wrote {}", series_path.display());
    }

    for s in &summary.schemes {
        println!(
            "{}: coincidence max abs err = {:e}",
            s.scheme.name(),
            s.coincidence_max_abs_err
        );
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let common = args.common.resolve()?;
    let input = match &args.input {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(CliError::io(path))?;
            Some((path.clone(), text))
        }
        None => None,
    };

    let checks = verify_checks(&common, args.paths, input.as_ref());
    let total = checks.len();
    let mut failed = 0usize;
    for (name, result) in &checks {
        match result {
            Ok(()) => println!("PASS {name}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("verify: {}/{total} checks passed", total - failed);
    if failed > 0 {
        Err(CliError::Verification(format!(
            "{failed} of {total} checks failed"
        )))
    } else {
        Ok(())
    }
}

type Check = (&'static str, Result<(), String>);

/// The invariant suite behind `verify`. Statistical bounds are aware of
/// the configured mu0, dt, and path count, so coarse parameters pass as
/// long as the underlying laws hold.
fn verify_checks(
    common: &ResolvedCommon,
    paths: u64,
    input: Option<&(PathBuf, String)>,
) -> Vec<Check> {
    let mut checks: Vec<Check> = vec![
        ("phi-branch-laws", check_phi_laws()),
        ("sign-identity", check_sign_identity(common)),
        ("pauli-algebra", check_pauli_algebra()),
        ("decomposition-exactness", check_decomposition(common)),
        ("direct-roundtrip", check_direct_roundtrip(common)),
        ("sqrt-roundtrip-residual-bound", check_sqrt_roundtrip(common)),
        ("clifford-collapse", check_clifford_collapse(common)),
        ("jump-modulus-band", check_jump_band(common)),
        ("residual-clt-bounds", check_residual_bounds(common, paths)),
    ];
    if let Some((path, text)) = input {
        checks.push(("input-file-integrity", check_input_file(path, text)));
    }
    checks
}

fn check_phi_laws() -> Result<(), String> {
    for (sign, expected_sq) in [(1.0, ComplexScalar::new(1.0, 0.0)), (-1.0, ComplexScalar::new(-1.0, 0.0))] {
        let phi = phi_from_sign(sign);
        if phi * phi != expected_sq {
            return Err(format!("phi({sign})^2 = {} != {expected_sq}", phi * phi));
        }
        if phi.norm_sqr() != 1.0 {
            return Err(format!("|phi({sign})| != 1"));
        }
    }
    if sign_of(0.0) != 1.0 {
        return Err("sgn(0) must be +1".into());
    }
    Ok(())
}

fn check_sign_identity(common: &ResolvedCommon) -> Result<(), String> {
    for idx in 0..100 {
        let w = brownian_path(SeedSpec::new(common.seed, idx), common.grid);
        for (i, d) in w.increments().into_iter().enumerate() {
            let rebuilt = d.abs() * sign_of(d);
            if rebuilt != d {
                return Err(format!("path {idx} step {i}: |d|*sgn(d) = {rebuilt} != {d}"));
            }
        }
    }
    Ok(())
}

fn check_pauli_algebra() -> Result<(), String> {
    let identity = CliffordElement::identity();
    for n in 1..=3u8 {
        if pauli(n) * pauli(n) != identity {
            return Err(format!("sigma_{n}^2 != I"));
        }
    }
    for i in 1..=3u8 {
        for k in 1..=3u8 {
            if i == k {
                continue;
            }
            let anti = pauli(i) * pauli(k) + pauli(k) * pauli(i);
            if anti != CliffordElement::zero() {
                return Err(format!("sigma_{i} and sigma_{k} do not anticommute"));
            }
        }
    }
    let i_unit = ComplexScalar::new(0.0, 1.0);
    for (a, b, c) in [(1u8, 2u8, 3u8), (2, 3, 1), (3, 1, 2)] {
        if pauli(a) * pauli(b) != pauli(c).scale(i_unit) {
            return Err(format!("sigma_{a} sigma_{b} != i sigma_{c}"));
        }
    }
    Ok(())
}

fn check_decomposition(common: &ResolvedCommon) -> Result<(), String> {
    let dt = common.grid.dt();
    let w = brownian_path(SeedSpec::new(common.seed, 0), common.grid);
    for (i, d) in w.increments().into_iter().enumerate() {
        let dec = squared_jump_decomposition(d, common.mu0, dt);
        let coef = fracwiener::fracpower::jump_coefficient(d.abs(), common.mu0, dt);
        let direct = coef * coef * sign_of(d);
        let err = (dec.total() - direct).abs();
        if err > 1e-12 * direct.abs() {
            return Err(format!(
                "step {i}: expansion {} vs direct square {direct} (err {err:e})",
                dec.total()
            ));
        }
    }
    Ok(())
}

fn check_direct_roundtrip(common: &ResolvedCommon) -> Result<(), String> {
    for idx in 0..20 {
        let w = brownian_path(SeedSpec::new(common.seed, idx), common.grid);
        let x = direct_power_path(&w, common.alpha);
        let rec = recover_brownian(
            &x,
            &w,
            common.alpha,
            None,
            fracwiener::fracpower::RecoveryScheme::DirectPower,
        )
        .map_err(|e| e.to_string())?;
        for (i, (r, d)) in rec.increments().iter().zip(w.increments()).enumerate() {
            if (r - d).abs() > 1e-10 {
                return Err(format!("path {idx} step {i}: recovered {r}, want {d}"));
            }
        }
    }
    Ok(())
}

fn check_sqrt_roundtrip(common: &ResolvedCommon) -> Result<(), String> {
    let dt = common.grid.dt();
    for idx in 0..20 {
        let w = brownian_path(SeedSpec::new(common.seed, idx), common.grid);
        let (x, phi) = sqrt_rep_path(&w, common.mu0, SqrtRepMode::IncrementBased);
        let rec = recover_brownian_with_phi(&x, &phi, common.mu0).map_err(|e| e.to_string())?;
        let incs = w.increments();
        let max_abs_d = incs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let bound = residual_bound(max_abs_d, common.mu0, dt) + 1e-9;
        for (i, (r, d)) in rec.increments().iter().zip(&incs).enumerate() {
            if (r - d).abs() > bound {
                return Err(format!(
                    "path {idx} step {i}: |recovered - d| = {:e} exceeds residual bound {bound:e}",
                    (r - d).abs()
                ));
            }
        }
    }
    Ok(())
}

fn check_clifford_collapse(common: &ResolvedCommon) -> Result<(), String> {
    let dt = common.grid.dt();
    let w = brownian_path(SeedSpec::new(common.seed, 0), common.grid);
    let incs = w.increments();
    let max_abs_d = incs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let bound = residual_bound(max_abs_d, common.mu0, dt) + 1e-9;
    for pair in PauliPair::all() {
        for (i, &d) in incs.iter().enumerate() {
            let sq = clifford_square(&fracwiener::clifford::clifford_jump(
                d, common.mu0, dt, pair,
            ));
            let off = sq.entry(0, 1).norm().max(sq.entry(1, 0).norm());
            if off > 1e-12 {
                return Err(format!(
                    "pair ({},{}) step {i}: off-diagonal magnitude {off:e}",
                    pair.i_index(),
                    pair.k_index()
                ));
            }
            if sq.entry(0, 0) != sq.entry(1, 1) {
                return Err(format!("step {i}: diagonal entries differ"));
            }
            if sq.entry(0, 0).im.abs() > 1e-12 {
                return Err(format!("step {i}: diagonal has imaginary part"));
            }
            if (sq.entry(0, 0).re - d).abs() > bound {
                return Err(format!(
                    "step {i}: diagonal {} is not dW = {d} within {bound:e}",
                    sq.entry(0, 0).re
                ));
            }
        }
    }
    Ok(())
}

fn check_jump_band(common: &ResolvedCommon) -> Result<(), String> {
    let dt = common.grid.dt();
    let m = common.mu0.value().abs();
    let w = brownian_path(SeedSpec::new(common.seed, 0), common.grid);
    let max_abs_d = w.increments().iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    let lo = m - max_abs_d / (2.0 * m) - dt / (8.0 * m * m * m) - 1e-9;
    let hi = m + max_abs_d / (2.0 * m) + 1e-9;
    let (x, _) = sqrt_rep_path(&w, common.mu0, SqrtRepMode::IncrementBased);
    for (i, j) in x.jump_moduli().into_iter().enumerate() {
        if j < lo || j > hi {
            return Err(format!("step {i}: |jump| = {j} outside [{lo}, {hi}]"));
        }
    }
    Ok(())
}

fn check_residual_bounds(common: &ResolvedCommon, paths: u64) -> Result<(), String> {
    let cfg = common.ensemble_config(paths);
    let stats = residual_decomposition_stats(&cfg).map_err(|e| e.to_string())?;
    let m = paths as f64;
    let dt = common.grid.dt();

    let sgn_bound = 4.0 / m.sqrt();
    if stats.max_abs_mean_sgn() > sgn_bound {
        return Err(format!(
            "max |mean sgn| = {} exceeds {sgn_bound}",
            stats.max_abs_mean_sgn()
        ));
    }
    let dev_bound = 4.0 * 2.0f64.sqrt() * dt / m.sqrt();
    if stats.max_abs_mean_dw_sq_minus_dt() > dev_bound {
        return Err(format!(
            "max |mean(dW^2 - dt)| = {:e} exceeds {dev_bound:e}",
            stats.max_abs_mean_dw_sq_minus_dt()
        ));
    }
    let cross_bound = 4.0 * dt.powf(1.5) / m.sqrt();
    if stats.max_abs_mean_dw_dt() > cross_bound {
        return Err(format!(
            "max |mean(dW dt)| = {:e} exceeds {cross_bound:e}",
            stats.max_abs_mean_dw_dt()
        ));
    }
    let half_normal = (2.0 * dt / std::f64::consts::PI).sqrt();
    if (stats.mean_abs_dw - half_normal).abs() > 0.05 * half_normal {
        return Err(format!(
            "mean |dW| = {} is not within 5% of {half_normal}",
            stats.mean_abs_dw
        ));
    }
    Ok(())
}

fn check_input_file(path: &Path, text: &str) -> Result<(), String> {
    let rows =
        parse_simulate_csv(text).map_err(|e| format!("{}: {e}", path.display()))?;
    for (i, pair) in rows.windows(2).enumerate() {
        if pair[1].step != pair[0].step + 1 {
            return Err(format!(
                "{}: step column jumps from {} to {} at row {}",
                path.display(),
                pair[0].step,
                pair[1].step,
                i + 2
            ));
        }
        if pair[1].t <= pair[0].t {
            return Err(format!(
                "{}: time column is not increasing at row {}",
                path.display(),
                i + 2
            ));
        }
    }
    Ok(())
}
