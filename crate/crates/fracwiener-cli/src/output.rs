//! File emission: CSV for per-step series, JSON for nested summaries.
//!
//! Every float is written with 17 significant decimal digits (`{:.16e}` in
//! CSV, shortest round-trip form in JSON), so re-reading an emitted file
//! reproduces the doubles bit for bit. Map keys are ordered and series are
//! emitted in a fixed scheme order, which makes whole files byte-stable:
//! two runs with the same flags produce identical bytes, and the
//! determinism gate compares them as such.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use fracwiener::ensemble::{EnsembleSummary, PathProfile, Scheme};
use serde::Serialize;

use crate::error::CliError;

/// 17 significant digits, enough to reconstruct any f64 exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One per-step record of a single-path run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimulateRow {
    pub step: usize,
    pub t: f64,
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "Re_X")]
    pub re_x: f64,
    #[serde(rename = "Im_X")]
    pub im_x: f64,
    #[serde(rename = "abs_dX")]
    pub abs_dx: f64,
    pub recovered_increment: f64,
    pub reference_increment: f64,
}

pub const SIMULATE_HEADER: &str =
    "step,t,W,Re_X,Im_X,abs_dX,recovered_increment,reference_increment";

pub fn simulate_csv(rows: &[SimulateRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 160 + SIMULATE_HEADER.len() + 1);
    out.push_str(SIMULATE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.step,
            format_float(r.t),
            format_float(r.w),
            format_float(r.re_x),
            format_float(r.im_x),
            format_float(r.abs_dx),
            format_float(r.recovered_increment),
            format_float(r.reference_increment),
        ));
    }
    out
}

/// Parses a file produced by [`simulate_csv`], insisting on the exact
/// header and on fields that reproduce their bytes when re-serialized, so
/// any corruption shows up as a diagnostic rather than a silently skewed
/// number.
pub fn parse_simulate_csv(text: &str) -> Result<Vec<SimulateRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == SIMULATE_HEADER => {}
        Some(header) => return Err(format!("unexpected header {header:?}")),
        None => return Err("file is empty".into()),
    }

    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let lineno = lineno + 2; // 1-based, after the header
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(format!(
                "line {lineno}: expected 8 fields, found {}",
                fields.len()
            ));
        }
        let step: usize = fields[0]
            .parse()
            .map_err(|e| format!("line {lineno}: bad step {:?}: {e}", fields[0]))?;
        let mut floats = [0.0f64; 7];
        for (slot, field) in floats.iter_mut().zip(&fields[1..]) {
            let value: f64 = field
                .parse()
                .map_err(|e| format!("line {lineno}: bad number {field:?}: {e}"))?;
            if format_float(value) != *field {
                return Err(format!(
                    "line {lineno}: field {field:?} is not in canonical 17-digit form"
                ));
            }
            *slot = value;
        }
        rows.push(SimulateRow {
            step,
            t: floats[0],
            w: floats[1],
            re_x: floats[2],
            im_x: floats[3],
            abs_dx: floats[4],
            recovered_increment: floats[5],
            reference_increment: floats[6],
        });
    }
    if rows.is_empty() {
        return Err("no data rows".into());
    }
    Ok(rows)
}

#[derive(Debug, Serialize)]
pub struct SimulateConfigDoc {
    pub scheme: &'static str,
    pub master_seed: u64,
    pub path_index: u64,
    pub steps: usize,
    pub dt: f64,
    pub t_max: f64,
    pub mu0: f64,
    pub alpha: f64,
    pub mode: &'static str,
}

#[derive(Debug, Serialize)]
pub struct SimulateDoc<'a> {
    pub config: SimulateConfigDoc,
    pub rows: &'a [SimulateRow],
}

#[derive(Debug, Serialize)]
pub struct EnsembleConfigDoc {
    pub paths: u64,
    pub steps: usize,
    pub dt: f64,
    pub t_max: f64,
    pub mu0: f64,
    pub alpha: f64,
    pub master_seed: u64,
    pub schemes: Vec<&'static str>,
    pub profile_path_index: u64,
}

#[derive(Debug, Serialize)]
pub struct SchemeDoc {
    pub mean_recovered_cumsum: Vec<f64>,
    pub coincidence_max_abs_err: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_raw_square_cumsum: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct AbsMeansDoc {
    pub dw: f64,
    pub dw2_minus_dt: f64,
    pub dw_dt: f64,
}

#[derive(Debug, Serialize)]
pub struct ResidualsDoc {
    pub sgn: Vec<f64>,
    pub dw2_minus_dt: Vec<f64>,
    pub dw_dt: Vec<f64>,
    pub dw: Vec<f64>,
    pub abs_means: AbsMeansDoc,
}

#[derive(Debug, Serialize)]
pub struct ProfileDoc {
    pub path_index: u64,
    pub modulus: Vec<f64>,
    pub phase_degrees: Vec<f64>,
    pub jump_modulus: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct SummaryDoc {
    pub config: EnsembleConfigDoc,
    pub mean_brownian: Vec<f64>,
    pub schemes: BTreeMap<&'static str, SchemeDoc>,
    pub residuals: ResidualsDoc,
    pub profile: ProfileDoc,
}

pub fn summary_doc(summary: &EnsembleSummary, profile: &PathProfile) -> SummaryDoc {
    let cfg = &summary.config;
    let schemes = summary
        .schemes
        .iter()
        .map(|s| {
            (
                s.scheme.name(),
                SchemeDoc {
                    mean_recovered_cumsum: s.mean_recovered_cumsum.clone(),
                    coincidence_max_abs_err: s.coincidence_max_abs_err,
                    mean_raw_square_cumsum: s.mean_raw_square_cumsum.clone(),
                },
            )
        })
        .collect();
    SummaryDoc {
        config: EnsembleConfigDoc {
            paths: cfg.paths,
            steps: cfg.grid.steps(),
            dt: cfg.grid.dt(),
            t_max: cfg.grid.t_max(),
            mu0: cfg.mu0.value(),
            alpha: cfg.alpha.value(),
            master_seed: cfg.master_seed,
            schemes: cfg.schemes.iter().map(Scheme::name).collect(),
            profile_path_index: profile.path_index,
        },
        mean_brownian: summary.mean_brownian.clone(),
        schemes,
        residuals: ResidualsDoc {
            sgn: summary.residuals.mean_sgn.clone(),
            dw2_minus_dt: summary.residuals.mean_dw_sq_minus_dt.clone(),
            dw_dt: summary.residuals.mean_dw_dt.clone(),
            dw: summary.residuals.mean_dw.clone(),
            abs_means: AbsMeansDoc {
                dw: summary.residuals.mean_abs_dw,
                dw2_minus_dt: summary.residuals.mean_abs_dw_sq_minus_dt,
                dw_dt: summary.residuals.mean_abs_dw_dt,
            },
        },
        profile: ProfileDoc {
            path_index: profile.path_index,
            modulus: profile.modulus.clone(),
            phase_degrees: profile.phase_degrees.clone(),
            jump_modulus: profile.jump_modulus.clone(),
        },
    }
}

/// Per-step series of an ensemble summary as one wide CSV table.
pub fn ensemble_series_csv(summary: &EnsembleSummary) -> String {
    let mut header = String::from("step,t,mean_dw,mean_brownian");
    for s in &summary.schemes {
        header.push_str(&format!(
            ",{name}_mean_recovered_increment,{name}_mean_recovered_cumsum",
            name = s.scheme.name()
        ));
        if s.mean_raw_square_cumsum.is_some() {
            header.push_str(&format!(",{}_mean_raw_square_cumsum", s.scheme.name()));
        }
    }
    header.push_str(",mean_sgn,mean_dw_sq_minus_dt,mean_dw_dt\n");

    let steps = summary.mean_brownian.len();
    let mut out = String::with_capacity(steps * 220 + header.len());
    out.push_str(&header);
    for i in 0..steps {
        out.push_str(&format!(
            "{},{},{},{}",
            i + 1,
            format_float(summary.config.grid.time_at(i)),
            format_float(summary.residuals.mean_dw[i]),
            format_float(summary.mean_brownian[i]),
        ));
        for s in &summary.schemes {
            out.push_str(&format!(
                ",{},{}",
                format_float(s.mean_recovered_increments[i]),
                format_float(s.mean_recovered_cumsum[i]),
            ));
            if let Some(raw) = &s.mean_raw_square_cumsum {
                out.push_str(&format!(",{}", format_float(raw[i])));
            }
        }
        out.push_str(&format!(
            ",{},{},{}\n",
            format_float(summary.residuals.mean_sgn[i]),
            format_float(summary.residuals.mean_dw_sq_minus_dt[i]),
            format_float(summary.residuals.mean_dw_dt[i]),
        ));
    }
    out
}

pub fn to_json_string(value: &impl Serialize) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Invalid(format!("summary not serializable: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(CliError::io(path))
}
