//! Artifact serialization: signals, measurements, recovery results, and lab
//! reports, as CSV or JSON (chosen by file extension).
//!
//! Every floating-point number is rendered as `{:.16e}` — 17 significant
//! digits — which round-trips `f64` exactly and keeps artifacts byte-stable
//! across runs. JSON objects are built with explicit key order and serialized
//! compactly with the same float rule; CSV metadata travels in `# key: value`
//! comment lines above the header row. No timestamps, hostnames, or other
//! environment-dependent content is ever written.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::measurement::MeasurementVector;
use crate::recovery::RecoveryResult;
use crate::stability::{NoiseSweepReport, RnmpBoundsReport, RnmpEstimate, StabilityReport};
use crate::symmetrization::Variant;
use crate::version;

/// Artifact encoding, selected by file extension (`.csv` vs anything else).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Canonical float rendering: 17 significant digits, scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Compact JSON with the canonical float rendering.
pub fn to_json_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("serializing serde_json::Value cannot fail");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

fn complex_vec_value(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect())
}

fn parse_complex_vec(value: &Value, field: &str) -> Result<Vec<Complex64>> {
    let arr = value
        .get(field)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse(format!("missing array field {field:?}")))?;
    arr.iter()
        .map(|pair| {
            let pair = pair
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse(format!("{field}: entries must be [re, im] pairs")))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("{field}: non-numeric real part")))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("{field}: non-numeric imaginary part")))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

fn attach_common(mut obj: Value, schema: &str, config: Option<&Value>) -> Value {
    let map = obj.as_object_mut().expect("artifact roots are objects");
    map.insert("schema".to_string(), json!(schema));
    map.insert("version".to_string(), json!(version()));
    if let Some(cfg) = config {
        map.insert("config".to_string(), cfg.clone());
    }
    obj
}

fn csv_preamble(schema: &str, config: Option<&Value>) -> String {
    let mut out = String::new();
    out.push_str(&format!("# schema: {schema}\n"));
    out.push_str(&format!("# version: {}\n", version()));
    if let Some(cfg) = config {
        out.push_str(&format!("# config: {}\n", to_json_string(cfg)));
    }
    out
}

fn parse_f64(text: &str, what: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("{what}: bad float {text:?} ({e})")))
}

fn parse_usize(text: &str, what: &str) -> Result<usize> {
    text.trim()
        .parse::<usize>()
        .map_err(|e| Error::Parse(format!("{what}: bad integer {text:?} ({e})")))
}

/// Splits a CSV artifact into `# key: value` metadata and data lines,
/// dropping the header row if one is present.
fn split_csv(contents: &str, expected_header: &str) -> (Vec<(String, String)>, Vec<String>) {
    let mut meta = Vec::new();
    let mut rows = Vec::new();
    for line in contents.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once(':') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if line == expected_header {
            continue;
        }
        rows.push(line.to_string());
    }
    (meta, rows)
}

fn meta_value<'a>(meta: &'a [(String, String)], key: &str) -> Option<&'a str> {
    meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

// ---------------------------------------------------------------------------
// Signals
// ---------------------------------------------------------------------------

pub fn signal_to_csv(x: &[Complex64]) -> String {
    let mut out = csv_preamble("signal", None);
    out.push_str("index,re,im\n");
    for (i, z) in x.iter().enumerate() {
        out.push_str(&format!("{i},{},{}\n", fmt_f64(z.re), fmt_f64(z.im)));
    }
    out
}

pub fn signal_to_json(x: &[Complex64]) -> String {
    let obj = attach_common(json!({ "entries": complex_vec_value(x) }), "signal", None);
    let mut s = to_json_string(&obj);
    s.push('\n');
    s
}

pub fn write_signal(path: &Path, x: &[Complex64]) -> Result<()> {
    let contents = match Format::from_path(path) {
        Format::Csv => signal_to_csv(x),
        Format::Json => signal_to_json(x),
    };
    fs::write(path, contents)?;
    Ok(())
}

pub fn read_signal(path: &Path) -> Result<Vec<Complex64>> {
    let contents = fs::read_to_string(path)?;
    match Format::from_path(path) {
        Format::Csv => signal_from_csv(&contents),
        Format::Json => signal_from_json(&contents),
    }
}

pub fn signal_from_csv(contents: &str) -> Result<Vec<Complex64>> {
    let (_, rows) = split_csv(contents, "index,re,im");
    let mut entries: Vec<(usize, Complex64)> = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut parts = row.split(',');
        let (i, re, im) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(i), Some(re), Some(im), None) => (i, re, im),
            _ => {
                return Err(Error::Parse(format!(
                    "signal row must be index,re,im — got {row:?}"
                )))
            }
        };
        entries.push((
            parse_usize(i, "signal index")?,
            Complex64::new(parse_f64(re, "signal re")?, parse_f64(im, "signal im")?),
        ));
    }
    entries.sort_by_key(|(i, _)| *i);
    for (pos, (i, _)) in entries.iter().enumerate() {
        if pos != *i {
            return Err(Error::Parse(format!(
                "signal indices must cover 0..n contiguously, found {i} at row {pos}"
            )));
        }
    }
    if entries.is_empty() {
        return Err(Error::Parse("signal file contains no entries".to_string()));
    }
    Ok(entries.into_iter().map(|(_, z)| z).collect())
}

pub fn signal_from_json(contents: &str) -> Result<Vec<Complex64>> {
    let value: Value =
        serde_json::from_str(contents).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let entries = parse_complex_vec(&value, "entries")?;
    if entries.is_empty() {
        return Err(Error::Parse("signal file contains no entries".to_string()));
    }
    Ok(entries)
}

// ---------------------------------------------------------------------------
// Measurements
// ---------------------------------------------------------------------------

pub fn measurement_to_csv(m: &MeasurementVector, config: Option<&Value>) -> String {
    let mut out = csv_preamble("measurement", config);
    out.push_str(&format!("# variant: {}\n", m.variant()));
    out.push_str(&format!("# n: {}\n", m.origin_n()));
    out.push_str(&format!("# noise_sigma: {}\n", fmt_f64(m.noise_sigma())));
    out.push_str(&format!("# clipped: {}\n", m.clipped()));
    out.push_str("index,intensity\n");
    for (i, v) in m.intensities().iter().enumerate() {
        out.push_str(&format!("{i},{}\n", fmt_f64(*v)));
    }
    out
}

pub fn measurement_to_json(m: &MeasurementVector, config: Option<&Value>) -> String {
    let obj = attach_common(
        json!({
            "variant": m.variant().to_string(),
            "n": m.origin_n(),
            "sigma": m.noise_sigma(),
            "clipped": m.clipped(),
            "intensities": m.intensities(),
        }),
        "measurement",
        config,
    );
    let mut s = to_json_string(&obj);
    s.push('\n');
    s
}

pub fn write_measurement(path: &Path, m: &MeasurementVector, config: Option<&Value>) -> Result<()> {
    let contents = match Format::from_path(path) {
        Format::Csv => measurement_to_csv(m, config),
        Format::Json => measurement_to_json(m, config),
    };
    fs::write(path, contents)?;
    Ok(())
}

pub fn read_measurement(path: &Path) -> Result<MeasurementVector> {
    let contents = fs::read_to_string(path)?;
    match Format::from_path(path) {
        Format::Csv => measurement_from_csv(&contents),
        Format::Json => measurement_from_json(&contents),
    }
}

pub fn measurement_from_csv(contents: &str) -> Result<MeasurementVector> {
    let (meta, rows) = split_csv(contents, "index,intensity");
    let variant: Variant = meta_value(&meta, "variant")
        .ok_or_else(|| Error::Parse("measurement CSV lacks '# variant:' line".to_string()))?
        .parse()?;
    let n = parse_usize(
        meta_value(&meta, "n")
            .ok_or_else(|| Error::Parse("measurement CSV lacks '# n:' line".to_string()))?,
        "measurement n",
    )?;
    let noise_sigma = match meta_value(&meta, "noise_sigma") {
        Some(v) => parse_f64(v, "noise_sigma")?,
        None => 0.0,
    };
    let mut entries: Vec<(usize, f64)> = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut parts = row.split(',');
        let (i, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(i), Some(v), None) => (i, v),
            _ => {
                return Err(Error::Parse(format!(
                    "measurement row must be index,intensity — got {row:?}"
                )))
            }
        };
        entries.push((
            parse_usize(i, "measurement index")?,
            parse_f64(v, "intensity")?,
        ));
    }
    entries.sort_by_key(|(i, _)| *i);
    for (pos, (i, _)) in entries.iter().enumerate() {
        if pos != *i {
            return Err(Error::Parse(format!(
                "measurement indices must cover 0..len contiguously, found {i} at row {pos}"
            )));
        }
    }
    let intensities: Vec<f64> = entries.into_iter().map(|(_, v)| v).collect();
    MeasurementVector::new(intensities, variant, n, noise_sigma)
}

pub fn measurement_from_json(contents: &str) -> Result<MeasurementVector> {
    let value: Value =
        serde_json::from_str(contents).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let variant: Variant = value
        .get("variant")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("measurement JSON lacks string field \"variant\"".to_string()))?
        .parse()?;
    let n = value
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("measurement JSON lacks integer field \"n\"".to_string()))?
        as usize;
    let noise_sigma = value
        .get("sigma")
        .or_else(|| value.get("noise_sigma"))
        .and_then(Value::as_f64)
        .unwrap_or(0.0);
    let intensities: Vec<f64> = value
        .get("intensities")
        .and_then(Value::as_array)
        .ok_or_else(|| {
            Error::Parse("measurement JSON lacks array field \"intensities\"".to_string())
        })?
        .iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| Error::Parse("intensities: non-numeric entry".to_string()))
        })
        .collect::<Result<_>>()?;
    MeasurementVector::new(intensities, variant, n, noise_sigma)
}

// ---------------------------------------------------------------------------
// Recovery results
// ---------------------------------------------------------------------------

pub fn recovery_to_json(
    r: &RecoveryResult,
    truth_dist: Option<f64>,
    config: Option<&Value>,
) -> String {
    let re: Vec<f64> = r.estimate.iter().map(|z| z.re).collect();
    let im: Vec<f64> = r.estimate.iter().map(|z| z.im).collect();
    let mut obj = json!({
        "estimate_re": re,
        "estimate_im": im,
        "n": r.estimate.len(),
        "residual": r.residual,
        "method": r.method.to_string(),
        "iterations": r.iterations,
        "sign_convention": r.sign_convention,
    });
    if let Some(d) = truth_dist {
        obj.as_object_mut()
            .expect("object")
            .insert("truth_dist".to_string(), json!(d));
    }
    let obj = attach_common(obj, "recovery", config);
    let mut s = to_json_string(&obj);
    s.push('\n');
    s
}

pub fn recovery_to_csv(
    r: &RecoveryResult,
    truth_dist: Option<f64>,
    config: Option<&Value>,
) -> String {
    let mut out = csv_preamble("recovery", config);
    out.push_str(&format!("# method: {}\n", r.method));
    out.push_str(&format!("# iterations: {}\n", r.iterations));
    out.push_str(&format!("# residual: {}\n", fmt_f64(r.residual)));
    out.push_str(&format!("# sign_convention: {}\n", r.sign_convention));
    if let Some(d) = truth_dist {
        out.push_str(&format!("# truth_dist: {}\n", fmt_f64(d)));
    }
    out.push_str("index,re,im\n");
    for (i, z) in r.estimate.iter().enumerate() {
        out.push_str(&format!("{i},{},{}\n", fmt_f64(z.re), fmt_f64(z.im)));
    }
    out
}

pub fn write_recovery(
    path: &Path,
    r: &RecoveryResult,
    truth_dist: Option<f64>,
    config: Option<&Value>,
) -> Result<()> {
    let contents = match Format::from_path(path) {
        Format::Csv => recovery_to_csv(r, truth_dist, config),
        Format::Json => recovery_to_json(r, truth_dist, config),
    };
    fs::write(path, contents)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Lab reports
// ---------------------------------------------------------------------------

pub fn rnmp_estimate_to_json(est: &RnmpEstimate, config: Option<&Value>) -> String {
    let obj = attach_common(
        json!({
            "s": est.s,
            "f": est.f,
            "n": est.n,
            "alpha": est.alpha,
            "trials": est.trials,
            "restarts": est.restarts,
            "converged": est.converged,
            "exhaustive": est.exhaustive,
            "seed": est.seed,
            "best_x": complex_vec_value(&est.best_x),
            "best_y": complex_vec_value(&est.best_y),
        }),
        "rnmp_estimate",
        config,
    );
    let mut s = to_json_string(&obj);
    s.push('\n');
    s
}

pub fn rnmp_estimate_to_csv(est: &RnmpEstimate, config: Option<&Value>) -> String {
    let mut out = csv_preamble("rnmp_estimate", config);
    out.push_str("s,f,n,alpha,trials,restarts,converged,exhaustive,seed\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{}\n",
        est.s,
        est.f,
        est.n,
        fmt_f64(est.alpha),
        est.trials,
        est.restarts,
        est.converged,
        est.exhaustive,
        est.seed
    ));
    out
}

pub fn write_rnmp_estimate(path: &Path, est: &RnmpEstimate, config: Option<&Value>) -> Result<()> {
    let contents = match Format::from_path(path) {
        Format::Csv => rnmp_estimate_to_csv(est, config),
        Format::Json => rnmp_estimate_to_json(est, config),
    };
    fs::write(path, contents)?;
    Ok(())
}

pub fn rnmp_bounds_to_json(rep: &RnmpBoundsReport, config: Option<&Value>) -> String {
    let obj = attach_common(
        json!({
            "s": rep.s,
            "f": rep.f,
            "n": rep.n,
            "samples": rep.samples,
            "alpha": rep.alpha,
            "upper_bound": rep.upper_bound,
            "min_ratio": rep.min_ratio,
            "max_ratio": rep.max_ratio,
            "upper_violations": rep.upper_violations,
            "lower_violations": rep.lower_violations,
            "seed": rep.seed,
        }),
        "rnmp_bounds",
        config,
    );
    let mut s = to_json_string(&obj);
    s.push('\n');
    s
}

pub fn rnmp_bounds_to_csv(rep: &RnmpBoundsReport, config: Option<&Value>) -> String {
    let mut out = csv_preamble("rnmp_bounds", config);
    out.push_str(
        "s,f,n,samples,alpha,upper_bound,min_ratio,max_ratio,upper_violations,lower_violations,seed\n",
    );
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{},{}\n",
        rep.s,
        rep.f,
        rep.n,
        rep.samples,
        fmt_f64(rep.alpha),
        fmt_f64(rep.upper_bound),
        fmt_f64(rep.min_ratio),
        fmt_f64(rep.max_ratio),
        rep.upper_violations,
        rep.lower_violations,
        rep.seed
    ));
    out
}

pub fn write_rnmp_bounds(
    path: &Path,
    rep: &RnmpBoundsReport,
    config: Option<&Value>,
) -> Result<()> {
    let contents = match Format::from_path(path) {
        Format::Csv => rnmp_bounds_to_csv(rep, config),
        Format::Json => rnmp_bounds_to_json(rep, config),
    };
    fs::write(path, contents)?;
    Ok(())
}

pub fn stability_to_json(rep: &StabilityReport, config: Option<&Value>) -> String {
    let obj = attach_common(
        json!({
            "variant": rep.variant.to_string(),
            "n": rep.n,
            "num_pairs": rep.num_pairs,
            "c_lower": rep.c_lower,
            "violations": rep.violations,
            "min_ratio": rep.min_ratio,
            "max_ratio": rep.max_ratio,
            "mean_ratio": rep.mean_ratio,
            "seed": rep.seed,
        }),
        "stability",
        config,
    );
    let mut s = to_json_string(&obj);
    s.push('\n');
    s
}

pub fn stability_to_csv(rep: &StabilityReport, config: Option<&Value>) -> String {
    let mut out = csv_preamble("stability", config);
    out.push_str("variant,n,num_pairs,c_lower,violations,min_ratio,max_ratio,mean_ratio,seed\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{}\n",
        rep.variant,
        rep.n,
        rep.num_pairs,
        fmt_f64(rep.c_lower),
        rep.violations,
        fmt_f64(rep.min_ratio),
        fmt_f64(rep.max_ratio),
        fmt_f64(rep.mean_ratio),
        rep.seed
    ));
    out
}

pub fn write_stability(path: &Path, rep: &StabilityReport, config: Option<&Value>) -> Result<()> {
    let contents = match Format::from_path(path) {
        Format::Csv => stability_to_csv(rep, config),
        Format::Json => stability_to_json(rep, config),
    };
    fs::write(path, contents)?;
    Ok(())
}

pub fn sweep_to_json(rep: &NoiseSweepReport, config: Option<&Value>) -> String {
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            json!({
                "sigma_rel": r.sigma_rel,
                "trials": r.trials,
                "direct_mean": r.direct_mean,
                "direct_median": r.direct_median,
                "alternating_mean": r.alternating_mean,
                "alternating_median": r.alternating_median,
                "direct_wins": r.direct_wins,
            })
        })
        .collect();
    let obj = attach_common(
        json!({
            "variant": rep.variant.to_string(),
            "n": rep.n,
            "trials": rep.trials,
            "seed": rep.seed,
            "rows": rows,
        }),
        "noise_sweep",
        config,
    );
    let mut s = to_json_string(&obj);
    s.push('\n');
    s
}

pub fn sweep_to_csv(rep: &NoiseSweepReport, config: Option<&Value>) -> String {
    let mut out = csv_preamble("noise_sweep", config);
    out.push_str(&format!("# variant: {}\n", rep.variant));
    out.push_str(&format!("# n: {}\n", rep.n));
    out.push_str(&format!("# seed: {}\n", rep.seed));
    out.push_str(
        "sigma_rel,trials,direct_mean,direct_median,alternating_mean,alternating_median,direct_wins\n",
    );
    for r in &rep.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_f64(r.sigma_rel),
            r.trials,
            fmt_f64(r.direct_mean),
            fmt_f64(r.direct_median),
            fmt_f64(r.alternating_mean),
            fmt_f64(r.alternating_median),
            r.direct_wins
        ));
    }
    out
}

pub fn write_sweep(path: &Path, rep: &NoiseSweepReport, config: Option<&Value>) -> Result<()> {
    let contents = match Format::from_path(path) {
        Format::Csv => sweep_to_csv(rep, config),
        Format::Json => sweep_to_json(rep, config),
    };
    fs::write(path, contents)?;
    Ok(())
}
