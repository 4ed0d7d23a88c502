//! CSV and JSON result files.
//!
//! Floats are written with 12 significant digits so that files are stable
//! across runs and platforms.

use std::fs;
use std::path::Path;

use crate::config::OutputFormat;
use crate::experiment::{HarnessError, ResultRecord, Summary};

pub const CSV_HEADER: &str = "strategy,M,Ps_dbm,n,theta_b,beta,Rb,Re,Rs,iterations,converged";

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn fmt_f(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        return "0".to_string();
    }
    format!("{r:?}")
}

pub fn to_csv_string(records: &[ResultRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let row = [
            r.strategy.clone(),
            r.m.to_string(),
            fmt_f(r.ps_dbm),
            r.n.to_string(),
            fmt_f(r.theta_b),
            fmt_f(r.beta),
            fmt_f(r.rb),
            fmt_f(r.re),
            fmt_f(r.rs),
            r.iterations.to_string(),
            r.converged.to_string(),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn field<T: std::str::FromStr>(line: usize, name: &str, raw: &str) -> Result<T, HarnessError> {
    raw.parse()
        .map_err(|_| HarnessError::Parse(format!("line {line}: bad {name} `{raw}`")))
}

/// Parses a CSV written by [`to_csv_string`].
pub fn parse_csv(text: &str) -> Result<Vec<ResultRecord>, HarnessError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => {
            return Err(HarnessError::Parse(
                "missing or unexpected header".to_string(),
            ))
        }
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let line = i + 1;
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 11 {
                return Err(HarnessError::Parse(format!(
                    "line {line}: expected 11 fields, got {}",
                    f.len()
                )));
            }
            Ok(ResultRecord {
                strategy: f[0].to_string(),
                m: field(line, "M", f[1])?,
                ps_dbm: field(line, "Ps_dbm", f[2])?,
                n: field(line, "n", f[3])?,
                theta_b: field(line, "theta_b", f[4])?,
                beta: field(line, "beta", f[5])?,
                rb: field(line, "Rb", f[6])?,
                re: field(line, "Re", f[7])?,
                rs: field(line, "Rs", f[8])?,
                iterations: field(line, "iterations", f[9])?,
                converged: field(line, "converged", f[10])?,
            })
        })
        .collect()
}

pub fn to_json_string(records: &[ResultRecord]) -> String {
    let rounded: Vec<ResultRecord> = records
        .iter()
        .map(|r| ResultRecord {
            ps_dbm: round_sig(r.ps_dbm),
            theta_b: round_sig(r.theta_b),
            beta: round_sig(r.beta),
            rb: round_sig(r.rb),
            re: round_sig(r.re),
            rs: round_sig(r.rs),
            ..r.clone()
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rounded).expect("records serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Vec<ResultRecord>, HarnessError> {
    serde_json::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))
}

pub fn render(records: &[ResultRecord], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => to_csv_string(records),
        OutputFormat::Json => to_json_string(records),
    }
}

pub fn write_results(
    records: &[ResultRecord],
    format: OutputFormat,
    path: &Path,
) -> Result<(), HarnessError> {
    fs::write(path, render(records, format)).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Human-readable table of flight aggregates.
pub fn summary_table(summaries: &[Summary]) -> String {
    let mut out = format!(
        "{:<14} {:>4} {:>8} {:>12} {:>14} {:>14} {:>8} {:>6}\n",
        "strategy", "M", "Ps_dbm", "mean_SR", "SSR_clamped", "SSR_total", "mean_it", "no_cvg"
    );
    for s in summaries {
        out.push_str(&format!(
            "{:<14} {:>4} {:>8} {:>12.6} {:>14.6} {:>14.6} {:>8.2} {:>6}\n",
            s.strategy,
            s.m,
            s.ps_dbm,
            s.mean_sr,
            s.ssr_clamped,
            s.ssr_total,
            s.mean_iterations,
            s.not_converged
        ));
    }
    out
}
