//! Plain-text key/value serialization of pulse sequences.
//!
//! Documents look like
//!
//! ```text
//! N = 3
//! omega_ratio = 1.0000000000000000e0
//! alphas = 0.0000000000000000e0, 4.1887902047863905e0, 0.0000000000000000e0
//! betas = 0.0000000000000000e0, 2.0943951023931953e0, 0.0000000000000000e0
//! ```
//!
//! Angles are radians; strengths are normalized to Omega_1 = 1 with
//! `omega_ratio` = Omega_2 / Omega_1. Lines starting with '#' and unknown
//! keys are ignored, so grid metadata documents parse as sequences too.

use crate::pulse::SequenceSpec;
use crate::CoreError;
use std::fmt::Write as _;
use std::path::Path;

pub fn serialize(s: &SequenceSpec) -> String {
    let fmt_list = |vals: &[f64]| {
        vals.iter()
            .map(|v| format!("{v:.16e}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut out = String::new();
    let _ = writeln!(out, "N = {}", s.len());
    let _ = writeln!(out, "omega_ratio = {:.16e}", s.ratio());
    let _ = writeln!(out, "alphas = {}", fmt_list(s.alphas()));
    let _ = writeln!(out, "betas = {}", fmt_list(s.betas()));
    out
}

fn parse_list(value: &str, key: &str) -> Result<Vec<f64>, CoreError> {
    value
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CoreError::Parse(format!("bad float '{}' in {key}", tok.trim())))
        })
        .collect()
}

pub fn parse(text: &str) -> Result<SequenceSpec, CoreError> {
    let mut n: Option<usize> = None;
    let mut ratio: Option<f64> = None;
    let mut alphas: Option<Vec<f64>> = None;
    let mut betas: Option<Vec<f64>> = None;
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CoreError::Parse(format!(
                "expected 'key = value', got '{line}'"
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "N" => {
                n = Some(
                    value
                        .parse()
                        .map_err(|_| CoreError::Parse(format!("bad pulse count '{value}'")))?,
                );
            }
            "omega_ratio" => {
                ratio = Some(
                    value
                        .parse()
                        .map_err(|_| CoreError::Parse(format!("bad omega_ratio '{value}'")))?,
                );
            }
            "alphas" => alphas = Some(parse_list(value, "alphas")?),
            "betas" => betas = Some(parse_list(value, "betas")?),
            _ => {}
        }
    }
    let n = n.ok_or_else(|| CoreError::Parse("missing key N".into()))?;
    let ratio = ratio.ok_or_else(|| CoreError::Parse("missing key omega_ratio".into()))?;
    let alphas = alphas.ok_or_else(|| CoreError::Parse("missing key alphas".into()))?;
    let betas = betas.ok_or_else(|| CoreError::Parse("missing key betas".into()))?;
    if alphas.len() != n || betas.len() != n {
        return Err(CoreError::Parse(format!(
            "N = {n} but alphas/betas have {}/{} entries",
            alphas.len(),
            betas.len()
        )));
    }
    SequenceSpec::new(1.0, ratio, alphas, betas)
        .map_err(|e| CoreError::Parse(format!("invalid sequence: {e}")))
}

pub fn write_file(s: &SequenceSpec, path: &Path) -> Result<(), CoreError> {
    Ok(std::fs::write(path, serialize(s))?)
}

pub fn read_file(path: &Path) -> Result<SequenceSpec, CoreError> {
    parse(&std::fs::read_to_string(path)?)
}
