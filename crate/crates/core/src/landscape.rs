//! Fidelity landscapes over the coupling-error plane.
//!
//! Gate fidelity of a sequence is swept over a uniform (delta_1, delta_2)
//! grid against the sequence's own zero-error propagator, and robustness
//! is condensed into threshold area fractions plus directional widths
//! along the two diagonals delta_1 = +/- delta_2. Widths are measured by
//! marching and bisecting on the propagator itself, not by interpolating
//! the grid, so they do not depend on grid resolution.

use crate::pulse::{gate_fidelity, propagate_sequence, ErrorPair, SequenceSpec};
use crate::seqfile;
use crate::smallmat::ComplexMatrix;
use crate::tol;
use crate::CoreError;
use rayon::prelude::*;
use std::fmt::Write as _;

/// Symmetric square grid configuration: both axes run over
/// [-range, range] with `points` samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridConfig {
    pub range: f64,
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            range: 0.5,
            points: 201,
        }
    }
}

impl GridConfig {
    fn validate(&self) -> Result<(), CoreError> {
        if self.range <= 0.0 || !self.range.is_finite() {
            return Err(CoreError::InvalidGrid(format!(
                "range must be positive and finite, got {}",
                self.range
            )));
        }
        if self.points < 2 {
            return Err(CoreError::InvalidGrid(format!(
                "need at least 2 points per axis, got {}",
                self.points
            )));
        }
        Ok(())
    }

    fn axis(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| -self.range + 2.0 * self.range * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Dense fidelity samples F(delta_1, delta_2).
#[derive(Clone, Debug)]
pub struct FidelityGrid {
    pub delta1_axis: Vec<f64>,
    pub delta2_axis: Vec<f64>,
    /// Row-major values: index [i * delta2_axis.len() + j] holds
    /// F(delta1_axis[i], delta2_axis[j]).
    pub values: Vec<f64>,
}

impl FidelityGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.delta2_axis.len() + j]
    }

    /// Fraction of grid points at or above the threshold.
    pub fn area_fraction(&self, threshold: f64) -> f64 {
        let hits = self.values.iter().filter(|&&v| v >= threshold).count();
        hits as f64 / self.values.len() as f64
    }

    /// CSV rows `delta1,delta2,fidelity`, row-major, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 48);
        out.push_str("delta1,delta2,fidelity\n");
        for (i, &d1) in self.delta1_axis.iter().enumerate() {
            for (j, &d2) in self.delta2_axis.iter().enumerate() {
                let _ = writeln!(out, "{:.11e},{:.11e},{:.11e}", d1, d2, self.value(i, j));
            }
        }
        out
    }
}

/// Sweeps gate fidelity over the error grid against the sequence's own
/// zero-error propagator.
pub fn sweep(s: &SequenceSpec, cfg: &GridConfig) -> Result<FidelityGrid, CoreError> {
    cfg.validate()?;
    let ideal = propagate_sequence(s, ErrorPair::default())?;
    let axis = cfg.axis();
    let rows = axis
        .par_iter()
        .map(|&d1| {
            axis.iter()
                .map(|&d2| {
                    let u = propagate_sequence(s, ErrorPair::new(d1, d2))?;
                    gate_fidelity(&u, &ideal)
                })
                .collect::<Result<Vec<f64>, CoreError>>()
        })
        .collect::<Result<Vec<_>, CoreError>>()?;
    Ok(FidelityGrid {
        delta1_axis: axis.clone(),
        delta2_axis: axis,
        values: rows.into_iter().flatten().collect(),
    })
}

/// Threshold-wise robustness metrics of a landscape.
#[derive(Clone, Debug)]
pub struct RobustnessReport {
    pub thresholds: Vec<f64>,
    /// Fraction of grid points with F >= threshold, per threshold.
    pub area_fraction: Vec<f64>,
    /// Contiguous half-width from the origin along delta_1 = delta_2.
    pub width_diag_plus: Vec<f64>,
    /// Contiguous half-width from the origin along delta_1 = -delta_2.
    pub width_diag_minus: Vec<f64>,
}

impl RobustnessReport {
    /// Key/value text block, one line per metric and threshold.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, &thr) in self.thresholds.iter().enumerate() {
            let _ = writeln!(out, "area_fraction[{thr}] = {:.6}", self.area_fraction[k]);
            let _ = writeln!(
                out,
                "width_diag_plus[{thr}] = {:.6}",
                self.width_diag_plus[k]
            );
            let _ = writeln!(
                out,
                "width_diag_minus[{thr}] = {:.6}",
                self.width_diag_minus[k]
            );
        }
        out
    }
}

fn diagonal_fidelity(
    s: &SequenceSpec,
    ideal: &ComplexMatrix,
    t: f64,
    sign: f64,
) -> Result<f64, CoreError> {
    let u = propagate_sequence(s, ErrorPair::new(t, sign * t))?;
    gate_fidelity(&u, ideal)
}

/// Marches outward from the origin until the fidelity first drops below
/// the threshold, then bisects the crossing to the width tolerance.
/// Returns `bound` when no crossing exists within [0, bound].
fn directional_width(
    s: &SequenceSpec,
    ideal: &ComplexMatrix,
    sign: f64,
    threshold: f64,
    bound: f64,
) -> Result<f64, CoreError> {
    let steps = 100;
    let mut one_sided = [bound, bound];
    for (side, orient) in [1.0f64, -1.0].iter().enumerate() {
        let mut prev = 0.0;
        let mut crossing = None;
        for k in 1..=steps {
            let t = orient * bound * k as f64 / steps as f64;
            if diagonal_fidelity(s, ideal, t, sign)? < threshold {
                crossing = Some((prev, t));
                break;
            }
            prev = t;
        }
        if let Some((mut good, mut bad)) = crossing {
            while (good - bad).abs() > tol::WIDTH_BISECT {
                let mid = 0.5 * (good + bad);
                if diagonal_fidelity(s, ideal, mid, sign)? >= threshold {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            one_sided[side] = good.abs();
        }
    }
    Ok(one_sided[0].min(one_sided[1]))
}

/// Condenses a grid into per-threshold area fractions and directional
/// widths. Widths are recomputed from the sequence propagator.
pub fn robustness_report(
    s: &SequenceSpec,
    grid: &FidelityGrid,
    thresholds: &[f64],
) -> Result<RobustnessReport, CoreError> {
    if thresholds.is_empty() {
        return Err(CoreError::InvalidGrid("empty threshold list".into()));
    }
    if thresholds
        .iter()
        .any(|&t| !(0.0..1.0).contains(&t) || t == 0.0)
    {
        return Err(CoreError::InvalidGrid(format!(
            "thresholds must lie in (0, 1): {thresholds:?}"
        )));
    }
    let ideal = propagate_sequence(s, ErrorPair::default())?;
    let bound = grid
        .delta1_axis
        .iter()
        .chain(grid.delta2_axis.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    let mut report = RobustnessReport {
        thresholds: thresholds.to_vec(),
        area_fraction: Vec::with_capacity(thresholds.len()),
        width_diag_plus: Vec::with_capacity(thresholds.len()),
        width_diag_minus: Vec::with_capacity(thresholds.len()),
    };
    for &thr in thresholds {
        report.area_fraction.push(grid.area_fraction(thr));
        report
            .width_diag_plus
            .push(directional_width(s, &ideal, 1.0, thr, bound)?);
        report
            .width_diag_minus
            .push(directional_width(s, &ideal, -1.0, thr, bound)?);
    }
    Ok(report)
}

/// Companion metadata document for an emitted grid CSV: the sequence in
/// its key/value form plus the grid geometry.
pub fn grid_metadata(s: &SequenceSpec, cfg: &GridConfig) -> String {
    let mut out = seqfile::serialize(s);
    let _ = writeln!(out, "grid_range = {:.16e}", cfg.range);
    let _ = writeln!(out, "grid_points = {}", cfg.points);
    out
}
