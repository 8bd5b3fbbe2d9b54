//! End-to-end recovery recipes built from cuts, peaks and fits.

use super::cut::{take_cut, Axis, Component, Cut};
use super::diagonal::{cluster, fit_diagonal, optimize_fit_range, FitReport};
use super::models::{fit_cavity_model, fit_thick_model, CavityFitOptions};
use super::peaks::local_maxima;
use crate::error::{NrsError, Result};
use crate::ffc_core::FFCSpectrum;
use crate::response_models::AnalyzerSpec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagonalOptions {
    pub slope: f64,
    pub omega_a: f64,
    /// Cuts are taken for cut coordinates inside [lo, hi] (Δ for vertical, ν for horizontal).
    pub lo: f64,
    pub hi: f64,
    pub component: Component,
    pub min_prominence: f64,
    pub cluster_gap: f64,
    pub min_cluster: usize,
    pub n_trials: usize,
    pub step: usize,
}

impl Default for DiagonalOptions {
    fn default() -> Self {
        DiagonalOptions {
            slope: 1.0,
            omega_a: 0.0,
            lo: 60.0,
            hi: f64::INFINITY,
            component: Component::Real,
            min_prominence: 0.1,
            cluster_gap: 3.0,
            min_cluster: 20,
            n_trials: 20,
            step: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineEstimate {
    pub points: usize,
    pub simple: FitReport,
    pub optimized: FitReport,
    slope: f64,
    omega_a: f64,
}

impl LineEstimate {
    fn to_position(&self, offset: f64) -> f64 {
        self.omega_a - self.slope * offset
    }

    /// Line position from the fit over all points.
    pub fn position(&self) -> f64 {
        self.to_position(self.simple.value("offset"))
    }

    /// Line position from the range-optimized fit.
    pub fn position_optimized(&self) -> f64 {
        self.to_position(self.optimized.value("offset"))
    }
}

fn fit_clusters(points: &[(f64, f64)], o: &DiagonalOptions) -> Vec<LineEstimate> {
    let mut out: Vec<LineEstimate> = cluster(points, o.slope, o.cluster_gap)
        .into_iter()
        .filter(|c| c.len() >= o.min_cluster)
        .filter_map(|c| {
            let simple = fit_diagonal(&c, o.slope).ok()?;
            let optimized = optimize_fit_range(&c, o.slope, o.n_trials, o.step).ok()?;
            Some(LineEstimate {
                points: c.len(),
                simple,
                optimized,
                slope: o.slope,
                omega_a: o.omega_a,
            })
        })
        .collect();
    out.sort_by(|a, b| a.position().total_cmp(&b.position()));
    out
}

fn collect_points(ffc: &FFCSpectrum, axis: Axis, o: &DiagonalOptions) -> Result<Vec<(f64, f64)>> {
    let along = match axis {
        Axis::Nu => &ffc.deltas,
        Axis::Delta => &ffc.nus,
    };
    let pts: Vec<Vec<(f64, f64)>> = along
        .iter()
        .filter(|&&c| c >= o.lo && c <= o.hi)
        .map(|&c| {
            let cut = take_cut(ffc, axis, c, o.component)?;
            Ok(local_maxima(&cut.coords, &cut.profile(), o.min_prominence)
                .into_iter()
                .map(|p| match axis {
                    Axis::Nu => (cut.at, p.position),
                    Axis::Delta => (p.position, cut.at),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(pts.concat())
}

/// Diagonal lines from maxima of vertical cuts (fixed Δ, along ν).
pub fn diagonal_lines_vertical(
    ffc: &FFCSpectrum,
    o: &DiagonalOptions,
) -> Result<Vec<LineEstimate>> {
    Ok(fit_clusters(&collect_points(ffc, Axis::Nu, o)?, o))
}

/// Diagonal lines from maxima of horizontal cuts (fixed ν, along Δ).
pub fn diagonal_lines_horizontal(
    ffc: &FFCSpectrum,
    o: &DiagonalOptions,
) -> Result<Vec<LineEstimate>> {
    Ok(fit_clusters(&collect_points(ffc, Axis::Delta, o)?, o))
}

/// The estimate closest to `expected`, if any lies within `tol`.
pub fn nearest_line(lines: &[LineEstimate], expected: f64, tol: f64) -> Option<&LineEstimate> {
    lines
        .iter()
        .filter(|l| (l.position() - expected).abs() <= tol)
        .min_by(|a, b| {
            (a.position() - expected)
                .abs()
                .total_cmp(&(b.position() - expected).abs())
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThicknessOptions {
    pub delta_lo: f64,
    pub delta_hi: f64,
    /// Half-width of the ν search window around the diagonal.
    pub peak_window: f64,
    /// Half-width of the ν window handed to the model fit.
    pub fit_half_width: f64,
    pub min_prominence: f64,
    pub omega_a: f64,
}

impl Default for ThicknessOptions {
    fn default() -> Self {
        ThicknessOptions {
            delta_lo: 25.0,
            delta_hi: 175.0,
            peak_window: 15.0,
            fit_half_width: 20.0,
            min_prominence: 0.1,
            omega_a: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThicknessRecovery {
    /// Line position from the highest maximum of each cut.
    pub position_maxima: f64,
    /// Line position from the fitted x of each cut.
    pub position_model: f64,
    pub b_t_mean: f64,
    pub s_gamma_mean: f64,
    pub maxima_fit: FitReport,
    pub model_fit: FitReport,
    pub cut_fits: Vec<(f64, FitReport)>,
}

/// Single-line recovery from vertical cuts: simple maxima and thick-model fits.
pub fn thickness_recovery(ffc: &FFCSpectrum, o: &ThicknessOptions) -> Result<ThicknessRecovery> {
    let cols: Vec<f64> = ffc
        .deltas
        .iter()
        .copied()
        .filter(|&d| d >= o.delta_lo && d < o.delta_hi)
        .collect();
    let per: Vec<(Option<(f64, f64)>, Option<(f64, FitReport)>)> = cols
        .par_iter()
        .map(|&d| -> Result<_> {
            let cut = take_cut(ffc, Axis::Nu, d, Component::Real)?;
            let centre = d - o.omega_a;
            let near = cut.window(centre - o.peak_window, centre + o.peak_window);
            let y = cut.profile();
            let peak = local_maxima(&cut.coords, &y, o.min_prominence)
                .into_iter()
                .filter(|p| (p.position - centre).abs() < o.peak_window)
                .max_by(|a, b| a.height.total_cmp(&b.height))
                .map(|p| (d, p.position));
            if near.is_empty() {
                return Ok((peak, None));
            }
            let ny = near.profile();
            let k = (0..ny.len())
                .max_by(|&a, &b| ny[a].total_cmp(&ny[b]))
                .unwrap();
            let x0 = near.coords[k];
            let w = cut.window(x0 - o.fit_half_width, x0 + o.fit_half_width);
            let fit = fit_thick_model(&w, None).ok().map(|r| (d, r));
            Ok((peak, fit))
        })
        .collect::<Result<_>>()?;
    let maxima: Vec<(f64, f64)> = per.iter().filter_map(|p| p.0).collect();
    let cut_fits: Vec<(f64, FitReport)> = per
        .into_iter()
        .filter_map(|p| p.1)
        .filter(|(_, r)| r.value("x").is_finite())
        .collect();
    let xs: Vec<(f64, f64)> = cut_fits.iter().map(|(d, r)| (*d, r.value("x"))).collect();
    let maxima_fit = fit_diagonal(&maxima, 1.0)?;
    let model_fit = fit_diagonal(&xs, 1.0)?;
    let mean = |name: &str| {
        cut_fits.iter().map(|(_, r)| r.value(name)).sum::<f64>() / cut_fits.len() as f64
    };
    Ok(ThicknessRecovery {
        position_maxima: o.omega_a - maxima_fit.value("offset"),
        position_model: o.omega_a - model_fit.value("offset"),
        b_t_mean: mean("b_t"),
        s_gamma_mean: mean("S_gamma"),
        maxima_fit,
        model_fit,
        cut_fits,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CavityScanOptions {
    pub min_delta: f64,
    pub search: f64,
    pub n_trials: usize,
    pub step: usize,
    pub fit_trials: usize,
    pub fit_step: usize,
    pub upper_extra: usize,
    pub min_prominence: f64,
}

impl Default for CavityScanOptions {
    fn default() -> Self {
        CavityScanOptions {
            min_delta: 20.0,
            search: 25.0,
            n_trials: 40,
            step: 5,
            fit_trials: 8,
            fit_step: 10,
            upper_extra: 4,
            min_prominence: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollectiveParams {
    pub delta_cls: f64,
    pub delta_cls_stderr: f64,
    pub gamma_c: f64,
    /// Δ_CLS from the simple maxima of |cut|², for comparison.
    pub delta_cls_maxima: Option<f64>,
    pub fit_range: (f64, f64),
    pub theta_tag: Option<String>,
}

/// Δ_CLS and Γ_c of a cavity target from its background-corrected FFC.
pub fn extract_collective_params(
    ffc: &FFCSpectrum,
    analyzer: &AnalyzerSpec,
    o: &CavityScanOptions,
    theta_tag: Option<String>,
) -> Result<CollectiveParams> {
    let cols: Vec<f64> = ffc
        .deltas
        .iter()
        .copied()
        .filter(|&d| d >= o.min_delta)
        .collect();
    let per: Vec<(f64, Option<(f64, f64)>, Option<f64>)> = cols
        .par_iter()
        .map(|&d| -> Result<_> {
            let cut = take_cut(ffc, Axis::Nu, d, Component::Abs2)?;
            let centre = d - analyzer.omega_a;
            let fo = CavityFitOptions {
                expected: Some(centre),
                search: o.search,
                n_trials: o.fit_trials,
                step: o.fit_step,
                upper_extra: o.upper_extra,
                ..CavityFitOptions::default()
            };
            let fit = fit_cavity_model(&cut, &fo)
                .ok()
                .map(|r| (r.value("x"), r.value("S_gamma").abs()));
            let near: Cut = cut.window(centre - o.search, centre + o.search);
            let peak = local_maxima(&near.coords, &near.profile(), o.min_prominence)
                .into_iter()
                .max_by(|a, b| a.height.total_cmp(&b.height))
                .map(|p| p.position);
            Ok((d, fit, peak))
        })
        .collect::<Result<_>>()?;
    let xs: Vec<(f64, f64)> = per
        .iter()
        .filter_map(|(d, f, _)| f.map(|f| (*d, f.0)))
        .collect();
    let best = optimize_fit_range(&xs, 1.0, o.n_trials, o.step)?;
    let lo = best.fit_range.0;
    let widths: Vec<f64> = per
        .iter()
        .filter(|(d, _, _)| *d >= lo)
        .filter_map(|(_, f, _)| f.map(|f| f.1))
        .collect();
    let gamma_c = widths.iter().sum::<f64>() / widths.len() as f64 - analyzer.effective_width();
    if !(gamma_c > 0.0) {
        return Err(NrsError::FitFailed(format!(
            "recovered Γ_c = {gamma_c} is not positive"
        )));
    }
    let maxima: Vec<(f64, f64)> = per
        .iter()
        .filter_map(|(d, _, p)| p.map(|p| (*d, p)))
        .collect();
    let delta_cls_maxima = optimize_fit_range(&maxima, 1.0, o.n_trials, o.step)
        .ok()
        .map(|r| analyzer.omega_a - r.value("offset"));
    Ok(CollectiveParams {
        delta_cls: analyzer.omega_a - best.value("offset"),
        delta_cls_stderr: best.stderr("offset"),
        gamma_c,
        delta_cls_maxima,
        fit_range: best.fit_range,
        theta_tag,
    })
}
