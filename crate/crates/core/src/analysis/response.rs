//! Complex response reconstruction, late-time integration and quantum beats.

use super::cut::{take_cut, Axis, Component};
use super::peaks::{local_maxima, prominence};
use crate::error::{NrsError, Result};
use crate::ffc_core::{FFCSpectrum, Gate, Provenance};
use crate::two_stage::TimeFreqIntensity;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconstruction {
    pub axis: Axis,
    pub at: f64,
    pub coords: Vec<f64>,
    pub values: Vec<Complex64>,
    pub amplitude: Vec<f64>,
    pub phase: Vec<f64>,
    /// Set when the cut lies inside the resonant region, where the cut is
    /// not a clean cross-correlation of analyzer and target responses.
    pub warning: bool,
}

/// Removes 2π jumps larger than π between neighbours.
pub fn unwrap_phase(phase: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phase.len());
    let mut shift = 0.0;
    for (k, &p) in phase.iter().enumerate() {
        if k > 0 {
            let d = p - phase[k - 1];
            if d > std::f64::consts::PI {
                shift -= std::f64::consts::TAU;
            } else if d < -std::f64::consts::PI {
                shift += std::f64::consts::TAU;
            }
        }
        out.push(p + shift);
    }
    out
}

/// Complex cut ≈ (Ŝ_a ⋆ Ŝ_t)(ν) up to I₀/2π, with amplitude and unwrapped phase.
///
/// `resonances` are the target line positions; a cut closer than `min_separation`
/// to any of them is flagged unless the spectrum is a phase-combined St spectrum.
pub fn reconstruct_response(
    ffc: &FFCSpectrum,
    axis: Axis,
    at: f64,
    resonances: &[f64],
    min_separation: f64,
) -> Result<Reconstruction> {
    let cut = take_cut(ffc, axis, at, Component::Real)?;
    let near = resonances
        .iter()
        .any(|w| (cut.at - w).abs() < min_separation);
    let phase: Vec<f64> = cut.values.iter().map(|z| z.arg()).collect();
    Ok(Reconstruction {
        axis,
        at: cut.at,
        amplitude: cut.values.iter().map(|z| z.norm()).collect(),
        phase: unwrap_phase(&phase),
        coords: cut.coords,
        values: cut.values,
        warning: near && ffc.provenance != Provenance::St,
    })
}

/// ∫_{t1}^{t2} I(t, Δ) dt per detuning (trapezoid).
pub fn late_time_integrate(i: &TimeFreqIntensity, t1: f64, t2: f64) -> Result<Vec<f64>> {
    let w = Gate::new(t1, t2)?.weights(&i.grid)?;
    Ok((0..i.n_delta())
        .map(|j| {
            let c = i.column(j);
            w.iter().map(|&(k, wt)| wt * c[k]).sum()
        })
        .collect())
}

/// max |a/max a − b/max b|.
pub fn normalized_shape_mismatch(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(NrsError::GridMismatch("spectra differ in length".into()));
    }
    let (ma, mb) = (
        a.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        b.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    if !(ma > 0.0 && mb > 0.0) {
        return Err(NrsError::Domain("spectra need a positive maximum".into()));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x / ma - y / mb).abs())
        .fold(0.0, f64::max))
}

/// Mean |𝓘| over detunings: the Δ-independent part of a single-stage spectrum.
pub fn row_profile(ffc: &FFCSpectrum) -> Vec<f64> {
    let m = ffc.deltas.len() as f64;
    (0..ffc.n_nu())
        .map(|i| {
            (0..ffc.deltas.len())
                .map(|j| ffc.get(i, j).norm())
                .sum::<f64>()
                / m
        })
        .collect()
}

/// Largest prominence of a local maximum of `y` within ±`width` of `nu0`; 0 if none.
pub fn row_prominence(nus: &[f64], y: &[f64], nu0: f64, width: f64) -> f64 {
    let mut best = 0.0_f64;
    for i in 1..y.len().saturating_sub(1) {
        if (nus[i] - nu0).abs() <= width && y[i] > y[i - 1] && y[i] >= y[i + 1] {
            best = best.max(prominence(y, i));
        }
    }
    best
}

/// ν positions of horizontal rows whose prominence exceeds `min_rel` of the strongest.
pub fn quantum_beat_lines(ffc: &FFCSpectrum, min_rel: f64) -> Vec<f64> {
    let y = row_profile(ffc);
    let peaks = local_maxima(&ffc.nus, &y, 0.0);
    let top = peaks.iter().map(|p| p.prominence).fold(0.0, f64::max);
    peaks
        .into_iter()
        .filter(|p| p.prominence > min_rel * top && p.position > 0.0)
        .map(|p| p.position)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_stage::{IntensityKind, TimeGrid};

    #[test]
    fn unwrap_removes_jumps() {
        let raw: Vec<f64> = (0..50)
            .map(|k| {
                let p = 0.4 * k as f64;
                (p + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI
            })
            .collect();
        let u = unwrap_phase(&raw);
        for (k, v) in u.iter().enumerate() {
            assert!((v - 0.4 * k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_intensity_integral() {
        let g = TimeGrid::new(0.0, 0.01, 1000).unwrap();
        let i = TimeFreqIntensity::from_columns(
            g,
            vec![0.0, 1.0],
            vec![vec![3.0; 1000]; 2],
            0.0,
            IntensityKind::Full,
        )
        .unwrap();
        let r = late_time_integrate(&i, 2.0, 7.5).unwrap();
        assert!(r.iter().all(|v| (v - 3.0 * 5.5).abs() < 1e-12));
        assert!(late_time_integrate(&i, 2.0, 50.0).is_err());
    }

    #[test]
    fn mismatch_is_scale_free() {
        let a = [1.0, 2.0, 4.0];
        let b = [2.0, 4.0, 8.0];
        assert_eq!(normalized_shape_mismatch(&a, &b).unwrap(), 0.0);
        assert!((normalized_shape_mismatch(&a, &[1.0, 1.0, 1.0]).unwrap() - 0.75).abs() < 1e-15);
    }
}
