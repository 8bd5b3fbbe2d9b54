//! Frequency-frequency correlation spectra: gated time transforms of I(t, Δ).

use crate::error::{NrsError, Result};
use crate::response_models::{AnalyzerSpec, TargetModel};
use crate::two_stage::{
    phase_difference_spectra, IntensityKind, Ordering, PhaseCombo, TimeFreqIntensity, TimeGrid,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    pub t1: f64,
    pub t2: f64,
}

impl Gate {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if !(t1.is_finite() && t2.is_finite() && t1 >= 0.0 && t2 > t1) {
            return Err(NrsError::InvalidModel(format!(
                "gate needs 0 <= t1 < t2, got [{t1}, {t2}]"
            )));
        }
        Ok(Gate { t1, t2 })
    }

    /// Drops the prompt bin: t₁ = t₀ + 2dt, t₂ = grid end.
    pub fn default_for(grid: &TimeGrid) -> Self {
        Gate {
            t1: grid.t0 + 2.0 * grid.dt,
            t2: grid.end(),
        }
    }

    pub fn check(&self, grid: &TimeGrid) -> Result<()> {
        Gate::new(self.t1, self.t2)?;
        let slack = 1e-9 * grid.dt;
        if self.t2 > grid.end() + slack || self.t1 < grid.t0 - slack {
            return Err(NrsError::OutsideGrid {
                at: if self.t2 > grid.end() {
                    self.t2
                } else {
                    self.t1
                },
                lo: grid.t0,
                hi: grid.end(),
            });
        }
        Ok(())
    }

    /// Trapezoid weights of the samples inside [t₁, t₂], halved at both edges.
    pub fn weights(&self, grid: &TimeGrid) -> Result<Vec<(usize, f64)>> {
        self.check(grid)?;
        let tol = 1e-9 * grid.dt;
        let idx: Vec<usize> = (0..grid.n)
            .filter(|&i| grid.t(i) >= self.t1 - tol && grid.t(i) <= self.t2 + tol)
            .collect();
        if idx.len() < 2 {
            return Err(NrsError::TooFewPoints {
                need: 2,
                got: idx.len(),
            });
        }
        let last = idx.len() - 1;
        Ok(idx
            .into_iter()
            .enumerate()
            .map(|(k, i)| {
                (
                    i,
                    if k == 0 || k == last {
                        0.5 * grid.dt
                    } else {
                        grid.dt
                    },
                )
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Raw,
    Bc,
    Sa,
    St,
    Inv,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Raw => "raw",
            Provenance::Bc => "bc",
            Provenance::Sa => "sa",
            Provenance::St => "st",
            Provenance::Inv => "inv",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        [
            Provenance::Raw,
            Provenance::Bc,
            Provenance::Sa,
            Provenance::St,
            Provenance::Inv,
        ]
        .into_iter()
        .find(|p| p.as_str() == s)
        .ok_or_else(|| NrsError::InvalidModel(format!("unknown provenance {s:?}")))
    }
}

/// Complex 𝓘(ν, Δ), column-major: column j is the spectrum at `deltas[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FFCSpectrum {
    pub nus: Vec<f64>,
    pub deltas: Vec<f64>,
    pub values: Vec<Complex64>,
    pub gate: Gate,
    pub provenance: Provenance,
}

impl FFCSpectrum {
    pub fn new(
        nus: Vec<f64>,
        deltas: Vec<f64>,
        values: Vec<Complex64>,
        gate: Gate,
        provenance: Provenance,
    ) -> Result<Self> {
        check_nus(&nus, f64::INFINITY)?;
        if values.len() != nus.len() * deltas.len() {
            return Err(NrsError::GridMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                nus.len(),
                deltas.len()
            )));
        }
        if values
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(NrsError::Domain("FFC values must be finite".into()));
        }
        Ok(FFCSpectrum {
            nus,
            deltas,
            values,
            gate,
            provenance,
        })
    }

    pub fn n_nu(&self) -> usize {
        self.nus.len()
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.values[j * self.nus.len()..(j + 1) * self.nus.len()]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.nus.len() + i]
    }

    pub fn row(&self, i: usize) -> Vec<Complex64> {
        (0..self.deltas.len()).map(|j| self.get(i, j)).collect()
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = p;
        self
    }

    /// Elementwise difference; both spectra must share their grids.
    pub fn sub(&self, other: &FFCSpectrum) -> Result<FFCSpectrum> {
        if self.nus != other.nus || self.deltas != other.deltas {
            return Err(NrsError::GridMismatch("FFC grids differ".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FFCSpectrum {
            values,
            ..self.clone()
        })
    }
}

fn check_nus(nus: &[f64], nyquist: f64) -> Result<()> {
    if nus.is_empty() {
        return Err(NrsError::InvalidModel("empty nu grid".into()));
    }
    if nus.iter().any(|&v| !(v.is_finite() && v >= 0.0)) || nus.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(NrsError::InvalidModel(
            "nu grid must be non-negative and strictly increasing".into(),
        ));
    }
    let top = nus[nus.len() - 1];
    if top >= nyquist {
        return Err(NrsError::Resolution(format!(
            "nu = {top} is beyond the Nyquist limit {nyquist}"
        )));
    }
    Ok(())
}

/// Uniform grid `start, start+step, ...` up to `stop` inclusive.
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|k| start + k as f64 * step).collect()
}

fn transform_columns(
    grid: &TimeGrid,
    cols: &[&[f64]],
    nus: &[f64],
    gate: &Gate,
    sign: f64,
) -> Result<Vec<Complex64>> {
    check_nus(nus, grid.nyquist())?;
    let w = gate.weights(grid)?;
    let table: Vec<Vec<Complex64>> = nus
        .iter()
        .map(|&nu| {
            w.iter()
                .map(|&(i, wt)| Complex64::from_polar(wt, sign * nu * grid.t(i)))
                .collect()
        })
        .collect();
    let out: Vec<Vec<Complex64>> = cols
        .par_iter()
        .map(|col| {
            table
                .iter()
                .map(|ph| ph.iter().zip(&w).map(|(p, &(i, _))| p * col[i]).sum())
                .collect()
        })
        .collect();
    Ok(out.concat())
}

/// values[ν, Δ] = Σ_{t∈[t₁,t₂]} e^{iνt} I(t, Δ) dt with trapezoid edge weights.
pub fn ffc_transform(i: &TimeFreqIntensity, nus: &[f64], gate: &Gate) -> Result<FFCSpectrum> {
    let cols: Vec<&[f64]> = (0..i.n_delta()).map(|j| i.column(j)).collect();
    let values = transform_columns(&i.grid, &cols, nus, gate, 1.0)?;
    let prov = match i.kind {
        IntensityKind::BackgroundCorrected => Provenance::Bc,
        IntensityKind::D1 => Provenance::Sa,
        IntensityKind::D2 => Provenance::St,
        _ => Provenance::Raw,
    };
    FFCSpectrum::new(nus.to_vec(), i.deltas.clone(), values, *gate, prov)
}

/// Same transform with e^{−iνt}; the complex conjugate of `ffc_transform`.
pub fn ffc_transform_negative(
    i: &TimeFreqIntensity,
    nus: &[f64],
    gate: &Gate,
) -> Result<FFCSpectrum> {
    let cols: Vec<&[f64]> = (0..i.n_delta()).map(|j| i.column(j)).collect();
    let values = transform_columns(&i.grid, &cols, nus, gate, -1.0)?;
    FFCSpectrum::new(
        nus.to_vec(),
        i.deltas.clone(),
        values,
        *gate,
        Provenance::Raw,
    )
}

/// Transform of a single trace.
pub fn ffc_trace(
    samples: &[f64],
    grid: &TimeGrid,
    nus: &[f64],
    gate: &Gate,
) -> Result<Vec<Complex64>> {
    if samples.len() != grid.n {
        return Err(NrsError::GridMismatch(
            "trace length differs from grid".into(),
        ));
    }
    transform_columns(grid, &[samples], nus, gate, 1.0)
}

/// δ_{t1,t2}(ν) = (sin νt₂ − sin νt₁)/ν.
pub fn gate_filter(nu: f64, t1: f64, t2: f64) -> f64 {
    if (nu * t2).abs() < 1e-4 && (nu * t1).abs() < 1e-4 {
        // sin x/ν ≈ t − ν²t³/6
        let c = |t: f64| t - nu * nu * t * t * t / 6.0;
        return c(t2) - c(t1);
    }
    ((nu * t2).sin() - (nu * t1).sin()) / nu
}

fn broadcast<'a>(
    i: &'a TimeFreqIntensity,
    j: usize,
    full: &TimeFreqIntensity,
) -> Result<&'a [f64]> {
    if i.grid != full.grid {
        return Err(NrsError::GridMismatch(
            "single-stage intensity on a different time grid".into(),
        ));
    }
    match i.n_delta() {
        1 => Ok(i.column(0)),
        n if n == full.n_delta() => Ok(i.column(j)),
        n => Err(NrsError::GridMismatch(format!(
            "{n} single-stage columns for {} detunings",
            full.n_delta()
        ))),
    }
}

/// I − |α_t|²I_a − |α_a|²I_t, column by column.
pub fn background_corrected_intensity(
    full: &TimeFreqIntensity,
    target_only: &TimeFreqIntensity,
    analyzer_only: &TimeFreqIntensity,
    alpha_a: Complex64,
    alpha_t: Complex64,
) -> Result<TimeFreqIntensity> {
    let (ka, kt) = (alpha_t.norm_sqr(), alpha_a.norm_sqr());
    let mut values = Vec::with_capacity(full.values.len());
    for j in 0..full.n_delta() {
        let (ia, it) = (
            broadcast(analyzer_only, j, full)?,
            broadcast(target_only, j, full)?,
        );
        values.extend(
            full.column(j)
                .iter()
                .zip(ia)
                .zip(it)
                .map(|((x, a), t)| x - ka * a - kt * t),
        );
    }
    Ok(TimeFreqIntensity {
        values,
        prompt_power: vec![0.0; full.n_delta()],
        kind: IntensityKind::BackgroundCorrected,
        ..full.clone()
    })
}

pub fn background_correct_subtract(
    full: &TimeFreqIntensity,
    target_only: &TimeFreqIntensity,
    analyzer_only: &TimeFreqIntensity,
    alpha_a: Complex64,
    alpha_t: Complex64,
    nus: &[f64],
    gate: &Gate,
) -> Result<FFCSpectrum> {
    let bc = background_corrected_intensity(full, target_only, analyzer_only, alpha_a, alpha_t)?;
    Ok(ffc_transform(&bc, nus, gate)?.with_provenance(Provenance::Bc))
}

fn nearest(xs: &[f64], x: f64) -> usize {
    let mut best = 0;
    for (k, v) in xs.iter().enumerate() {
        if (v - x).abs() < (xs[best] - x).abs() {
            best = k;
        }
    }
    best
}

/// Builds a background column from the largest-|Δ| column below ν₀ and the
/// Δ = 0 column above it, and subtracts it from every column.
pub fn background_estimate_from_ffc(ffc: &FFCSpectrum, nu0: f64) -> Result<FFCSpectrum> {
    let (lo, hi) = (ffc.nus[0], ffc.nus[ffc.n_nu() - 1]);
    if !(nu0 >= lo && nu0 <= hi) {
        return Err(NrsError::OutsideGrid { at: nu0, lo, hi });
    }
    let jmax = (0..ffc.deltas.len())
        .max_by(|&a, &b| ffc.deltas[a].abs().total_cmp(&ffc.deltas[b].abs()))
        .ok_or_else(|| NrsError::InvalidModel("FFC without detunings".into()))?;
    let j0 = nearest(&ffc.deltas, 0.0);
    let bg: Vec<Complex64> = (0..ffc.n_nu())
        .map(|i| {
            if ffc.nus[i] < nu0 {
                ffc.get(i, jmax)
            } else {
                ffc.get(i, j0)
            }
        })
        .collect();
    let mut out = ffc.clone();
    for j in 0..ffc.deltas.len() {
        let n = ffc.n_nu();
        for (v, b) in out.values[j * n..(j + 1) * n].iter_mut().zip(&bg) {
            *v -= b;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseVariant {
    Sa,
    St,
    Inv,
}

/// Half the largest |Δ|; the background-split default.
pub fn default_nu0(deltas: &[f64]) -> f64 {
    0.5 * deltas.iter().fold(0.0_f64, |m, d| m.max(d.abs()))
}

#[allow(clippy::too_many_arguments)]
pub fn phase_combined_ffc(
    target: &TargetModel,
    analyzer: &AnalyzerSpec,
    deltas: &[f64],
    grid: &TimeGrid,
    gate: &Gate,
    nus: &[f64],
    which: PhaseVariant,
    nu0: f64,
) -> Result<FFCSpectrum> {
    let combo = match which {
        PhaseVariant::Sa => PhaseCombo::Difference(Ordering::AnalyzerFirst),
        PhaseVariant::St => PhaseCombo::Difference(Ordering::TargetFirst),
        PhaseVariant::Inv => PhaseCombo::Sum,
    };
    let i = phase_difference_spectra(target, analyzer, deltas, grid, 0.0, combo)?;
    phase_combined_from_intensity(&i, nus, gate, nu0)
}

/// FFC of a D₁, D₂ or S intensity; the S branch is negated and background-subtracted.
pub fn phase_combined_from_intensity(
    i: &TimeFreqIntensity,
    nus: &[f64],
    gate: &Gate,
    nu0: f64,
) -> Result<FFCSpectrum> {
    let f = ffc_transform(i, nus, gate)?;
    match i.kind {
        IntensityKind::D1 => Ok(f.with_provenance(Provenance::Sa)),
        IntensityKind::D2 => Ok(f.with_provenance(Provenance::St)),
        IntensityKind::Sum => {
            let neg = FFCSpectrum {
                values: f.values.iter().map(|v| -v).collect(),
                ..f
            };
            Ok(background_estimate_from_ffc(&neg, nu0)?.with_provenance(Provenance::Inv))
        }
        k => Err(NrsError::InvalidModel(format!(
            "{k} intensity is not a phase combination"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> TimeGrid {
        TimeGrid::new(0.0, 0.01, 1000).unwrap()
    }

    fn tfi(cols: Vec<Vec<f64>>) -> TimeFreqIntensity {
        let d: Vec<f64> = (0..cols.len()).map(|k| k as f64).collect();
        TimeFreqIntensity::from_columns(grid(), d, cols, 0.0, IntensityKind::Full).unwrap()
    }

    #[test]
    fn zero_intensity_zero_ffc() {
        let f = ffc_transform(
            &tfi(vec![vec![0.0; 1000]]),
            &[0.0, 3.0],
            &Gate::default_for(&grid()),
        )
        .unwrap();
        assert!(f.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn nu_zero_row_is_integral() {
        let g = grid();
        let col: Vec<f64> = g.times().map(|t| (-t).exp()).collect();
        let gate = Gate::new(1.0, 8.0).unwrap();
        let f = ffc_transform(&tfi(vec![col.clone()]), &[0.0], &gate).unwrap();
        let w = gate.weights(&g).unwrap();
        let s: f64 = w.iter().map(|&(i, wt)| wt * col[i]).sum();
        assert_eq!(f.get(0, 0).im, 0.0);
        assert!((f.get(0, 0).re - s).abs() < 1e-14);
        assert!((s - ((-1.0f64).exp() - (-8.0f64).exp())).abs() < 1e-4);
    }

    #[test]
    fn nyquist_and_gate_errors() {
        let g = grid();
        let i = tfi(vec![vec![1.0; 1000]]);
        assert!(matches!(
            ffc_transform(&i, &[g.nyquist() + 1.0], &Gate::default_for(&g)),
            Err(NrsError::Resolution(_))
        ));
        assert!(Gate::new(2.0, 1.0).is_err());
        assert!(ffc_transform(&i, &[1.0], &Gate::new(0.0, 20.0).unwrap()).is_err());
    }

    #[test]
    fn gate_filter_limits() {
        assert!((gate_filter(0.0, 0.5, 2.0) - 1.5).abs() < 1e-15);
        assert!((gate_filter(1e-9, 0.5, 2.0) - 1.5).abs() < 1e-12);
        let nu = 3.0;
        assert!(gate_filter(nu, 0.0, std::f64::consts::PI / nu).abs() < 1e-15);
    }

    #[test]
    fn background_estimate_boundaries() {
        let nus = vec![0.0, 1.0, 2.0];
        let deltas = vec![-1.0, 0.0, 3.0];
        let vals: Vec<Complex64> = (0..9)
            .map(|k| Complex64::new(k as f64, -(k as f64)))
            .collect();
        let f = FFCSpectrum::new(
            nus,
            deltas,
            vals,
            Gate::new(0.0, 1.0).unwrap(),
            Provenance::Raw,
        )
        .unwrap();
        let z = background_estimate_from_ffc(&f, 0.0).unwrap();
        for i in 0..3 {
            assert_eq!(z.get(i, 1), Complex64::new(0.0, 0.0));
        }
        let h = background_estimate_from_ffc(&f, 1.5).unwrap();
        assert_eq!(h.get(0, 2), Complex64::new(0.0, 0.0));
        assert_eq!(h.get(2, 1), Complex64::new(0.0, 0.0));
        assert!(background_estimate_from_ffc(&f, 5.0).is_err());
    }

    #[test]
    fn uniform_grid_endpoints() {
        let g = uniform_grid(0.0, 200.0, 0.5);
        assert_eq!(g.len(), 401);
        assert_eq!(g[400], 200.0);
    }
}
