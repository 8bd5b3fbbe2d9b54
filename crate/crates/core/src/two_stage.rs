//! Outgoing field and intensity of the analyzer + target chain.

use crate::error::{NrsError, Result};
use crate::response_models::{analyzer_resonant, AnalyzerSpec, TargetModel};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    #[serde(default)]
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        let g = TimeGrid { t0, dt, n };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0.is_finite() && self.t0 >= 0.0) {
            return Err(NrsError::InvalidModel(format!(
                "grid t0 = {} must be >= 0",
                self.t0
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(NrsError::InvalidModel(format!(
                "grid dt = {} must be > 0",
                self.dt
            )));
        }
        if self.n < 16 {
            return Err(NrsError::TooFewPoints {
                need: 16,
                got: self.n,
            });
        }
        if self.t0 + self.n as f64 * self.dt < 5.0 {
            return Err(NrsError::InvalidModel(
                "time grid must cover at least 5 lifetimes".into(),
            ));
        }
        Ok(())
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.t(i))
    }

    pub fn end(&self) -> f64 {
        self.t(self.n - 1)
    }

    /// Largest representable angular frequency, π/dt.
    pub fn nyquist(&self) -> f64 {
        PI / self.dt
    }

    /// Length of the zero-padded transform used for spectral products.
    pub fn fft_len(&self) -> usize {
        (4 * self.n).next_power_of_two()
    }

    /// Angular frequencies of the padded transform, in FFT order.
    pub fn fft_omegas(&self) -> Vec<f64> {
        let m = self.fft_len();
        let dw = TAU / (m as f64 * self.dt);
        (0..m)
            .map(|k| if k < m / 2 { k as f64 } else { k as f64 - m as f64 } * dw)
            .collect()
    }
}

/// Inverse transform g(t) = (1/2π)∫e^{-iωt}ĝ(ω)dω sampled on a time grid.
///
/// A two-pole term −c₀/((ω−p_a)(ω−p_t)) is removed before the FFT and added
/// back in closed form, so the slowly decaying 1/ω² tail does not alias.
pub struct Inverter {
    grid: TimeGrid,
    omegas: Vec<f64>,
    shift: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
}

impl Inverter {
    pub fn new(grid: &TimeGrid) -> Self {
        let omegas = grid.fft_omegas();
        let shift = omegas
            .iter()
            .map(|&w| Complex64::from_polar(1.0, -w * grid.t0))
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(omegas.len());
        Inverter {
            grid: *grid,
            omegas,
            shift,
            fft,
        }
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Inverts spectral samples already laid out on `omegas()`.
    pub fn invert_samples(
        &self,
        spec: &[Complex64],
        tail: Option<TailHint>,
    ) -> Result<Vec<Complex64>> {
        if spec.len() != self.omegas.len() {
            return Err(NrsError::GridMismatch(format!(
                "spectrum has {} samples, transform needs {}",
                spec.len(),
                self.omegas.len()
            )));
        }
        let tail = tail.unwrap_or(TailHint::NONE);
        let mut buf: Vec<Complex64> = spec
            .iter()
            .zip(&self.omegas)
            .zip(&self.shift)
            .map(|((g, &w), s)| (g - tail.spectrum(w)) * s)
            .collect();
        self.fft.process(&mut buf);
        let norm = 1.0 / (self.omegas.len() as f64 * self.grid.dt);
        Ok(buf[..self.grid.n]
            .iter()
            .enumerate()
            .map(|(k, g)| g * norm + tail.time(self.grid.t(k)))
            .collect())
    }

    pub fn invert<F: Fn(f64) -> Complex64>(&self, f: F, tail: Option<TailHint>) -> Vec<Complex64> {
        let spec: Vec<Complex64> = self.omegas.iter().map(|&w| f(w)).collect();
        self.invert_samples(&spec, tail)
            .expect("spectrum sampled on own grid")
    }
}

/// Leading 1/ω² behavior of a product of two single-pole responses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailHint {
    pub c0: Complex64,
    pub p_a: Complex64,
    pub p_t: Complex64,
}

impl TailHint {
    const NONE: TailHint = TailHint {
        c0: Complex64::new(0.0, 0.0),
        p_a: Complex64::new(0.0, -1.0),
        p_t: Complex64::new(0.0, -1.0),
    };

    fn spectrum(&self, w: f64) -> Complex64 {
        if self.c0 == Complex64::new(0.0, 0.0) {
            return self.c0;
        }
        -self.c0 / ((w - self.p_a) * (w - self.p_t))
    }

    fn time(&self, t: f64) -> Complex64 {
        if self.c0 == Complex64::new(0.0, 0.0) || t < 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let i = Complex64::i();
        let d = self.p_t - self.p_a;
        if d.norm() < 1e-9 {
            self.c0 * t * (-i * self.p_a * t).exp()
        } else {
            self.c0 * ((-i * self.p_a * t).exp() - (-i * self.p_t * t).exp()) / (i * d)
        }
    }
}

pub fn invert_with_tail<F: Fn(f64) -> Complex64>(
    f: F,
    grid: &TimeGrid,
    c0: Complex64,
    p_a: Complex64,
    p_t: Complex64,
) -> Vec<Complex64> {
    Inverter::new(grid).invert(f, Some(TailHint { c0, p_a, p_t }))
}

/// S_{a,t}(t): inverse transform of Ŝ_a(ω)Ŝ_t(ω) with both factors sampled on
/// `grid.fft_omegas()`.
pub fn radiative_coupling(
    s_a_hat: &[Complex64],
    s_t_hat: &[Complex64],
    grid: &TimeGrid,
    tail: Option<TailHint>,
) -> Result<Vec<Complex64>> {
    if s_a_hat.len() != s_t_hat.len() {
        return Err(NrsError::GridMismatch(format!(
            "analyzer spectrum has {} samples, target spectrum {}",
            s_a_hat.len(),
            s_t_hat.len()
        )));
    }
    let prod: Vec<Complex64> = s_a_hat.iter().zip(s_t_hat).map(|(a, b)| a * b).collect();
    Inverter::new(grid).invert_samples(&prod, tail)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    #[default]
    AnalyzerFirst,
    TargetFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTrace {
    pub weight: f64,
    pub resonant: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldTrace {
    pub prompt_amp: Complex64,
    pub channels: Vec<ChannelTrace>,
    pub grid: TimeGrid,
}

/// Per-channel building blocks of the two-stage field at one detuning.
#[derive(Debug, Clone)]
pub struct ChannelParts {
    pub weight: f64,
    pub alpha_t: Complex64,
    /// Analyzer response without the control phase.
    pub s_a: Vec<Complex64>,
    /// Target resonant part R_t (includes α_t where it multiplies the nuclei).
    pub r_t: Vec<Complex64>,
    /// Radiative coupling R_t ∗ S_a.
    pub r_at: Vec<Complex64>,
}

impl ChannelParts {
    /// α_a[α_t e^{iφ}S_a + R_t + c·(R_t∗S_a)] with c set by the ordering.
    pub fn field(&self, alpha_a: Complex64, phi: f64, ordering: Ordering) -> Vec<Complex64> {
        let e = Complex64::from_polar(1.0, phi);
        let c = match ordering {
            Ordering::AnalyzerFirst => e,
            Ordering::TargetFirst => Complex64::new(1.0, 0.0),
        };
        let ea = self.alpha_t * e;
        (0..self.s_a.len())
            .map(|k| alpha_a * (ea * self.s_a[k] + self.r_t[k] + c * self.r_at[k]))
            .collect()
    }
}

struct PreparedChannel {
    weight: f64,
    alpha_t: Complex64,
    r_t: Vec<Complex64>,
    r_hat: Vec<Complex64>,
    r0: Complex64,
    pole: Complex64,
}

/// Target quantities that do not depend on the analyzer, computed once per scan.
pub struct PreparedTarget {
    grid: TimeGrid,
    inv: Inverter,
    channels: Vec<PreparedChannel>,
}

impl PreparedTarget {
    pub fn new(target: &TargetModel, grid: &TimeGrid) -> Result<Self> {
        target.validate()?;
        grid.validate()?;
        let inv = Inverter::new(grid);
        let alpha_t = target.alpha_t();
        let channels = target
            .channel_ids()
            .into_iter()
            .map(|ch| {
                let (r0, pole) = target.tail_hint(ch);
                Ok(PreparedChannel {
                    weight: target.channel_weight(ch),
                    alpha_t,
                    r_t: target.resonant_time(ch, grid)?,
                    r_hat: inv
                        .omegas()
                        .iter()
                        .map(|&w| target.resonant_frequency(ch, w))
                        .collect(),
                    r0,
                    pole,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PreparedTarget {
            grid: *grid,
            inv,
            channels,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn parts(&self, analyzer: &AnalyzerSpec) -> Vec<ChannelParts> {
        let s_a: Vec<Complex64> = self
            .grid
            .times()
            .map(|t| analyzer_resonant(analyzer, t))
            .collect();
        let s_hat: Vec<Complex64> = self
            .inv
            .omegas()
            .iter()
            .map(|&w| analyzer.frequency_response(w))
            .collect();
        let p_a = Complex64::new(analyzer.center(), -analyzer.effective_width());
        self.channels
            .iter()
            .map(|c| {
                let prod: Vec<Complex64> = c.r_hat.iter().zip(&s_hat).map(|(r, s)| r * s).collect();
                let tail = TailHint {
                    c0: c.r0 * (-analyzer.b_a),
                    p_a,
                    p_t: c.pole,
                };
                let r_at = self
                    .inv
                    .invert_samples(&prod, Some(tail))
                    .expect("own grid");
                ChannelParts {
                    weight: c.weight,
                    alpha_t: c.alpha_t,
                    s_a: s_a.clone(),
                    r_t: c.r_t.clone(),
                    r_at,
                }
            })
            .collect()
    }

    /// Σ_channels w|R_t|², the target measured on its own.
    pub fn target_only_intensity(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.n];
        for c in &self.channels {
            for (o, r) in out.iter_mut().zip(&c.r_t) {
                *o += c.weight * r.norm_sqr();
            }
        }
        out
    }
}

pub fn two_stage_field(
    target: &TargetModel,
    analyzer: &AnalyzerSpec,
    ordering: Ordering,
    grid: &TimeGrid,
) -> Result<FieldTrace> {
    analyzer.validate()?;
    let prep = PreparedTarget::new(target, grid)?;
    let channels = prep
        .parts(analyzer)
        .into_iter()
        .map(|p| ChannelTrace {
            weight: p.weight,
            resonant: p.field(analyzer.alpha_a, analyzer.phi, ordering),
        })
        .collect();
    Ok(FieldTrace {
        prompt_amp: analyzer.alpha_a * target.alpha_t(),
        channels,
        grid: *grid,
    })
}

/// Σ_channels w|E|²; the prompt is kept out of the samples.
pub fn intensity(field: &FieldTrace) -> Vec<f64> {
    let mut out = vec![0.0; field.grid.n];
    for c in &field.channels {
        for (o, e) in out.iter_mut().zip(&c.resonant) {
            *o += c.weight * e.norm_sqr();
        }
    }
    out
}

fn channel_intensity(
    parts: &[ChannelParts],
    alpha_a: Complex64,
    phi: f64,
    ordering: Ordering,
) -> Vec<f64> {
    let mut out = vec![0.0; parts[0].s_a.len()];
    for p in parts {
        for (o, e) in out.iter_mut().zip(p.field(alpha_a, phi, ordering)) {
            *o += p.weight * e.norm_sqr();
        }
    }
    out
}

/// |α_a S_a|², independent of Δ and φ.
pub fn analyzer_only_intensity(analyzer: &AnalyzerSpec, grid: &TimeGrid) -> Vec<f64> {
    let a2 = analyzer.alpha_a.norm_sqr();
    grid.times()
        .map(|t| a2 * analyzer_resonant(analyzer, t).norm_sqr())
        .collect()
}

pub fn target_only_intensity(target: &TargetModel, grid: &TimeGrid) -> Result<Vec<f64>> {
    Ok(PreparedTarget::new(target, grid)?.target_only_intensity())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntensityKind {
    Full,
    AnalyzerOnly,
    TargetOnly,
    BackgroundCorrected,
    D1,
    D2,
    Sum,
}

impl IntensityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntensityKind::Full => "full",
            IntensityKind::AnalyzerOnly => "analyzer_only",
            IntensityKind::TargetOnly => "target_only",
            IntensityKind::BackgroundCorrected => "background_corrected",
            IntensityKind::D1 => "d1",
            IntensityKind::D2 => "d2",
            IntensityKind::Sum => "sum",
        }
    }
}

impl fmt::Display for IntensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IntensityKind {
    type Err = NrsError;
    fn from_str(s: &str) -> Result<Self> {
        [
            IntensityKind::Full,
            IntensityKind::AnalyzerOnly,
            IntensityKind::TargetOnly,
            IntensityKind::BackgroundCorrected,
            IntensityKind::D1,
            IntensityKind::D2,
            IntensityKind::Sum,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| NrsError::InvalidModel(format!("unknown intensity kind {s:?}")))
    }
}

/// I(t, Δ), stored column-major: column j holds the trace at `deltas[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeFreqIntensity {
    pub grid: TimeGrid,
    pub deltas: Vec<f64>,
    pub values: Vec<f64>,
    pub prompt_power: Vec<f64>,
    pub kind: IntensityKind,
}

impl TimeFreqIntensity {
    pub fn from_columns(
        grid: TimeGrid,
        deltas: Vec<f64>,
        cols: Vec<Vec<f64>>,
        prompt: f64,
        kind: IntensityKind,
    ) -> Result<Self> {
        if cols.len() != deltas.len() || cols.iter().any(|c| c.len() != grid.n) {
            return Err(NrsError::GridMismatch(
                "columns do not match grid and detunings".into(),
            ));
        }
        Ok(TimeFreqIntensity {
            prompt_power: vec![prompt; deltas.len()],
            grid,
            deltas,
            values: cols.concat(),
            kind,
        })
    }

    pub fn n_t(&self) -> usize {
        self.grid.n
    }

    pub fn n_delta(&self) -> usize {
        self.deltas.len()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.grid.n..(j + 1) * self.grid.n]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.n + i]
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.values.iter_mut().for_each(|v| *v *= s);
        self.prompt_power.iter_mut().for_each(|v| *v *= s);
        self
    }
}

fn check_deltas(deltas: &[f64]) -> Result<()> {
    if deltas.is_empty() {
        return Err(NrsError::InvalidModel("detuning list is empty".into()));
    }
    if deltas.iter().any(|d| !d.is_finite()) || deltas.windows(2).any(|w| w[1] < w[0]) {
        return Err(NrsError::InvalidModel(
            "detunings must be finite and sorted".into(),
        ));
    }
    Ok(())
}

/// Evaluates `col` for every detuning in parallel and assembles the columns.
pub fn scan_with<F>(
    target: &TargetModel,
    analyzer: &AnalyzerSpec,
    deltas: &[f64],
    grid: &TimeGrid,
    col: F,
) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[ChannelParts], &AnalyzerSpec) -> Vec<f64> + Sync,
{
    analyzer.validate()?;
    check_deltas(deltas)?;
    let prep = PreparedTarget::new(target, grid)?;
    Ok(deltas
        .par_iter()
        .map(|&d| {
            let a = analyzer.with_delta(d);
            col(&prep.parts(&a), &a)
        })
        .collect())
}

pub fn scan_detuning(
    target: &TargetModel,
    analyzer: &AnalyzerSpec,
    deltas: &[f64],
    ordering: Ordering,
    grid: &TimeGrid,
) -> Result<TimeFreqIntensity> {
    let cols = scan_with(target, analyzer, deltas, grid, |p, a| {
        channel_intensity(p, a.alpha_a, a.phi, ordering)
    })?;
    let prompt = (analyzer.alpha_a * target.alpha_t()).norm_sqr();
    TimeFreqIntensity::from_columns(*grid, deltas.to_vec(), cols, prompt, IntensityKind::Full)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseCombo {
    /// I(φ=χ) − I(φ=χ+π) for one ordering (D₁ analyzer-first, D₂ target-first).
    Difference(Ordering),
    /// I₁(φ=χ+π) + I₂(φ=χ+π).
    Sum,
}

pub fn phase_difference_spectra(
    target: &TargetModel,
    analyzer: &AnalyzerSpec,
    deltas: &[f64],
    grid: &TimeGrid,
    chi: f64,
    combo: PhaseCombo,
) -> Result<TimeFreqIntensity> {
    let flip = (chi + PI).rem_euclid(TAU);
    let cols = scan_with(target, analyzer, deltas, grid, |p, a| match combo {
        PhaseCombo::Difference(o) => {
            let x = channel_intensity(p, a.alpha_a, chi, o);
            let y = channel_intensity(p, a.alpha_a, flip, o);
            x.iter().zip(&y).map(|(x, y)| x - y).collect()
        }
        PhaseCombo::Sum => {
            let x = channel_intensity(p, a.alpha_a, flip, Ordering::AnalyzerFirst);
            let y = channel_intensity(p, a.alpha_a, flip, Ordering::TargetFirst);
            x.iter().zip(&y).map(|(x, y)| x + y).collect()
        }
    })?;
    let prompt = (analyzer.alpha_a * target.alpha_t()).norm_sqr();
    let (prompt, kind) = match combo {
        PhaseCombo::Difference(Ordering::AnalyzerFirst) => (0.0, IntensityKind::D1),
        PhaseCombo::Difference(Ordering::TargetFirst) => (0.0, IntensityKind::D2),
        PhaseCombo::Sum => (2.0 * prompt, IntensityKind::Sum),
    };
    TimeFreqIntensity::from_columns(*grid, deltas.to_vec(), cols, prompt, kind)
}
