//! Analytic time- and frequency-domain responses of analyzer and targets.

use crate::error::{ensure_finite, NrsError, Result};
use crate::special::j1_ratio;
use crate::two_stage::TimeGrid;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Largest dt·(γ_t + b) accepted for multi-line targets. The Bessel part is
/// exact, so only the smooth multiple-scattering remainder needs resolving.
pub const MAX_DT_WIDTH: f64 = 0.1;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceLine {
    pub omega: f64,
    pub b: f64,
    #[serde(default = "one")]
    pub gamma_t: f64,
    #[serde(default)]
    pub channel: usize,
}

fn one() -> f64 {
    1.0
}

fn unit_alpha() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl ResonanceLine {
    pub fn new(omega: f64, b: f64, gamma_t: f64, channel: usize) -> Self {
        ResonanceLine {
            omega,
            b,
            gamma_t,
            channel,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("omega", self.omega)?;
        ensure_finite("b", self.b)?;
        ensure_finite("gamma_t", self.gamma_t)?;
        if self.b < 0.0 {
            return Err(NrsError::InvalidModel(format!("line b = {} < 0", self.b)));
        }
        if self.gamma_t <= 0.0 {
            return Err(NrsError::InvalidModel(format!(
                "line gamma_t = {} <= 0",
                self.gamma_t
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityTwoLevel {
    pub kappa: f64,
    pub kappa_r: f64,
    pub delta_c: f64,
    #[serde(default = "one")]
    pub gamma: f64,
    pub gamma_s: f64,
    pub delta_cls: f64,
    #[serde(default)]
    pub omega_t: f64,
}

impl CavityTwoLevel {
    pub fn validate(&self) -> Result<()> {
        for (n, v) in [
            ("kappa", self.kappa),
            ("kappa_r", self.kappa_r),
            ("delta_c", self.delta_c),
            ("gamma", self.gamma),
            ("gamma_s", self.gamma_s),
            ("delta_cls", self.delta_cls),
            ("omega_t", self.omega_t),
        ] {
            ensure_finite(n, v)?;
        }
        if self.kappa <= 0.0 || self.kappa_r <= 0.0 || self.kappa_r > self.kappa {
            return Err(NrsError::InvalidModel(
                "cavity needs 0 < kappa_r <= kappa".into(),
            ));
        }
        if self.gamma <= 0.0 || self.gamma_s < 0.0 {
            return Err(NrsError::InvalidModel(
                "cavity needs gamma > 0 and gamma_s >= 0".into(),
            ));
        }
        Ok(())
    }

    /// Empty-cavity reflection coefficient α_t = 2κ_R/(κ + iΔ_c) − 1.
    pub fn alpha_t(&self) -> Complex64 {
        2.0 * self.kappa_r / Complex64::new(self.kappa, self.delta_c) - 1.0
    }

    /// Total nuclear decay rate Γ_c = (γ + γ_s)/2.
    pub fn gamma_c(&self) -> f64 {
        0.5 * (self.gamma + self.gamma_s)
    }

    fn amplitude(&self) -> Complex64 {
        -(self.alpha_t() + 1.0) * Complex64::new(0.5 * self.gamma_s, self.delta_cls)
    }

    fn pole(&self) -> Complex64 {
        Complex64::new(self.omega_t + self.delta_cls, -self.gamma_c())
    }
}

/// Response tabulated on a frequency grid; linear interpolation, zero outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tabulated {
    pub omega_grid: Vec<f64>,
    pub s_hat: Vec<Complex64>,
    #[serde(default = "unit_alpha")]
    pub alpha_t: Complex64,
}

impl Tabulated {
    pub fn validate(&self) -> Result<()> {
        let n = self.omega_grid.len();
        if n < 2 || n != self.s_hat.len() {
            return Err(NrsError::InvalidModel(
                "tabulated grid and values must match, n >= 2".into(),
            ));
        }
        if self.omega_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(NrsError::InvalidModel(
                "tabulated omega grid must increase strictly".into(),
            ));
        }
        let peak = self.s_hat.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if self.s_hat[0].norm() > 1e-3 * peak || self.s_hat[n - 1].norm() > 1e-3 * peak {
            return Err(NrsError::InvalidModel(
                "tabulated response must vanish at both grid ends".into(),
            ));
        }
        Ok(())
    }

    pub fn eval(&self, omega: f64) -> Complex64 {
        let g = &self.omega_grid;
        if omega < g[0] || omega > g[g.len() - 1] {
            return Complex64::new(0.0, 0.0);
        }
        let j = g.partition_point(|&w| w <= omega).clamp(1, g.len() - 1);
        let (w0, w1) = (g[j - 1], g[j]);
        let f = (omega - w0) / (w1 - w0);
        self.s_hat[j - 1] * (1.0 - f) + self.s_hat[j] * f
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetModel {
    SingleLineThick {
        line: ResonanceLine,
    },
    MultiLineThick {
        lines: Vec<ResonanceLine>,
        #[serde(default = "unit_alpha")]
        alpha_t: Complex64,
        /// Intensity weight per polarization channel; empty means equal split.
        #[serde(default)]
        channel_weights: Vec<f64>,
    },
    CavityTwoLevel(CavityTwoLevel),
    Tabulated(Tabulated),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AnalyzerMode {
    #[default]
    ExactBessel,
    EarlyTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzerSpec {
    pub b_a: f64,
    #[serde(default = "one")]
    pub gamma_a: f64,
    #[serde(default)]
    pub omega_a: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default = "unit_alpha")]
    pub alpha_a: Complex64,
    #[serde(default)]
    pub mode: AnalyzerMode,
}

impl AnalyzerSpec {
    pub fn new(b_a: f64, mode: AnalyzerMode) -> Self {
        AnalyzerSpec {
            b_a,
            gamma_a: 1.0,
            omega_a: 0.0,
            delta: 0.0,
            phi: 0.0,
            alpha_a: unit_alpha(),
            mode,
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi.rem_euclid(TAU);
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (n, v) in [
            ("b_a", self.b_a),
            ("gamma_a", self.gamma_a),
            ("omega_a", self.omega_a),
            ("delta", self.delta),
            ("phi", self.phi),
        ] {
            ensure_finite(n, v)?;
        }
        if self.b_a < 0.0 || self.gamma_a <= 0.0 {
            return Err(NrsError::InvalidModel(
                "analyzer needs b_a >= 0 and gamma_a > 0".into(),
            ));
        }
        if !(0.0..TAU).contains(&self.phi) {
            return Err(NrsError::InvalidModel(
                "analyzer phi must lie in [0, 2pi)".into(),
            ));
        }
        Ok(())
    }

    /// Resonance frequency ω_a + Δ.
    pub fn center(&self) -> f64 {
        self.omega_a + self.delta
    }

    /// Effective early-time width (γ_a + b_a)/2.
    pub fn effective_width(&self) -> f64 {
        0.5 * (self.gamma_a + self.b_a)
    }

    /// Ŝ_a(ω) without the control phase.
    pub fn frequency_response(&self, omega: f64) -> Complex64 {
        let u = omega - self.center();
        match self.mode {
            AnalyzerMode::ExactBessel => {
                (-I * self.b_a / Complex64::new(u, 0.5 * self.gamma_a)).exp() - 1.0
            }
            AnalyzerMode::EarlyTime => -I * self.b_a / Complex64::new(u, self.effective_width()),
        }
    }
}

/// Single-line forward-scattering response S(t), zero for t < 0.
pub fn nfs_time_response(line: &ResonanceLine, t: f64) -> Complex64 {
    if t < 0.0 || line.b == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    -j1_ratio(line.b, t) * (-0.5 * line.gamma_t * t).exp() * cis(-line.omega * t)
}

/// Analyzer response including the control phase e^{iφ}.
pub fn analyzer_time_response(a: &AnalyzerSpec, t: f64) -> Complex64 {
    analyzer_resonant(a, t) * cis(a.phi)
}

pub(crate) fn analyzer_resonant(a: &AnalyzerSpec, t: f64) -> Complex64 {
    if t < 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    match a.mode {
        AnalyzerMode::EarlyTime => -a.b_a * (-a.effective_width() * t).exp() * cis(-a.center() * t),
        AnalyzerMode::ExactBessel => {
            nfs_time_response(&ResonanceLine::new(a.center(), a.b_a, a.gamma_a, 0), t)
        }
    }
}

/// Ŝ(ω) = exp(Σ_j −i b_j/(ω − ω_j + iγ_j/2)) − 1 for lines of one channel.
pub fn nfs_frequency_response(lines: &[ResonanceLine], omega: f64) -> Complex64 {
    let x: Complex64 = lines
        .iter()
        .map(|l| -I * l.b / Complex64::new(omega - l.omega, 0.5 * l.gamma_t))
        .sum();
    x.exp() - 1.0
}

/// (α_t, resonant part) of the cavity response at time t.
pub fn cavity_time_response(m: &CavityTwoLevel, t: f64) -> (Complex64, Complex64) {
    let alpha = m.alpha_t();
    if t < 0.0 {
        return (alpha, Complex64::new(0.0, 0.0));
    }
    (alpha, m.amplitude() * (-I * m.pole() * t).exp())
}

/// Full cavity response T̂_t(ω), including the electronic part α_t.
pub fn cavity_frequency_response(m: &CavityTwoLevel, omega: f64) -> Complex64 {
    m.alpha_t() + I * m.amplitude() / (omega - m.pole())
}

/// Time samples of one channel's S_t(t) for a multi-line target.
///
/// The single-line Bessel terms are summed analytically and only the
/// multiple-scattering remainder between lines is inverted numerically.
pub fn multiline_time_response(
    lines: &[ResonanceLine],
    channel: usize,
    grid: &TimeGrid,
) -> Result<Vec<Complex64>> {
    let own: Vec<ResonanceLine> = lines
        .iter()
        .copied()
        .filter(|l| l.channel == channel)
        .collect();
    if own.is_empty() {
        return Err(NrsError::InvalidModel(format!(
            "no lines in channel {channel}"
        )));
    }
    let widest = own.iter().map(|l| l.gamma_t + l.b).fold(0.0, f64::max);
    let reach = own.iter().map(|l| l.omega.abs()).fold(0.0, f64::max) + widest;
    if grid.dt * widest > MAX_DT_WIDTH || grid.dt * reach > 0.5 * std::f64::consts::PI {
        return Err(NrsError::Resolution(format!(
            "dt = {} cannot resolve lines of width {widest} out to {reach}",
            grid.dt
        )));
    }
    let mut out: Vec<Complex64> = grid
        .times()
        .map(|t| own.iter().map(|l| nfs_time_response(l, t)).sum())
        .collect();
    if own.len() > 1 {
        let c0: f64 = pair_sum(&own);
        let (pa, pt) = remainder_poles(&own);
        let rem = crate::two_stage::invert_with_tail(
            |w| {
                nfs_frequency_response(&own, w)
                    - own
                        .iter()
                        .map(|l| nfs_frequency_response(std::slice::from_ref(l), w))
                        .sum::<Complex64>()
            },
            grid,
            Complex64::new(c0, 0.0),
            pa,
            pt,
        );
        for (o, r) in out.iter_mut().zip(rem) {
            *o += r;
        }
    }
    Ok(out)
}

fn pair_sum(lines: &[ResonanceLine]) -> f64 {
    let mut c = 0.0;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            c += lines[i].b * lines[j].b;
        }
    }
    c
}

fn remainder_poles(lines: &[ResonanceLine]) -> (Complex64, Complex64) {
    let n = lines.len() as f64;
    let wc = lines.iter().map(|l| l.omega).sum::<f64>() / n;
    let k = lines.iter().map(|l| 0.5 * (l.gamma_t + l.b)).sum::<f64>() / n;
    (Complex64::new(wc, -k), Complex64::new(wc, -k - 0.5))
}

impl TargetModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            TargetModel::SingleLineThick { line } => line.validate(),
            TargetModel::MultiLineThick {
                lines,
                alpha_t,
                channel_weights,
            } => {
                if lines.is_empty() {
                    return Err(NrsError::InvalidModel(
                        "multi-line target without lines".into(),
                    ));
                }
                for l in lines {
                    l.validate()?;
                }
                ensure_finite("alpha_t", alpha_t.norm())?;
                let n = self.channel_ids().len();
                if !channel_weights.is_empty() {
                    let max_id = lines.iter().map(|l| l.channel).max().unwrap_or(0);
                    if channel_weights.len() <= max_id {
                        return Err(NrsError::InvalidModel(format!(
                            "{} channel weights for channel id {max_id}",
                            channel_weights.len()
                        )));
                    }
                    if channel_weights
                        .iter()
                        .any(|w| !(w.is_finite() && *w >= 0.0))
                    {
                        return Err(NrsError::InvalidModel(
                            "channel weights must be finite and >= 0".into(),
                        ));
                    }
                    let s: f64 = self.channel_ids().iter().map(|&c| channel_weights[c]).sum();
                    if (s - 1.0).abs() > 1e-9 {
                        return Err(NrsError::InvalidModel(format!(
                            "channel weights sum to {s}, not 1"
                        )));
                    }
                }
                debug_assert!(n > 0);
                Ok(())
            }
            TargetModel::CavityTwoLevel(c) => c.validate(),
            TargetModel::Tabulated(t) => t.validate(),
        }
    }

    /// Channel ids present in the model, sorted.
    pub fn channel_ids(&self) -> Vec<usize> {
        match self {
            TargetModel::MultiLineThick { lines, .. } => {
                let mut ids: Vec<usize> = lines.iter().map(|l| l.channel).collect();
                ids.sort_unstable();
                ids.dedup();
                ids
            }
            _ => vec![0],
        }
    }

    /// Intensity weight of a channel.
    pub fn channel_weight(&self, channel: usize) -> f64 {
        match self {
            TargetModel::MultiLineThick {
                channel_weights, ..
            } if !channel_weights.is_empty() => channel_weights[channel],
            _ => 1.0 / self.channel_ids().len() as f64,
        }
    }

    /// Electronic (non-resonant) prefactor α_t.
    pub fn alpha_t(&self) -> Complex64 {
        match self {
            TargetModel::SingleLineThick { .. } => unit_alpha(),
            TargetModel::MultiLineThick { alpha_t, .. } => *alpha_t,
            TargetModel::CavityTwoLevel(c) => c.alpha_t(),
            TargetModel::Tabulated(t) => t.alpha_t,
        }
    }

    /// Resonant part R̂_t(ω) of one channel, including α_t where it multiplies the nuclear part.
    pub fn resonant_frequency(&self, channel: usize, omega: f64) -> Complex64 {
        match self {
            TargetModel::SingleLineThick { line } => {
                nfs_frequency_response(std::slice::from_ref(line), omega)
            }
            TargetModel::MultiLineThick { lines, alpha_t, .. } => {
                let own: Vec<ResonanceLine> = lines
                    .iter()
                    .copied()
                    .filter(|l| l.channel == channel)
                    .collect();
                *alpha_t * nfs_frequency_response(&own, omega)
            }
            TargetModel::CavityTwoLevel(c) => cavity_frequency_response(c, omega) - c.alpha_t(),
            TargetModel::Tabulated(t) => t.alpha_t * t.eval(omega),
        }
    }

    /// Resonant part R_t(t) of one channel sampled on the grid.
    pub fn resonant_time(&self, channel: usize, grid: &TimeGrid) -> Result<Vec<Complex64>> {
        Ok(match self {
            TargetModel::SingleLineThick { line } => {
                grid.times().map(|t| nfs_time_response(line, t)).collect()
            }
            TargetModel::MultiLineThick { lines, alpha_t, .. } => {
                multiline_time_response(lines, channel, grid)?
                    .into_iter()
                    .map(|z| *alpha_t * z)
                    .collect()
            }
            TargetModel::CavityTwoLevel(c) => {
                grid.times().map(|t| cavity_time_response(c, t).1).collect()
            }
            TargetModel::Tabulated(t) => {
                let (lo, hi) = (t.omega_grid[0], t.omega_grid[t.omega_grid.len() - 1]);
                if grid.dt * hi.abs().max(lo.abs()) > std::f64::consts::PI {
                    return Err(NrsError::Resolution(
                        "tabulated grid exceeds the Nyquist band".into(),
                    ));
                }
                let z = Complex64::new(0.0, 0.0);
                crate::two_stage::invert_with_tail(|w| t.alpha_t * t.eval(w), grid, z, z, z)
            }
        })
    }

    /// Value R_t(0⁺) and a representative pole for the asymptotic subtraction.
    pub(crate) fn tail_hint(&self, channel: usize) -> (Complex64, Complex64) {
        match self {
            TargetModel::SingleLineThick { line } => (
                Complex64::new(-line.b, 0.0),
                Complex64::new(line.omega, -0.5 * (line.gamma_t + line.b)),
            ),
            TargetModel::MultiLineThick { lines, alpha_t, .. } => {
                let own: Vec<ResonanceLine> = lines
                    .iter()
                    .copied()
                    .filter(|l| l.channel == channel)
                    .collect();
                let b: f64 = own.iter().map(|l| l.b).sum();
                (-*alpha_t * b, remainder_poles(&own).0)
            }
            TargetModel::CavityTwoLevel(c) => (c.amplitude(), c.pole()),
            TargetModel::Tabulated(_) => (Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn nfs_limits() {
        let l = ResonanceLine::new(0.0, 5.0, 1.0, 0);
        assert!(close(
            nfs_time_response(&l, 0.0),
            Complex64::new(-5.0, 0.0),
            1e-15
        ));
        assert_eq!(nfs_time_response(&l, -0.1), Complex64::new(0.0, 0.0));
        let zero = ResonanceLine::new(3.0, 0.0, 1.0, 0);
        assert_eq!(nfs_time_response(&zero, 2.0), Complex64::new(0.0, 0.0));
        assert_eq!(
            nfs_frequency_response(&[zero], 1.0),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn thin_line_is_lorentzian() {
        let b = 0.01;
        let l = ResonanceLine::new(2.0, b, 1.0, 0);
        for k in 0..200 {
            let w = -20.0 + 0.2 * k as f64;
            let lor = -I * b / Complex64::new(w - 2.0, 0.5);
            assert!((nfs_frequency_response(&[l], w) - lor).norm() <= 10.0 * b * b);
        }
    }

    #[test]
    fn analyzer_modes() {
        let a = AnalyzerSpec::new(2.34, AnalyzerMode::EarlyTime).with_delta(10.0);
        assert_eq!(analyzer_time_response(&a, -1.0), Complex64::new(0.0, 0.0));
        assert!(close(
            analyzer_time_response(&a, 0.0),
            Complex64::new(-2.34, 0.0),
            1e-15
        ));
        let e = AnalyzerSpec {
            mode: AnalyzerMode::ExactBessel,
            ..a
        };
        // b_a t ≤ 0.1
        for k in 1..=40 {
            let t = 0.1 / 2.34 * k as f64 / 40.0;
            let (x, y) = (analyzer_time_response(&a, t), analyzer_time_response(&e, t));
            assert!((x - y).norm() / y.norm() < 0.05);
        }
        let p = a.with_phi(std::f64::consts::PI);
        assert!(close(
            analyzer_time_response(&p, 0.0),
            Complex64::new(2.34, 0.0),
            1e-12
        ));
    }

    #[test]
    fn cavity_basics() {
        let mut c = CavityTwoLevel {
            kappa: 2.0,
            kappa_r: 2.0,
            delta_c: 0.0,
            gamma: 1.0,
            gamma_s: 4.0,
            delta_cls: 1.5,
            omega_t: 0.0,
        };
        assert!(close(c.alpha_t(), Complex64::new(1.0, 0.0), 1e-15));
        assert!(close(cavity_frequency_response(&c, 1e9), c.alpha_t(), 1e-8));
        c.gamma_s = 0.0;
        c.delta_cls = 0.0;
        assert_eq!(cavity_time_response(&c, 1.0).1, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn cavity_decay_rate() {
        let c = CavityTwoLevel {
            kappa: 1.0,
            kappa_r: 0.8,
            delta_c: 0.3,
            gamma: 1.0,
            gamma_s: 6.0,
            delta_cls: -2.0,
            omega_t: 0.5,
        };
        // log-linear regression of |R(t)|²
        let ts: Vec<f64> = (1..50).map(|k| 0.02 * k as f64).collect();
        let ys: Vec<f64> = ts
            .iter()
            .map(|&t| cavity_time_response(&c, t).1.norm_sqr().ln())
            .collect();
        let n = ts.len() as f64;
        let (mt, my) = (ts.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let slope = ts
            .iter()
            .zip(&ys)
            .map(|(t, y)| (t - mt) * (y - my))
            .sum::<f64>()
            / ts.iter().map(|t| (t - mt).powi(2)).sum::<f64>();
        assert!((-slope - (c.gamma + c.gamma_s)).abs() < 1e-9);
    }

    #[test]
    fn fano_symmetry_for_real_negative_alpha() {
        let c = CavityTwoLevel {
            kappa: 1.0,
            kappa_r: 0.3,
            delta_c: 0.0,
            gamma: 1.0,
            gamma_s: 3.0,
            delta_cls: 0.0,
            omega_t: 2.0,
        };
        assert!(c.alpha_t().re < 0.0 && c.alpha_t().im == 0.0);
        for k in 1..30 {
            let d = 0.3 * k as f64;
            let (p, m) = (
                cavity_frequency_response(&c, 2.0 + d),
                cavity_frequency_response(&c, 2.0 - d),
            );
            assert!((p.norm_sqr() - m.norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn tabulated_interpolation() {
        let t = Tabulated {
            omega_grid: vec![-2.0, 0.0, 2.0],
            s_hat: vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, -1.0),
                Complex64::new(0.0, 0.0),
            ],
            alpha_t: unit_alpha(),
        };
        t.validate().unwrap();
        assert_eq!(t.eval(-1.0), Complex64::new(0.5, -0.5));
        assert_eq!(t.eval(3.0), Complex64::new(0.0, 0.0));
        assert_eq!(t.eval(0.0), Complex64::new(1.0, -1.0));
        let bad = Tabulated {
            s_hat: vec![Complex64::new(1.0, 0.0); 3],
            ..t
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn validation() {
        assert!(ResonanceLine::new(0.0, -1.0, 1.0, 0).validate().is_err());
        assert!(ResonanceLine::new(0.0, 1.0, 0.0, 0).validate().is_err());
        let m = TargetModel::MultiLineThick {
            lines: vec![
                ResonanceLine::new(1.0, 1.0, 1.0, 0),
                ResonanceLine::new(-1.0, 1.0, 1.0, 1),
            ],
            alpha_t: unit_alpha(),
            channel_weights: vec![0.3, 0.3],
        };
        assert!(m.validate().is_err());
        let a = AnalyzerSpec {
            phi: 7.0,
            ..AnalyzerSpec::new(1.0, AnalyzerMode::ExactBessel)
        };
        assert!(a.validate().is_err());
    }
}
