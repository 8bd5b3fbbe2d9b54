//! Slow, independent reference implementations for cross-checking fast paths.

use crate::error::{NrsError, Result};
use crate::ffc_core::Gate;
use crate::two_stage::FieldTrace;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub quad_points: usize,
    pub series_terms: usize,
    pub tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            quad_points: 4000,
            series_terms: 30,
            tol: 1e-6,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.quad_points < 100 || self.series_terms < 10 || !(self.tol > 0.0) {
            return Err(NrsError::InvalidModel(
                "oracle needs quad_points >= 100, series_terms >= 10, tol > 0".into(),
            ));
        }
        Ok(())
    }
}

/// √(b/t)·J₁(2√(bt)) = Σ (−1)^k b^{k+1} t^k/(k!(k+1)!), with the first omitted
/// term as error bound.
pub fn bessel_series_j1ratio(b: f64, t: f64, terms: usize) -> Result<(f64, f64)> {
    let q = b * t;
    if !(q.is_finite()) || q > 50.0 {
        return Err(NrsError::Regime(q));
    }
    let mut term = b;
    let mut sum = 0.0;
    for k in 0..terms {
        sum += term;
        term *= -q / ((k + 1) as f64 * (k + 2) as f64);
    }
    Ok((sum, term.abs()))
}

/// Trapezoid quadrature of ∫e^{iνt}Σ w|E|² over the gate, sample by sample.
pub fn direct_ffc(field: &FieldTrace, nu: f64, gate: &Gate) -> Complex64 {
    let g = &field.grid;
    let inside: Vec<usize> = (0..g.n)
        .filter(|&i| {
            let t = g.t0 + i as f64 * g.dt;
            t >= gate.t1 - 1e-9 * g.dt && t <= gate.t2 + 1e-9 * g.dt
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &i) in inside.iter().enumerate() {
        let t = g.t0 + i as f64 * g.dt;
        let w = if k == 0 || k + 1 == inside.len() {
            0.5
        } else {
            1.0
        };
        let p: f64 = field
            .channels
            .iter()
            .map(|c| c.weight * c.resonant[i].norm_sqr())
            .sum();
        acc += Complex64::new(0.0, nu * t).exp() * (w * g.dt * p);
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    /// dt·Σ; a discrete delta g = [1/dt, 0, ...] is the identity.
    Rectangle,
    Trapezoid,
}

/// (f∗g)(t_k) = ∫₀^{t_k} f(t_k − s)g(s) ds for causal samples on a common grid.
pub fn direct_convolution(
    f: &[Complex64],
    g: &[Complex64],
    dt: f64,
    rule: Quadrature,
) -> Vec<Complex64> {
    let n = f.len().min(g.len());
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..=k {
                let w = match rule {
                    Quadrature::Rectangle => 1.0,
                    Quadrature::Trapezoid if k == 0 => 0.0,
                    Quadrature::Trapezoid if m == 0 || m == k => 0.5,
                    Quadrature::Trapezoid => 1.0,
                };
                acc += f[k - m] * g[m] * w;
            }
            acc * dt
        })
        .collect()
}

/// (f⋆g)(x_k) = ∫ f*(y − x_k) g(y) dy for lags x_k = k·dt ≥ 0 (trapezoid).
pub fn direct_cross_correlation(f: &[Complex64], g: &[Complex64], dt: f64) -> Vec<Complex64> {
    let n = f.len().min(g.len());
    (0..n)
        .map(|k| {
            let last = n - 1;
            let mut acc = Complex64::new(0.0, 0.0);
            for m in k..n {
                let w = if m == k || m == last { 0.5 } else { 1.0 };
                acc += f[m - k].conj() * g[m] * w;
            }
            if k == last {
                Complex64::new(0.0, 0.0)
            } else {
                acc * dt
            }
        })
        .collect()
}

/// e^{−z₁t} ∗ e^{−z₂t} = (e^{−z₁t} − e^{−z₂t})/(z₂ − z₁).
pub fn two_pole_convolution(z1: Complex64, z2: Complex64, t: f64) -> Complex64 {
    if t < 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if (z2 - z1).norm() < 1e-12 {
        return t * (-z1 * t).exp();
    }
    ((-z1 * t).exp() - (-z2 * t).exp()) / (z2 - z1)
}

/// ∫e^{iωt}s(t)dt over the sampled range: trapezoid plus the Euler–Maclaurin
/// end correction with one-sided derivative estimates.
pub fn direct_fourier(s: &[Complex64], t0: f64, dt: f64, omega: f64) -> Complex64 {
    let n = s.len();
    let g = |k: usize| s[k] * Complex64::new(0.0, omega * (t0 + k as f64 * dt)).exp();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let w = if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
        acc += g(k) * w;
    }
    // fourth-order one-sided end derivatives
    let d0 = (-25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) / (12.0 * dt);
    let d1 = (25.0 * g(n - 1) - 48.0 * g(n - 2) + 36.0 * g(n - 3) - 16.0 * g(n - 4)
        + 3.0 * g(n - 5))
        / (12.0 * dt);
    acc * dt - (d1 - d0) * (dt * dt / 12.0)
}

/// Positive-branch FFC of a single-line target probed by an early-time analyzer:
/// b_a[1 − exp(−i b_t/(ν − x + iS_Γ))] with S_Γ = (γ_t + γ_a + b_a)/2.
pub fn analytic_single_line_ffc(
    b_t: f64,
    gamma_t: f64,
    b_a: f64,
    gamma_a: f64,
    x: f64,
    nu: f64,
) -> Complex64 {
    let s = 0.5 * (gamma_t + gamma_a + b_a);
    let i = Complex64::i();
    b_a * (1.0 - (-i * b_t / Complex64::new(nu - x, s)).exp())
}

/// Discrete spectral autocorrelation: (1/M)Σ_m û*_m û_{m+k} with
/// û_m = Σ_j √w_j T_j e^{iω_m t_j}, equal to Σ_j w_j|T_j|²e^{iν_k t_j} at ν_k = 2πk/(M dt).
pub fn spectral_autocorrelation(
    t: &[Complex64],
    weights: &[f64],
    t0: f64,
    dt: f64,
    m: usize,
    k: usize,
) -> Complex64 {
    spectral_cross_correlation(t, t, weights, t0, dt, m, k)
}

/// (1/M)Σ_m â*_m b̂_{m+k}; reduces to Σ_j w_j a*_j b_j e^{iν_k t_j}.
pub fn spectral_cross_correlation(
    a: &[Complex64],
    b: &[Complex64],
    weights: &[f64],
    t0: f64,
    dt: f64,
    m: usize,
    k: usize,
) -> Complex64 {
    let spec = |x: &[Complex64], len: usize| -> Vec<Complex64> {
        (0..len)
            .map(|q| {
                let om = 2.0 * PI * q as f64 / (m as f64 * dt);
                x.iter()
                    .zip(weights)
                    .enumerate()
                    .map(|(j, (v, w))| {
                        v * w.sqrt() * Complex64::new(0.0, om * (t0 + j as f64 * dt)).exp()
                    })
                    .sum()
            })
            .collect()
    };
    let (ah, bh) = (spec(a, m), spec(b, m + k));
    (0..m).map(|q| ah[q].conj() * bh[q + k]).sum::<Complex64>() / m as f64
}

/// (1/π)∫δ_{t1,t2}(ν − ν′)F(ν′)dν′ over |ν′| ≤ `span` by composite Simpson.
pub fn gated_by_convolution<F: Fn(f64) -> Complex64>(
    f: F,
    nu: f64,
    t1: f64,
    t2: f64,
    span: f64,
    dnu: f64,
) -> Complex64 {
    let mut n = (2.0 * span / dnu).ceil() as usize;
    if n % 2 == 1 {
        n += 1;
    }
    let h = 2.0 * span / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let v = -span + k as f64 * h;
        let w = if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += f(v) * (w * crate::ffc_core::gate_filter(nu - v, t1, t2));
    }
    acc * (h / 3.0) / PI
}
