//! Line-shape models fitted to FFC cuts.

use super::cut::Cut;
use super::diagonal::{FitKind, FitParam, FitReport};
use super::lsq::{gauss_newton, LsqOptions, LsqResult};
use crate::error::{NrsError, Result};
use num_complex::Complex64;

/// A[exp(b_t/(i(ν−x) − S_Γ)) − 1] + h.
pub fn thick_model(a: f64, b_t: f64, x: f64, s: f64, h: Complex64, nu: f64) -> Complex64 {
    a * ((b_t / Complex64::new(-s, nu - x)).exp() - 1.0) + h
}

/// A·sqrt((ν² + (px)²)/((ν² − x² + S²)² + 4x²S²)).
pub fn cavity_model(a: f64, p: f64, x: f64, s: f64, nu: f64) -> f64 {
    let num = nu * nu + (p * x).powi(2);
    let den = (nu * nu - x * x + s * s).powi(2) + 4.0 * x * x * s * s;
    a * (num / den).sqrt()
}

fn report(kind: FitKind, names: &[&str], res: &LsqResult, coords: &[f64]) -> FitReport {
    let se = res.stderr();
    FitReport {
        kind,
        params: names
            .iter()
            .zip(&res.params)
            .zip(se)
            .map(|((n, &v), s)| FitParam {
                name: (*n).into(),
                value: v,
                stderr: s,
            })
            .collect(),
        fit_range: (coords[0], coords[coords.len() - 1]),
        n_points: coords.len(),
        residual_norm: res.cost().sqrt(),
        converged: res.converged,
    }
}

fn argmax(y: &[f64]) -> usize {
    (0..y.len())
        .max_by(|&a, &b| y[a].total_cmp(&y[b]))
        .unwrap_or(0)
}

/// Distance from index `i0` to where `y` first drops below half of y[i0] on the high side.
fn half_width(coords: &[f64], y: &[f64], i0: usize) -> f64 {
    let mut k = i0;
    while k + 1 < y.len() && y[k] > 0.5 * y[i0] {
        k += 1;
    }
    (coords[k] - coords[i0]).max(0.5)
}

/// Joint fit of real and imaginary parts with parameters A, b_t, x, S_Γ, h_re, h_im.
pub fn fit_thick_model(cut: &Cut, init: Option<&FitReport>) -> Result<FitReport> {
    const NAMES: [&str; 6] = ["A", "b_t", "x", "S_gamma", "h_re", "h_im"];
    if cut.len() < NAMES.len() + 1 {
        return Err(NrsError::TooFewPoints {
            need: NAMES.len() + 1,
            got: cut.len(),
        });
    }
    let p0: Vec<f64> = match init {
        Some(r) if r.kind == FitKind::ThickModel => NAMES.iter().map(|n| r.value(n)).collect(),
        _ => {
            let re: Vec<f64> = cut.values.iter().map(|z| z.re).collect();
            let i0 = argmax(&re);
            vec![
                -re[i0],
                1.0,
                cut.coords[i0],
                half_width(&cut.coords, &re, i0),
                0.0,
                0.0,
            ]
        }
    };
    if p0.iter().any(|v| !v.is_finite()) {
        return Err(NrsError::FitFailed("non-finite initial guess".into()));
    }
    let f = |p: &[f64]| -> Vec<f64> {
        let h = Complex64::new(p[4], p[5]);
        let mut r = Vec::with_capacity(2 * cut.len());
        let d: Vec<Complex64> = cut
            .coords
            .iter()
            .zip(&cut.values)
            .map(|(&nu, &y)| thick_model(p[0], p[1], p[2], p[3], h, nu) - y)
            .collect();
        r.extend(d.iter().map(|z| z.re));
        r.extend(d.iter().map(|z| z.im));
        r
    };
    let res = gauss_newton(f, &p0, &LsqOptions::default());
    Ok(report(FitKind::ThickModel, &NAMES, &res, &cut.coords))
}

#[derive(Debug, Clone, Copy)]
pub struct CavityFitOptions {
    /// Expected peak position; the search for the maximum is limited to ±`search`.
    pub expected: Option<f64>,
    pub search: f64,
    pub n_trials: usize,
    pub step: usize,
    /// Extra points on the high-ν side of the initial window.
    pub upper_extra: usize,
    /// Trials whose x moves further than this from the initial peak are rejected.
    pub max_shift: f64,
}

impl Default for CavityFitOptions {
    fn default() -> Self {
        CavityFitOptions {
            expected: None,
            search: 25.0,
            n_trials: 8,
            step: 10,
            upper_extra: 4,
            max_shift: 5.0,
        }
    }
}

/// Fits A, p, x, S_Γ to |cut|, widening the window by `step` points per side
/// per trial and keeping the trial with the smallest stderr of x.
pub fn fit_cavity_model(cut: &Cut, opts: &CavityFitOptions) -> Result<FitReport> {
    const NAMES: [&str; 4] = ["A", "p", "x", "S_gamma"];
    let a: Vec<f64> = cut.values.iter().map(|z| z.norm()).collect();
    let n = a.len();
    if n < 7 {
        return Err(NrsError::TooFewPoints { need: 7, got: n });
    }
    let (lo, hi) = match opts.expected {
        Some(e) => (
            cut.coords.partition_point(|&c| c < e - opts.search),
            cut.coords.partition_point(|&c| c < e + opts.search),
        ),
        None => (0, n),
    };
    if hi <= lo {
        return Err(NrsError::OutsideGrid {
            at: opts.expected.unwrap_or(f64::NAN),
            lo: cut.coords[0],
            hi: cut.coords[n - 1],
        });
    }
    let i0 = lo + argmax(&a[lo..hi]);
    let x0 = cut.coords[i0];
    let s0 = half_width(&cut.coords, &a, i0);
    let p0 = [2.0 * s0 * a[i0], 0.1, x0, s0];
    let mut best: Option<FitReport> = None;
    for j in 0..opts.n_trials {
        let a_idx = i0.saturating_sub(1 + opts.step * j);
        let b_idx = (i0 + 1 + opts.upper_extra + opts.step * j).min(n - 1);
        let (xs, ys) = (&cut.coords[a_idx..=b_idx], &a[a_idx..=b_idx]);
        if xs.len() <= NAMES.len() {
            continue;
        }
        let f = |p: &[f64]| -> Vec<f64> {
            xs.iter()
                .zip(ys)
                .map(|(&nu, &y)| cavity_model(p[0], p[1], p[2], p[3], nu) - y)
                .collect()
        };
        let res = gauss_newton(f, &p0, &LsqOptions::default());
        let mut rep = report(FitKind::CavityModel, &NAMES, &res, xs);
        // the model depends on p and S_Γ only through p² and S_Γ²
        for k in [1, 3] {
            rep.params[k].value = rep.params[k].value.abs();
        }
        let (x, s, ex) = (rep.value("x"), rep.value("S_gamma"), rep.stderr("x"));
        if (x - x0).abs() > opts.max_shift || s == 0.0 || !ex.is_finite() {
            continue;
        }
        if best.as_ref().map_or(true, |b| ex < b.stderr("x")) {
            best = Some(rep);
        }
    }
    best.ok_or_else(|| NrsError::FitFailed(format!("no acceptable cavity fit near {x0}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::cut::{Axis, Component};

    #[test]
    fn thick_self_consistency() {
        let nus: Vec<f64> = (0..161).map(|k| 80.0 + 0.25 * k as f64).collect();
        let vals = nus
            .iter()
            .map(|&v| thick_model(1.0, 5.0, 100.0, 1.17, Complex64::new(0.0, 0.0), v))
            .collect();
        let cut = Cut::new(Axis::Nu, 100.0, nus, vals, Component::Real).unwrap();
        let init = FitReport {
            kind: FitKind::ThickModel,
            params: [
                ("A", 0.8),
                ("b_t", 4.0),
                ("x", 100.3),
                ("S_gamma", 1.0),
                ("h_re", 0.0),
                ("h_im", 0.0),
            ]
            .iter()
            .map(|&(n, v)| FitParam {
                name: n.into(),
                value: v,
                stderr: 0.0,
            })
            .collect(),
            fit_range: (0.0, 0.0),
            n_points: 0,
            residual_norm: 0.0,
            converged: true,
        };
        let r = fit_thick_model(&cut, Some(&init)).unwrap();
        for (n, v) in [
            ("A", 1.0),
            ("b_t", 5.0),
            ("x", 100.0),
            ("S_gamma", 1.17),
            ("h_re", 0.0),
            ("h_im", 0.0),
        ] {
            assert!((r.value(n) - v).abs() < 1e-6, "{n}: {}", r.value(n));
        }
    }

    #[test]
    fn thin_limit_amplitude() {
        // A[exp(−ib/(ν−x+iS)) − 1] → −iAb/(ν−x+iS) as b → 0
        let (a, b, s) = (2.0, 1e-4, 1.5);
        let nus: Vec<f64> = (0..81).map(|k| 40.0 + 0.25 * k as f64).collect();
        let vals: Vec<Complex64> = nus
            .iter()
            .map(|&v| Complex64::new(0.0, -a * b) / Complex64::new(v - 50.0, s))
            .collect();
        let cut = Cut::new(Axis::Nu, 50.0, nus, vals, Component::Real).unwrap();
        let init = FitReport {
            kind: FitKind::ThickModel,
            params: [
                ("A", 1.0),
                ("b_t", 2e-4),
                ("x", 50.1),
                ("S_gamma", 1.4),
                ("h_re", 0.0),
                ("h_im", 0.0),
            ]
            .iter()
            .map(|&(n, v)| FitParam {
                name: n.into(),
                value: v,
                stderr: 0.0,
            })
            .collect(),
            fit_range: (0.0, 0.0),
            n_points: 0,
            residual_norm: 0.0,
            converged: true,
        };
        let r = fit_thick_model(&cut, Some(&init)).unwrap();
        assert!((r.value("A") * r.value("b_t") - a * b).abs() < 1e-3 * a * b);
    }

    #[test]
    fn cavity_self_consistency() {
        let nus: Vec<f64> = (0..401).map(|k| 0.5 * k as f64).collect();
        let vals = nus
            .iter()
            .map(|&v| Complex64::new(cavity_model(1.0, 0.3, 100.0, 2.0, v), 0.0))
            .collect();
        let cut = Cut::new(Axis::Nu, 100.0, nus, vals, Component::Abs).unwrap();
        let r = fit_cavity_model(&cut, &CavityFitOptions::default()).unwrap();
        for (n, v) in [("A", 1.0), ("p", 0.3), ("x", 100.0), ("S_gamma", 2.0)] {
            assert!((r.value(n) - v).abs() < 1e-6, "{n}: {}", r.value(n));
        }
    }

    #[test]
    fn cavity_large_x_is_two_lorentzians() {
        let (x, s) = (150.0, 2.0);
        for k in -8..=8 {
            let nu = x + 0.25 * k as f64;
            let d2 = cavity_model(1.0, 1.0, x, s, nu).powi(2);
            let lor = 1.0 / (2.0 * ((nu - x).powi(2) + s * s));
            assert!((d2 / lor - 1.0).abs() < 0.03, "{nu}");
        }
    }
}
