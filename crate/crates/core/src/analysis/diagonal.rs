use crate::error::{NrsError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    DiagonalLine,
    ThickModel,
    CavityModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitParam {
    pub name: String,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub kind: FitKind,
    pub params: Vec<FitParam>,
    pub fit_range: (f64, f64),
    pub n_points: usize,
    pub residual_norm: f64,
    pub converged: bool,
}

impl FitReport {
    pub fn param(&self, name: &str) -> Option<&FitParam> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn value(&self, name: &str) -> f64 {
        self.param(name).map_or(f64::NAN, |p| p.value)
    }

    pub fn stderr(&self, name: &str) -> f64 {
        self.param(name).map_or(f64::NAN, |p| p.stderr)
    }
}

/// ν = slope·Δ + offset with the slope fixed; points are (Δ, ν).
pub fn fit_diagonal(points: &[(f64, f64)], slope: f64) -> Result<FitReport> {
    let n = points.len();
    if n < 3 {
        return Err(NrsError::TooFewPoints { need: 3, got: n });
    }
    let r: Vec<f64> = points.iter().map(|(d, nu)| nu - slope * d).collect();
    let mean = r.iter().sum::<f64>() / n as f64;
    let var = r.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.0), b.max(p.0))
        });
    Ok(FitReport {
        kind: FitKind::DiagonalLine,
        params: vec![FitParam {
            name: "offset".into(),
            value: mean,
            stderr: (var / n as f64).sqrt(),
        }],
        fit_range: (lo, hi),
        n_points: n,
        residual_norm: r.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt(),
        converged: true,
    })
}

/// Fits after dropping the `step·j` lowest-Δ points, j = 1..=n_trials, and
/// keeps the smallest stderr; ties go to the larger point count.
pub fn optimize_fit_range(
    points: &[(f64, f64)],
    slope: f64,
    n_trials: usize,
    step: usize,
) -> Result<FitReport> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<FitReport> = None;
    for j in 1..=n_trials {
        let Some(sub) = pts.get(step * j..) else {
            break;
        };
        let Ok(rep) = fit_diagonal(sub, slope) else {
            break;
        };
        let se = rep.stderr("offset");
        let better = match &best {
            None => se.is_finite(),
            Some(b) => {
                let bs = b.stderr("offset");
                se < bs || (se == bs && rep.n_points > b.n_points)
            }
        };
        if better {
            best = Some(rep);
        }
    }
    best.ok_or(NrsError::TooFewPoints {
        need: step + 3,
        got: points.len(),
    })
}

/// Groups (Δ, ν) points by their intercept ν − slope·Δ, splitting at gaps.
pub fn cluster(points: &[(f64, f64)], slope: f64, gap: f64) -> Vec<Vec<(f64, f64)>> {
    let key = |p: &(f64, f64)| p.1 - slope * p.0;
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| key(a).total_cmp(&key(b)));
    let mut out: Vec<Vec<(f64, f64)>> = Vec::new();
    for p in pts {
        match out.last_mut() {
            Some(c) if key(&p) - key(c.last().unwrap()) <= gap => c.push(p),
            _ => out.push(vec![p]),
        }
    }
    for c in &mut out {
        c.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}
