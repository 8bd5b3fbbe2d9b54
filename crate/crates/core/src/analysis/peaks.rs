use super::cut::Cut;
use crate::error::{NrsError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PeakMode {
    #[default]
    Single,
    DoubleHump,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub position: f64,
    pub height: f64,
    pub prominence: f64,
}

/// Height above the higher of the two minima reached by walking downhill
/// from the peak (a local variant of topographic prominence).
pub fn prominence(y: &[f64], i: usize) -> f64 {
    let mut lo = i;
    while lo > 0 && y[lo - 1] <= y[lo] {
        lo -= 1;
    }
    let mut hi = i;
    while hi + 1 < y.len() && y[hi + 1] <= y[hi] {
        hi += 1;
    }
    y[i] - y[lo].max(y[hi])
}

/// Interior local maxima above `min_rel`·max, refined by a 3-point parabola.
pub fn local_maxima(x: &[f64], y: &[f64], min_rel: f64) -> Vec<Peak> {
    let ymax = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(ymax > 0.0) || y.len() < 3 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in 1..y.len() - 1 {
        if y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > min_rel * ymax {
            let (a, b, c) = (y[i - 1], y[i], y[i + 1]);
            let den = a - 2.0 * b + c;
            let d = if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 };
            let h = 0.5 * (x[i + 1] - x[i - 1]);
            out.push(Peak {
                position: x[i] + d * h,
                height: b - 0.25 * (a - c) * d,
                prominence: prominence(y, i),
            });
        }
    }
    out
}

/// Peak positions of the cut's component profile.
///
/// `DoubleHump` averages the two most prominent maxima into one position.
pub fn find_peaks(cut: &Cut, mode: PeakMode, min_prominence: f64) -> Result<Vec<f64>> {
    if cut.len() < 5 {
        return Err(NrsError::TooFewPoints {
            need: 5,
            got: cut.len(),
        });
    }
    let peaks = local_maxima(&cut.coords, &cut.profile(), min_prominence);
    Ok(match mode {
        PeakMode::Single => peaks.iter().map(|p| p.position).collect(),
        PeakMode::DoubleHump => {
            let mut by_prom = peaks.clone();
            by_prom.sort_by(|a, b| b.prominence.total_cmp(&a.prominence));
            match by_prom.len() {
                0 => Vec::new(),
                1 => vec![by_prom[0].position],
                _ => vec![0.5 * (by_prom[0].position + by_prom[1].position)],
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::cut::{Axis, Component};
    use num_complex::Complex64;

    fn cut_of(x: &[f64], y: &[f64]) -> Cut {
        let v = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Cut::new(Axis::Nu, 0.0, x.to_vec(), v, Component::Real).unwrap()
    }

    #[test]
    fn lorentzian_peak() {
        let x: Vec<f64> = (0..161).map(|k| 0.5 * k as f64).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| 1.0 / ((v - 40.13) * (v - 40.13) + 1.0))
            .collect();
        let p = find_peaks(&cut_of(&x, &y), PeakMode::Single, 0.1).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p[0] - 40.13).abs() < 0.05);
    }

    #[test]
    fn flat_cut_has_no_peaks() {
        let x: Vec<f64> = (0..20).map(|k| k as f64).collect();
        assert!(find_peaks(&cut_of(&x, &[1.0; 20]), PeakMode::Single, 0.1)
            .unwrap()
            .is_empty());
        assert!(find_peaks(&cut_of(&x[..3], &[1.0; 3]), PeakMode::Single, 0.1).is_err());
    }

    #[test]
    fn prominence_of_a_shoulder() {
        let y = [0.0, 3.0, 1.0, 2.0, 0.5];
        assert_eq!(prominence(&y, 1), 2.0);
        assert_eq!(prominence(&y, 3), 1.0);
    }
}
