use crate::error::{NrsError, Result};
use crate::ffc_core::FFCSpectrum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Direction a cut runs along. `Nu` is a vertical cut at fixed Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Nu,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    #[default]
    Real,
    Abs,
    Abs2,
}

impl Component {
    pub fn apply(&self, z: Complex64) -> f64 {
        match self {
            Component::Real => z.re,
            Component::Abs => z.norm(),
            Component::Abs2 => z.norm_sqr(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub axis: Axis,
    pub at: f64,
    pub coords: Vec<f64>,
    pub values: Vec<Complex64>,
    pub component_used: Component,
}

impl Cut {
    pub fn new(
        axis: Axis,
        at: f64,
        coords: Vec<f64>,
        values: Vec<Complex64>,
        component: Component,
    ) -> Result<Self> {
        if coords.len() != values.len() {
            return Err(NrsError::GridMismatch(
                "cut coordinates and values differ in length".into(),
            ));
        }
        if coords.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(NrsError::InvalidModel(
                "cut coordinates must increase strictly".into(),
            ));
        }
        Ok(Cut {
            axis,
            at,
            coords,
            values,
            component_used: component,
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn profile(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|&z| self.component_used.apply(z))
            .collect()
    }

    /// Sub-cut with coordinates in [lo, hi].
    pub fn window(&self, lo: f64, hi: f64) -> Cut {
        let (a, b) = (
            self.coords.partition_point(|&c| c < lo),
            self.coords.partition_point(|&c| c <= hi),
        );
        Cut {
            coords: self.coords[a..b].to_vec(),
            values: self.values[a..b].to_vec(),
            ..self.clone()
        }
    }

    pub fn with_component(mut self, c: Component) -> Self {
        self.component_used = c;
        self
    }
}

pub(crate) fn nearest_index(xs: &[f64], x: f64) -> usize {
    let j = xs.partition_point(|&v| v < x);
    if j == 0 {
        0
    } else if j == xs.len() || (x - xs[j - 1]) <= (xs[j] - x) {
        j.min(xs.len()) - 1
    } else {
        j
    }
}

/// Section through the spectrum at the grid point nearest to `at`.
pub fn take_cut(ffc: &FFCSpectrum, axis: Axis, at: f64, component: Component) -> Result<Cut> {
    let other = match axis {
        Axis::Nu => &ffc.deltas,
        Axis::Delta => &ffc.nus,
    };
    let (lo, hi) = (other[0], other[other.len() - 1]);
    let half = if other.len() > 1 {
        0.5 * (other[1] - other[0])
    } else {
        0.0
    };
    if !(at >= lo - half && at <= hi + half) {
        return Err(NrsError::OutsideGrid { at, lo, hi });
    }
    let k = nearest_index(other, at);
    let (coords, values) = match axis {
        Axis::Nu => (ffc.nus.clone(), ffc.column(k).to_vec()),
        Axis::Delta => (ffc.deltas.clone(), ffc.row(k)),
    };
    Cut::new(axis, other[k], coords, values, component)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffc_core::{Gate, Provenance};

    fn spec() -> FFCSpectrum {
        let vals = (0..12).map(|k| Complex64::new(k as f64, 1.0)).collect();
        FFCSpectrum::new(
            vec![0.0, 1.0, 2.0],
            vec![0.0, 5.0, 10.0, 15.0],
            vals,
            Gate::new(0.0, 1.0).unwrap(),
            Provenance::Raw,
        )
        .unwrap()
    }

    #[test]
    fn vertical_and_horizontal() {
        let f = spec();
        let c = take_cut(&f, Axis::Nu, 15.0, Component::Real).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.profile(), vec![9.0, 10.0, 11.0]);
        let h = take_cut(&f, Axis::Delta, 1.2, Component::Abs2).unwrap();
        assert_eq!(h.at, 1.0);
        assert_eq!(h.profile(), vec![2.0, 17.0, 50.0, 101.0]);
        assert!(take_cut(&f, Axis::Nu, 40.0, Component::Real).is_err());
    }

    #[test]
    fn nearest() {
        let xs = [0.0, 1.0, 2.0];
        assert_eq!(nearest_index(&xs, -3.0), 0);
        assert_eq!(nearest_index(&xs, 1.4), 1);
        assert_eq!(nearest_index(&xs, 1.6), 2);
        assert_eq!(nearest_index(&xs, 9.0), 2);
    }
}
