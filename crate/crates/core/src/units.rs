//! Physical constants and the γ-based unit system.
//!
//! Every frequency in the crate is measured in units of the single-nucleus
//! line width γ and every time in units of 1/γ.

use crate::error::{ensure_finite, NrsError, Result};
use serde::{Deserialize, Serialize};

/// Reduced Planck constant in eV·s.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;
/// Natural line width of the 14.4 keV transition of ⁵⁷Fe in eV.
pub const GAMMA_FE57_EV: f64 = 4.7e-9;
/// Transition energy of ⁵⁷Fe in eV.
pub const E_FE57_EV: f64 = 14_412.5;
/// ħc in eV·m.
pub const HBAR_C_EV_M: f64 = 1.973_269_804e-7;
/// Internal conversion coefficient of the ⁵⁷Fe transition.
pub const ALPHA_IC_FE57: f64 = 8.56;

/// Wave number of the ⁵⁷Fe resonant radiation in 1/m.
pub fn k_fe57() -> f64 {
    E_FE57_EV / HBAR_C_EV_M
}

/// ħ/γ in nanoseconds for a line width given in eV.
pub fn lifetime_ns(gamma_ev: f64) -> f64 {
    HBAR_EV_S / gamma_ev * 1e9
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    /// γ in eV.
    pub gamma_ref: f64,
    /// ħ/γ in ns.
    pub lifetime_ns: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units {
            gamma_ref: GAMMA_FE57_EV,
            lifetime_ns: lifetime_ns(GAMMA_FE57_EV),
        }
    }
}

impl Units {
    pub fn new(gamma_ref: f64, lifetime_ns: f64) -> Result<Self> {
        let u = Units {
            gamma_ref,
            lifetime_ns,
        };
        u.validate()?;
        Ok(u)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("gamma_ref", self.gamma_ref)?;
        ensure_finite("lifetime_ns", self.lifetime_ns)?;
        if self.gamma_ref <= 0.0 || self.lifetime_ns <= 0.0 {
            return Err(NrsError::Domain(
                "gamma_ref and lifetime_ns must be positive".into(),
            ));
        }
        let product = self.lifetime_ns * 1e-9 * self.gamma_ref;
        if ((product - HBAR_EV_S) / HBAR_EV_S).abs() > 5e-3 {
            return Err(NrsError::Domain(format!(
                "lifetime_ns * gamma_ref = {product:.4e} eV s, inconsistent with hbar"
            )));
        }
        Ok(())
    }

    pub fn ns_to_time(&self, ns: f64) -> f64 {
        ns / self.lifetime_ns
    }

    pub fn time_to_ns(&self, t: f64) -> f64 {
        t * self.lifetime_ns
    }
}

/// Thickness parameter b = π ρ f_LM γ d / (k² (1 + α)).
///
/// The result carries the unit of `gamma_i`; pass `gamma_i = 1` to obtain b in γ.
pub fn thickness_param(
    rho: f64,
    f_lm: f64,
    gamma_i: f64,
    k: f64,
    d: f64,
    alpha_ic: f64,
) -> Result<f64> {
    for (name, v) in [
        ("rho", rho),
        ("f_LM", f_lm),
        ("gamma", gamma_i),
        ("k", k),
        ("d", d),
        ("alpha_ic", alpha_ic),
    ] {
        ensure_finite(name, v)?;
        if v < 0.0 {
            return Err(NrsError::Domain(format!("{name} must be non-negative")));
        }
    }
    if k <= 0.0 {
        return Err(NrsError::Domain("k must be positive".into()));
    }
    Ok(std::f64::consts::PI * rho * f_lm * gamma_i * d / (k * k * (1.0 + alpha_ic)))
}
