use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NrsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("grid too coarse: {0}")]
    Resolution(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("series regime exceeded: b*t = {0} > 50")]
    Regime(f64),
    #[error("not enough points for fit: need {need}, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("fit failed: {0}")]
    FitFailed(String),
    #[error("coordinate {at} outside grid [{lo}, {hi}]")]
    OutsideGrid { at: f64, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, NrsError>;

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(NrsError::Domain(format!("{name} is not finite ({v})")))
    }
}
