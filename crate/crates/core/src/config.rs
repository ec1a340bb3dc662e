use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit system: reduced Planck constant and Boltzmann constant.
///
/// Oscillator mass and frequency are fixed to one for the canonical
/// quadratures, so `x` and `p` only carry units through `hbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysConfig {
    pub hbar: f64,
    pub kb: f64,
}

impl Default for PhysConfig {
    fn default() -> Self {
        PhysConfig { hbar: 1.0, kb: 1.0 }
    }
}

impl PhysConfig {
    pub fn new(hbar: f64, kb: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        if !(kb > 0.0 && kb.is_finite()) {
            return Err(Error::Domain(format!("kB must be positive, got {kb}")));
        }
        Ok(PhysConfig { hbar, kb })
    }

    pub fn with_hbar(hbar: f64) -> Result<Self> {
        Self::new(hbar, 1.0)
    }
}
