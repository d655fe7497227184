//! Physical parameters in the natural unit system used throughout the crate:
//! ħ = 1, the reference length λ = 1 and m₂ = 1/2, so that the diffusion
//! constant of particle 2 is ν₂ = ħ/(2m₂) = 1 and time is already the
//! dimensionless T of the scenario presets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Masses, ħ and the derived per-particle noise intensities ν_i = ħ/(2 m_i).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    /// Mass of the classicalized particle, m₁ = mass_ratio · m₂.
    pub m1: f64,
    /// Mass of the quantum particle, fixed at 1/2 in natural units.
    pub m2: f64,
    /// Reduced Planck constant, fixed at 1.
    pub hbar: f64,
    /// m₁ / m₂.
    pub mass_ratio: f64,
    /// ν₁ = ħ / (2 m₁).
    pub nu1: f64,
    /// ν₂ = ħ / (2 m₂).
    pub nu2: f64,
}

impl PhysParams {
    /// Natural-unit parameter set for a given mass ratio m₁/m₂.
    ///
    /// The default scenario ratio is 5, giving m₁ = 5/2 and ν₁ = 1/5.
    pub fn natural(mass_ratio: f64) -> Result<Self> {
        if !mass_ratio.is_finite() || mass_ratio <= 0.0 {
            return Err(Error::config(format!(
                "mass_ratio must be positive and finite, got {mass_ratio}"
            )));
        }
        let hbar = 1.0;
        let m2 = 0.5;
        let m1 = mass_ratio * m2;
        Ok(PhysParams {
            m1,
            m2,
            hbar,
            mass_ratio,
            nu1: hbar / (2.0 * m1),
            nu2: hbar / (2.0 * m2),
        })
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams::natural(5.0).expect("default mass ratio is valid")
    }
}
