//! Interaction potentials V(x₁, x₂) with analytic first derivatives.

use serde::{Deserialize, Serialize};

/// Tagged interaction potential; all variants expose V and both partials
/// in closed form, so no solver ever differentiates numerically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// No interaction.
    Zero,
    /// V = (K/2)(x₁ − x₂)².
    Harmonic { k: f64 },
    /// V = A·exp(−(x₁ − x₂)²/width²).
    GaussianRepulsive { amplitude: f64, width: f64 },
}

impl PotentialSpec {
    /// Scenario default spring constant in natural units.
    pub fn harmonic_default() -> Self {
        PotentialSpec::Harmonic { k: 1.0 }
    }

    pub fn repulsive_default() -> Self {
        PotentialSpec::GaussianRepulsive {
            amplitude: 1.0,
            width: 1.0,
        }
    }

    /// Value and both partial derivatives (V, ∂V/∂x₁, ∂V/∂x₂).
    pub fn eval(&self, x1: f64, x2: f64) -> (f64, f64, f64) {
        match *self {
            PotentialSpec::Zero => (0.0, 0.0, 0.0),
            PotentialSpec::Harmonic { k } => {
                let d = x1 - x2;
                (0.5 * k * d * d, k * d, -k * d)
            }
            PotentialSpec::GaussianRepulsive { amplitude, width } => {
                let d = x1 - x2;
                let w2 = width * width;
                let v = amplitude * (-d * d / w2).exp();
                let dv1 = -2.0 * d / w2 * v;
                (v, dv1, -dv1)
            }
        }
    }

    pub fn value(&self, x1: f64, x2: f64) -> f64 {
        self.eval(x1, x2).0
    }

    /// ∂V/∂x₁.
    pub fn dv1(&self, x1: f64, x2: f64) -> f64 {
        self.eval(x1, x2).1
    }

    /// ∂V/∂x₂.
    pub fn dv2(&self, x1: f64, x2: f64) -> f64 {
        self.eval(x1, x2).2
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PotentialSpec::Zero)
    }
}
