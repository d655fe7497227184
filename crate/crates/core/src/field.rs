//! Complex and real scalar fields on a periodic grid, with the quadratures
//! every solver shares.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Complex amplitudes on a [`Grid1D`]; |values|² is a probability density.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField1D {
    pub grid: Grid1D,
    pub values: Vec<Complex64>,
}

/// Real samples on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealField1D {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl ComplexField1D {
    pub fn zeros(grid: Grid1D) -> Self {
        let n = grid.n;
        ComplexField1D {
            grid,
            values: vec![Complex64::ZERO; n],
        }
    }

    /// Discrete squared norm Σ|values_j|²·dx.
    pub fn norm2(&self) -> f64 {
        let dx = self.grid.dx;
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx
    }

    /// Probability density |Φ_j|² at every node.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// L² distance Σ|a_j − b_j|²·dx, squared-rooted.
    pub fn l2_distance(&self, other: &ComplexField1D) -> f64 {
        assert_eq!(self.values.len(), other.values.len());
        let dx = self.grid.dx;
        (self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            * dx)
            .sqrt()
    }

    /// L² distance minimized over a global phase rotation of `self`.
    ///
    /// The stored field of the hybrid solver is defined up to a global phase
    /// (a spatially uniform term in its evolution operator only rotates it),
    /// so field-level oracle comparisons use this gauge-fixed distance:
    /// √(‖a‖² + ‖b‖² − 2|⟨a,b⟩|).
    pub fn l2_distance_phase_aligned(&self, other: &ComplexField1D) -> f64 {
        assert_eq!(self.values.len(), other.values.len());
        let dx = self.grid.dx;
        let overlap: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let cross = 2.0 * (overlap * dx).norm();
        let sq = self.norm2() + other.norm2() - cross;
        sq.max(0.0).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl RealField1D {
    pub fn uniform(grid: Grid1D, value: f64) -> Self {
        let n = grid.n;
        RealField1D {
            grid,
            values: vec![value; n],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Normalized Gaussian wavepacket (2α/π)^{1/4}·exp(−α(x−center)² + i·k·x).
///
/// The discrete norm of a packet well inside the domain matches the continuum
/// normalization to near machine precision, so no renormalization is applied.
pub fn gaussian_packet(
    grid: &Grid1D,
    alpha: f64,
    center: f64,
    wavenumber: f64,
) -> Result<ComplexField1D> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::config(format!(
            "gaussian width parameter alpha must be positive, got {alpha}"
        )));
    }
    let amp = (2.0 * alpha / std::f64::consts::PI).powf(0.25);
    let values = grid
        .nodes()
        .iter()
        .map(|&x| {
            let envelope = amp * (-alpha * (x - center) * (x - center)).exp();
            Complex64::from_polar(envelope, wavenumber * x)
        })
        .collect();
    Ok(ComplexField1D {
        grid: grid.clone(),
        values,
    })
}

/// True when the packet tail still carries relative density above `threshold`
/// at the domain edges; callers surface this as a run warning.
pub fn boundary_contact(field: &ComplexField1D, threshold: f64) -> bool {
    let rho = field.density();
    let max = rho.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return false;
    }
    let edge = rho[0].max(rho[rho.len() - 1]);
    edge > threshold * max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    fn reference_grid() -> Grid1D {
        make_grid(-10.0, 10.0, 512).unwrap()
    }

    #[test]
    fn packet_is_normalized() {
        let g = reference_grid();
        for alpha in [0.5, 1.0, 2.0] {
            let f = gaussian_packet(&g, alpha, 0.0, 0.0).unwrap();
            assert!(
                (f.norm2() - 1.0).abs() < 1e-12,
                "norm² off for alpha={alpha}: {}",
                f.norm2()
            );
        }
    }

    #[test]
    fn packet_peak_value() {
        let g = reference_grid();
        let f = gaussian_packet(&g, 1.0, 0.0, 0.0).unwrap();
        // node at x = 0 exists (n even, symmetric domain)
        let j0 = g.nodes().iter().position(|&x| x == 0.0).unwrap();
        let expected = (2.0 / std::f64::consts::PI).powf(0.25);
        assert!((f.values[j0].re - expected).abs() < 1e-14);
        assert_eq!(f.values[j0].im, 0.0);
    }

    #[test]
    fn packet_second_moment_matches_closed_form() {
        // discrete quadrature of x²ρ against the Gaussian moment 1/(4α)
        let g = reference_grid();
        let alpha = 0.5;
        let f = gaussian_packet(&g, alpha, 0.0, 0.0).unwrap();
        let m2: f64 = g
            .nodes()
            .iter()
            .zip(f.density())
            .map(|(&x, rho)| x * x * rho)
            .sum::<f64>()
            * g.dx;
        assert!((m2 - 1.0 / (4.0 * alpha)).abs() < 1e-12, "got {m2}");
        assert!((m2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_alpha() {
        let g = reference_grid();
        assert!(gaussian_packet(&g, 0.0, 0.0, 0.0).is_err());
        assert!(gaussian_packet(&g, -1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn boundary_contact_flags_wide_packets() {
        let g = make_grid(-10.0, 10.0, 256).unwrap();
        let narrow = gaussian_packet(&g, 1.0, 0.0, 0.0).unwrap();
        assert!(!boundary_contact(&narrow, 1e-10));
        let touching = gaussian_packet(&g, 0.01, 8.0, 0.0).unwrap();
        assert!(boundary_contact(&touching, 1e-10));
    }

    #[test]
    fn phase_aligned_distance_ignores_global_phase() {
        let g = reference_grid();
        let f = gaussian_packet(&g, 1.0, 0.0, 0.0).unwrap();
        let mut rotated = f.clone();
        let phase = Complex64::from_polar(1.0, 1.234);
        for v in &mut rotated.values {
            *v *= phase;
        }
        assert!(f.l2_distance(&rotated) > 0.5);
        // the √(…) form floors at √eps
        assert!(f.l2_distance_phase_aligned(&rotated) < 1e-7);
    }
}
