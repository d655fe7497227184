//! Thin wrapper around rustfft for the periodic transforms used by the
//! solvers: in-place forward/inverse pairs and first derivatives.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Planned forward/inverse transform pair for one grid size.
pub struct Spectral1D {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Spectral1D {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Spectral1D {
            n,
            forward,
            inverse,
            scratch: vec![Complex64::ZERO; scratch_len],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Unnormalized forward transform, in place.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n);
        self.forward.process_with_scratch(data, &mut self.scratch);
    }

    /// Inverse transform including the 1/n normalization, in place.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n);
        self.inverse.process_with_scratch(data, &mut self.scratch);
        let scale = 1.0 / self.n as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    /// Spectral first derivative: multiply by ik mode-wise.
    ///
    /// The unpaired Nyquist mode is dropped, keeping the derivative operator
    /// antisymmetric (real fields keep real derivatives).
    pub fn derivative(&mut self, data: &[Complex64], wavenumbers: &[f64]) -> Vec<Complex64> {
        let mut hat = data.to_vec();
        self.forward(&mut hat);
        let nyquist = self.n / 2;
        for (j, v) in hat.iter_mut().enumerate() {
            if j == nyquist {
                *v = Complex64::ZERO;
            } else {
                *v *= Complex64::new(0.0, wavenumbers[j]);
            }
        }
        self.inverse(&mut hat);
        hat
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn roundtrip_preserves_data() {
        let mut sp = Spectral1D::new(64);
        let orig: Vec<Complex64> = (0..64)
            .map(|j| Complex64::new((j as f64 * 0.3).sin(), (j as f64 * 0.17).cos()))
            .collect();
        let mut data = orig.clone();
        sp.forward(&mut data);
        sp.inverse(&mut data);
        for (a, b) in orig.iter().zip(&data) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_plane_wave() {
        let g = make_grid(-10.0, 10.0, 128).unwrap();
        let k = g.wavenumbers()[3];
        let data: Vec<Complex64> = g
            .nodes()
            .iter()
            .map(|&x| Complex64::from_polar(1.0, k * x))
            .collect();
        let mut sp = Spectral1D::new(g.n);
        let d = sp.derivative(&data, g.wavenumbers());
        for (v, dv) in data.iter().zip(&d) {
            let expected = Complex64::new(0.0, k) * v;
            assert!((dv - expected).norm() < 1e-10);
        }
    }
}
