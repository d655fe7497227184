//! Uniform periodic 1D grids with spectral wavenumber metadata.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Uniform periodic grid on [x_min, x_max); node n is identified with node 0.
///
/// The node count must be a power of two (≥ 16) so every spectral step runs
/// through the same radix-2 transform path. Cheap to clone: node and
/// wavenumber tables are shared.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub dx: f64,
    nodes: Arc<Vec<f64>>,
    wavenumbers: Arc<Vec<f64>>,
}

/// Build a periodic grid with spacing dx = (x_max − x_min)/n.
///
/// Wavenumbers follow FFT ordering: k_j = 2π·m/(x_max−x_min) with the mode
/// index m running over [−n/2, n/2).
pub fn make_grid(x_min: f64, x_max: f64, n: usize) -> Result<Grid1D> {
    if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
        return Err(Error::config(format!(
            "degenerate interval [{x_min}, {x_max})"
        )));
    }
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::config(format!(
            "grid size must be a power of two >= 16, got {n}"
        )));
    }
    let length = x_max - x_min;
    let dx = length / n as f64;
    let nodes: Vec<f64> = (0..n).map(|j| x_min + j as f64 * dx).collect();
    let wavenumbers: Vec<f64> = (0..n)
        .map(|j| {
            let m = if j < n / 2 {
                j as i64
            } else {
                j as i64 - n as i64
            };
            2.0 * PI * m as f64 / length
        })
        .collect();
    Ok(Grid1D {
        x_min,
        x_max,
        n,
        dx,
        nodes: Arc::new(nodes),
        wavenumbers: Arc::new(wavenumbers),
    })
}

impl Grid1D {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Wavenumbers in FFT ordering, mode index m ∈ [−n/2, n/2).
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// Map a fractional node index onto the position of its periodic image
    /// in [x_min, x_max).
    pub fn position_of_index(&self, idx: f64) -> f64 {
        let n = self.n as f64;
        let wrapped = idx.rem_euclid(n);
        self.x_min + wrapped * self.dx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_first_wavenumber() {
        let g = make_grid(-10.0, 10.0, 256).unwrap();
        assert_eq!(g.dx, 0.078125);
        // smallest positive wavenumber is 2π/L
        assert!((g.wavenumbers()[1] - 2.0 * PI / 20.0).abs() < 1e-15);
        assert!((g.wavenumbers()[1] - 0.31416).abs() < 1e-5);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(make_grid(-10.0, 10.0, 100).is_err());
        assert!(make_grid(-10.0, 10.0, 8).is_err());
        assert!(make_grid(10.0, -10.0, 256).is_err());
    }

    #[test]
    fn wavenumbers_antisymmetric() {
        // k_{-m} = -k_m for every paired mode; mode indices m and -m sit at
        // FFT bins j and n-j.
        let g = make_grid(-10.0, 10.0, 64).unwrap();
        let k = g.wavenumbers();
        assert_eq!(k[0], 0.0);
        for j in 1..g.n / 2 {
            assert_eq!(k[g.n - j], -k[j]);
        }
    }

    #[test]
    fn position_wraps_periodically() {
        let g = make_grid(-10.0, 10.0, 16).unwrap();
        assert_eq!(g.position_of_index(0.0), -10.0);
        assert_eq!(g.position_of_index(16.0), -10.0);
        assert_eq!(g.position_of_index(-1.0), g.position_of_index(15.0));
    }
}
