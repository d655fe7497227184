//! The hybrid solver: one classicalized particle coupled to a 1D quantum
//! field through a quasi-trajectory field.
//!
//! State per step: the stored quantum field Φ(x₂) with |Φ|² = ρ₂, the
//! quasi-trajectory field f₁(x₂), the classical velocity field w(x₂) and the
//! scalar mean trajectory R₁. The composite step is a symmetric splitting:
//!
//!   1. half kinetic phase on Φ (spectral),
//!   2. coupled field update over the full dt — ∂ₜf₁ = w,
//!      ∂ₜw + v₂q·∂ₓw = −(1/m₁)·∂₁V(f₁(x₂), x₂) by semi-Lagrangian
//!      backtrace with cubic interpolation, dR₁/dt = ∫ρ₂·w·dx — with the
//!      advection velocity v₂q frozen at the sub-step midpoint state
//!      (half kinetic and half potential phase applied),
//!   3. full potential phase exp(−i·dt·V(f₁(x₂), x₂)/ħ) on Φ, time-centered
//!      as the average of the pre- and post-update fields,
//!   4. half kinetic phase.
//!
//! Steps 1, 3 and 4 are unitary, so the norm of Φ is conserved exactly.
//! See [`HybridPropagator`] internals for why the phase potential carries
//! the interaction term only.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{gaussian_packet, ComplexField1D, RealField1D};
use crate::grid::Grid1D;
use crate::interp::{cubic_periodic, nearest_good_fill};
use crate::params::PhysParams;
use crate::potential::PotentialSpec;
use crate::spectral::Spectral1D;

/// Relative density floor below which phase-derived fields are continued
/// from the nearest above-floor node.
pub const DENSITY_FLOOR: f64 = 1e-12;

/// Full state of one hybrid run.
#[derive(Debug, Clone)]
pub struct HybridState {
    pub t: f64,
    /// Stored quantum field Φ(x₂); |Φ|² is the density of particle 2.
    pub phi: ComplexField1D,
    /// Quasi-trajectory field f₁(x₂).
    pub f1: RealField1D,
    /// Velocity field w(x₂) of the classicalized particle.
    pub w: RealField1D,
    /// Mean trajectory R₁ of the classicalized particle.
    pub r1: f64,
}

impl HybridState {
    pub fn grid(&self) -> &Grid1D {
        &self.phi.grid
    }

    pub fn is_finite(&self) -> bool {
        self.phi.is_finite() && self.f1.is_finite() && self.w.is_finite() && self.r1.is_finite()
    }
}

/// Initial hybrid state: uniform f₁ ≡ r1_0, uniform w ≡ v1_0 and a resting
/// Gaussian packet of width parameter `alpha` centered at the origin.
pub fn init_hybrid(grid: &Grid1D, alpha: f64, r1_0: f64, v1_0: f64) -> Result<HybridState> {
    let phi = gaussian_packet(grid, alpha, 0.0, 0.0)?;
    Ok(HybridState {
        t: 0.0,
        f1: RealField1D::uniform(grid.clone(), r1_0),
        w: RealField1D::uniform(grid.clone(), v1_0),
        phi,
        r1: r1_0,
    })
}

/// Current velocity of the quantum particle, (ħ/m₂)·Im(Φ′/Φ) with the
/// spectral derivative Φ′.
///
/// Nodes whose density sits below `DENSITY_FLOOR` relative to the peak take
/// the value of the nearest above-floor node instead of the raw ratio.
pub fn quantum_velocity(phi: &ComplexField1D, params: &PhysParams) -> RealField1D {
    let mut sp = Spectral1D::new(phi.grid.n);
    quantum_velocity_with(phi, params, &mut sp)
}

fn quantum_velocity_with(
    phi: &ComplexField1D,
    params: &PhysParams,
    sp: &mut Spectral1D,
) -> RealField1D {
    let dphi = sp.derivative(&phi.values, phi.grid.wavenumbers());
    let rho = phi.density();
    let rho_max = rho.iter().cloned().fold(0.0_f64, f64::max);
    let floor = DENSITY_FLOOR * rho_max;
    let scale = params.hbar / params.m2;
    let mut good = vec![false; rho.len()];
    let mut values = vec![0.0; rho.len()];
    for j in 0..rho.len() {
        if rho[j] >= floor && rho[j] > 0.0 {
            values[j] = scale * (phi.values[j].conj() * dphi[j]).im / rho[j];
            good[j] = true;
        }
    }
    nearest_good_fill(&mut values, &good);
    RealField1D {
        grid: phi.grid.clone(),
        values,
    }
}

/// ∂ₓ ln ρ with the same floor-and-fill policy as [`quantum_velocity`];
/// used by the conserved-energy quadrature.
pub fn log_density_slope(phi: &ComplexField1D) -> RealField1D {
    let mut sp = Spectral1D::new(phi.grid.n);
    let dphi = sp.derivative(&phi.values, phi.grid.wavenumbers());
    let rho = phi.density();
    let rho_max = rho.iter().cloned().fold(0.0_f64, f64::max);
    let floor = DENSITY_FLOOR * rho_max;
    let mut good = vec![false; rho.len()];
    let mut values = vec![0.0; rho.len()];
    for j in 0..rho.len() {
        if rho[j] >= floor && rho[j] > 0.0 {
            values[j] = 2.0 * (phi.values[j].conj() * dphi[j]).re / rho[j];
            good[j] = true;
        }
    }
    nearest_good_fill(&mut values, &good);
    RealField1D {
        grid: phi.grid.clone(),
        values,
    }
}

/// Per-step diagnostics the runner aggregates into the manifest.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepDiag {
    /// max|v₂q|·dt/dx of the step; semi-Lagrangian stays stable above 1 but
    /// accuracy is flagged.
    pub cfl: f64,
}

/// Propagator holding the plans and phase tables of one hybrid run.
pub struct HybridPropagator {
    dt: f64,
    pot: PotentialSpec,
    params: PhysParams,
    sp: Spectral1D,
    /// exp(−i·(dt/2)·ħk²/(2m₂)) per mode.
    half_kinetic: Vec<Complex64>,
}

impl HybridPropagator {
    pub fn new(grid: &Grid1D, dt: f64, pot: &PotentialSpec, params: &PhysParams) -> Self {
        let half_kinetic = grid
            .wavenumbers()
            .iter()
            .map(|&k| {
                let e = params.hbar * params.hbar * k * k / (2.0 * params.m2);
                Complex64::from_polar(1.0, -0.5 * dt * e / params.hbar)
            })
            .collect();
        HybridPropagator {
            dt,
            pot: *pot,
            params: *params,
            sp: Spectral1D::new(grid.n),
            half_kinetic,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn half_kinetic(&mut self, phi: &mut ComplexField1D) {
        self.sp.forward(&mut phi.values);
        for (v, ph) in phi.values.iter_mut().zip(&self.half_kinetic) {
            *v *= ph;
        }
        self.sp.inverse(&mut phi.values);
    }

    /// Phase potential U(x₂) = V(f₁(x₂), x₂) nodewise.
    ///
    /// The evolution operator's −(m₁/2)w² term stays out of the stored
    /// phase: its gradient would enter the quantum velocity and leak the
    /// conserved energy at the rate m₁∫ρ·v₂·w·∂ₓw (in the two-slot picture
    /// that term is a pointwise rotation and never transports ρ₂).
    fn effective_potential(&self, f1: &[f64], nodes: &[f64]) -> Vec<f64> {
        nodes
            .iter()
            .zip(f1.iter())
            .map(|(&x, &f)| self.pot.value(f, x))
            .collect()
    }

    /// One composite step; `step_index` only labels divergence errors.
    #[allow(clippy::needless_range_loop)]
    pub fn step(&mut self, state: &mut HybridState, step_index: usize) -> Result<StepDiag> {
        let dt = self.dt;
        let grid = state.phi.grid.clone();
        let n = grid.n;
        let dx = grid.dx;
        let nodes = grid.nodes();
        let inv_m1 = 1.0 / self.params.m1;

        // (1) half kinetic
        self.half_kinetic(&mut state.phi);

        // (2) coupled field update with v₂q frozen at the midpoint state:
        // the half potential phase of the current fields is applied to a
        // scratch copy before the phase derivative is taken.
        let veff_old = self.effective_potential(&state.f1.values, nodes);
        let mut phi_mid = state.phi.clone();
        for (v, &ve) in phi_mid.values.iter_mut().zip(&veff_old) {
            *v *= Complex64::from_polar(1.0, -0.5 * dt * ve / self.params.hbar);
        }
        let v2q = quantum_velocity_with(&phi_mid, &self.params, &mut self.sp);
        drop(phi_mid);

        let rho = state.phi.density();
        let f_half: Vec<f64> = state
            .f1
            .values
            .iter()
            .zip(&state.w.values)
            .map(|(&f, &wv)| f + 0.5 * dt * wv)
            .collect();

        let mut cfl = 0.0_f64;
        let mut w_new = vec![0.0; n];
        for j in 0..n {
            let v_here = v2q.values[j];
            cfl = cfl.max((v_here * dt / dx).abs());
            // midpoint backtrace of the characteristic, in index units
            let u_mid = j as f64 - 0.5 * dt * v_here / dx;
            let v_mid = cubic_periodic(&v2q.values, u_mid);
            let u_dep = j as f64 - dt * v_mid / dx;
            let u_half = j as f64 - 0.5 * dt * v_mid / dx;
            let w_adv = cubic_periodic(&state.w.values, u_dep);
            let f_at_half = cubic_periodic(&f_half, u_half);
            let x_half = grid.position_of_index(u_half);
            let accel = -inv_m1 * self.pot.dv1(f_at_half, x_half);
            w_new[j] = w_adv + dt * accel;
        }

        // pointwise trapezoid for f₁ and the ρ-weighted mean for R₁
        let mut r1_rate = 0.0;
        for j in 0..n {
            let w_avg = 0.5 * (state.w.values[j] + w_new[j]);
            state.f1.values[j] += dt * w_avg;
            r1_rate += rho[j] * w_avg;
        }
        state.r1 += dt * r1_rate * dx;
        state.w.values = w_new;

        // (3) full potential phase, V_eff time-centered over the field update
        let veff_new = self.effective_potential(&state.f1.values, nodes);
        for ((v, &v0), &v1) in state.phi.values.iter_mut().zip(&veff_old).zip(&veff_new) {
            let ve = 0.5 * (v0 + v1);
            *v *= Complex64::from_polar(1.0, -dt * ve / self.params.hbar);
        }

        // (4) half kinetic
        self.half_kinetic(&mut state.phi);

        state.t += dt;
        if !state.is_finite() {
            return Err(Error::Diverged {
                step: step_index,
                what: "hybrid state picked up a non-finite value".into(),
            });
        }
        Ok(StepDiag { cfl })
    }
}

/// One composite step as a standalone operation. Long runs should hold a
/// [`HybridPropagator`] instead of re-planning every call.
pub fn step_hybrid(
    state: &HybridState,
    dt: f64,
    pot: &PotentialSpec,
    params: &PhysParams,
) -> Result<HybridState> {
    if !dt.is_finite() || dt <= 0.0 || dt > 1e-2 {
        return Err(Error::config(format!("dt must lie in (0, 1e-2], got {dt}")));
    }
    let mut next = state.clone();
    let mut prop = HybridPropagator::new(state.grid(), dt, pot, params);
    prop.step(&mut next, 0)?;
    Ok(next)
}
