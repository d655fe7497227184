//! Exact quantum reference: the two-particle Schrödinger equation on a 2D
//! periodic grid, integrated by Strang-split spectral steps, plus the
//! closed-form free Gaussian used as a test oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{gaussian_packet, ComplexField1D};
use crate::grid::Grid1D;
use crate::params::PhysParams;
use crate::potential::PotentialSpec;
use crate::spectral::Spectral1D;

/// Two-particle wavefunction ψ(x₁, x₂) stored row-major: index i1·n₂ + i2.
#[derive(Debug, Clone)]
pub struct Wavefunction2D {
    pub grid1: Grid1D,
    pub grid2: Grid1D,
    pub values: Vec<Complex64>,
}

/// Which preset the initial product state belongs to; the choice fixes the
/// default x₁ phase wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitScenario {
    /// Harmonic runs: phase wavenumber m₁·v₁/ħ = −5/2 for v₁ = −1.
    Harmonic,
    /// Repulsive runs: explicit phase factor e^{−i·5·x₁}.
    Repulsive,
}

impl Wavefunction2D {
    pub fn norm2(&self) -> f64 {
        let w = self.grid1.dx * self.grid2.dx;
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * w
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn l2_distance(&self, other: &Wavefunction2D) -> f64 {
        let w = self.grid1.dx * self.grid2.dx;
        (self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            * w)
            .sqrt()
    }
}

/// Expectation values and conserved quantities of a two-particle state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QMObservables {
    pub t: f64,
    pub x1_mean: f64,
    pub x2_mean: f64,
    pub p1_mean: f64,
    pub p2_mean: f64,
    pub energy: f64,
    pub norm2: f64,
}

/// Product initial state: a moving Gaussian in x₁ (width parameter 2,
/// center 0.5) times the resting x₂ packet of width parameter `alpha`.
///
/// `phase_k` overrides the x₁ phase wavenumber when given; otherwise the
/// scenario default applies (−5 repulsive, −5/2 harmonic).
pub fn init_two_particle_state(
    grid1: &Grid1D,
    grid2: &Grid1D,
    alpha: f64,
    scenario: InitScenario,
    phase_k: Option<f64>,
) -> Result<Wavefunction2D> {
    let k1 = phase_k.unwrap_or(match scenario {
        InitScenario::Harmonic => -2.5,
        InitScenario::Repulsive => -5.0,
    });
    let packet1 = gaussian_packet(grid1, 2.0, 0.5, k1)?;
    let packet2 = gaussian_packet(grid2, alpha, 0.0, 0.0)?;
    let n2 = grid2.n;
    let mut values = vec![Complex64::ZERO; grid1.n * n2];
    for (i1, a) in packet1.values.iter().enumerate() {
        for (i2, b) in packet2.values.iter().enumerate() {
            values[i1 * n2 + i2] = a * b;
        }
    }
    Ok(Wavefunction2D {
        grid1: grid1.clone(),
        grid2: grid2.clone(),
        values,
    })
}

/// True when the state carries relative density above `threshold` on any
/// domain edge.
pub fn boundary_contact_2d(state: &Wavefunction2D, threshold: f64) -> bool {
    let (n1, n2) = (state.grid1.n, state.grid2.n);
    let rho_max = state
        .values
        .iter()
        .map(|v| v.norm_sqr())
        .fold(0.0_f64, f64::max);
    if rho_max == 0.0 {
        return false;
    }
    let mut edge = 0.0_f64;
    for i2 in 0..n2 {
        edge = edge.max(state.values[i2].norm_sqr());
        edge = edge.max(state.values[(n1 - 1) * n2 + i2].norm_sqr());
    }
    for i1 in 0..n1 {
        edge = edge.max(state.values[i1 * n2].norm_sqr());
        edge = edge.max(state.values[i1 * n2 + n2 - 1].norm_sqr());
    }
    edge > threshold * rho_max
}

/// Planned 2D transform: rows along x₂, a transpose, rows along x₁.
struct Fft2 {
    n1: usize,
    n2: usize,
    fft1: Spectral1D,
    fft2: Spectral1D,
    buf: Vec<Complex64>,
}

impl Fft2 {
    fn new(n1: usize, n2: usize) -> Self {
        Fft2 {
            n1,
            n2,
            fft1: Spectral1D::new(n1),
            fft2: Spectral1D::new(n2),
            buf: vec![Complex64::ZERO; n1 * n2],
        }
    }

    fn forward(&mut self, data: &mut [Complex64]) {
        for row in data.chunks_mut(self.n2) {
            self.fft2.forward(row);
        }
        transpose::transpose(data, &mut self.buf, self.n2, self.n1);
        for col in self.buf.chunks_mut(self.n1) {
            self.fft1.forward(col);
        }
        transpose::transpose(&self.buf, data, self.n1, self.n2);
    }

    fn inverse(&mut self, data: &mut [Complex64]) {
        for row in data.chunks_mut(self.n2) {
            self.fft2.inverse(row);
        }
        transpose::transpose(data, &mut self.buf, self.n2, self.n1);
        for col in self.buf.chunks_mut(self.n1) {
            self.fft1.inverse(col);
        }
        transpose::transpose(&self.buf, data, self.n1, self.n2);
    }
}

/// Split-step propagator for one (grids, dt, potential, params) combination.
/// Owns the plans and precomputed phase tables; long runs hold one of these
/// and step states through it.
pub struct Propagator2D {
    dt: f64,
    fft: Fft2,
    /// exp(−i·(dt/2)·(ħk₁²/2m₁ + ħk₂²/2m₂)) per mode pair.
    half_kinetic: Vec<Complex64>,
    /// exp(−i·dt·V(x₁,x₂)/ħ) per node pair.
    potential_phase: Vec<Complex64>,
}

impl Propagator2D {
    pub fn new(
        grid1: &Grid1D,
        grid2: &Grid1D,
        dt: f64,
        pot: &PotentialSpec,
        params: &PhysParams,
    ) -> Self {
        let (n1, n2) = (grid1.n, grid2.n);
        let mut half_kinetic = Vec::with_capacity(n1 * n2);
        for &k1 in grid1.wavenumbers() {
            for &k2 in grid2.wavenumbers() {
                let e = params.hbar * params.hbar * k1 * k1 / (2.0 * params.m1)
                    + params.hbar * params.hbar * k2 * k2 / (2.0 * params.m2);
                half_kinetic.push(Complex64::from_polar(1.0, -0.5 * dt * e / params.hbar));
            }
        }
        let mut potential_phase = Vec::with_capacity(n1 * n2);
        for &x1 in grid1.nodes() {
            for &x2 in grid2.nodes() {
                let v = pot.value(x1, x2);
                potential_phase.push(Complex64::from_polar(1.0, -dt * v / params.hbar));
            }
        }
        Propagator2D {
            dt,
            fft: Fft2::new(n1, n2),
            half_kinetic,
            potential_phase,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// One Strang step: half kinetic, full potential phase, half kinetic.
    pub fn step(&mut self, state: &mut Wavefunction2D) {
        self.fft.forward(&mut state.values);
        for (v, ph) in state.values.iter_mut().zip(&self.half_kinetic) {
            *v *= ph;
        }
        self.fft.inverse(&mut state.values);
        for (v, ph) in state.values.iter_mut().zip(&self.potential_phase) {
            *v *= ph;
        }
        self.fft.forward(&mut state.values);
        for (v, ph) in state.values.iter_mut().zip(&self.half_kinetic) {
            *v *= ph;
        }
        self.fft.inverse(&mut state.values);
    }
}

/// One Strang step as a standalone operation. Runs that take many steps
/// should hold a [`Propagator2D`] instead of re-planning every call.
pub fn step_qm2d(
    state: &Wavefunction2D,
    dt: f64,
    pot: &PotentialSpec,
    params: &PhysParams,
) -> Result<Wavefunction2D> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::config(format!("dt must be positive, got {dt}")));
    }
    let mut next = state.clone();
    let mut prop = Propagator2D::new(&state.grid1, &state.grid2, dt, pot, params);
    prop.step(&mut next);
    if !next.is_finite() {
        return Err(Error::Diverged {
            step: 0,
            what: "two-particle wavefunction picked up NaN".into(),
        });
    }
    Ok(next)
}

/// Position means by quadrature, momentum means and kinetic energy through
/// one spectral transform, potential energy by quadrature.
#[allow(clippy::needless_range_loop)]
pub fn observables_2d(
    state: &Wavefunction2D,
    t: f64,
    pot: &PotentialSpec,
    params: &PhysParams,
) -> QMObservables {
    let (n1, n2) = (state.grid1.n, state.grid2.n);
    let w = state.grid1.dx * state.grid2.dx;
    let x1s = state.grid1.nodes();
    let x2s = state.grid2.nodes();
    let mut norm2 = 0.0;
    let mut x1_mean = 0.0;
    let mut x2_mean = 0.0;
    let mut pot_mean = 0.0;
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            let rho = state.values[i1 * n2 + i2].norm_sqr() * w;
            norm2 += rho;
            x1_mean += x1s[i1] * rho;
            x2_mean += x2s[i2] * rho;
            pot_mean += pot.value(x1s[i1], x2s[i2]) * rho;
        }
    }

    let mut hat = state.values.clone();
    let mut fft = Fft2::new(n1, n2);
    fft.forward(&mut hat);
    let spectral_weight = w / (n1 * n2) as f64;
    let k1s = state.grid1.wavenumbers();
    let k2s = state.grid2.wavenumbers();
    let (mut kin, mut p1, mut p2) = (0.0, 0.0, 0.0);
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            let ww = hat[i1 * n2 + i2].norm_sqr() * spectral_weight;
            let e = params.hbar * params.hbar * k1s[i1] * k1s[i1] / (2.0 * params.m1)
                + params.hbar * params.hbar * k2s[i2] * k2s[i2] / (2.0 * params.m2);
            kin += e * ww;
            p1 += params.hbar * k1s[i1] * ww;
            p2 += params.hbar * k2s[i2] * ww;
        }
    }

    QMObservables {
        t,
        x1_mean,
        x2_mean,
        p1_mean: p1,
        p2_mean: p2,
        energy: kin + pot_mean,
        norm2,
    }
}

/// Force expectations ⟨∂₁V⟩ and ⟨∂₂V⟩ for Ehrenfest reports.
#[allow(clippy::needless_range_loop)]
pub fn force_means_2d(state: &Wavefunction2D, pot: &PotentialSpec) -> (f64, f64) {
    let (n1, n2) = (state.grid1.n, state.grid2.n);
    let w = state.grid1.dx * state.grid2.dx;
    let x1s = state.grid1.nodes();
    let x2s = state.grid2.nodes();
    let mut g1 = 0.0;
    let mut g2 = 0.0;
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            let rho = state.values[i1 * n2 + i2].norm_sqr() * w;
            let (_, dv1, dv2) = pot.eval(x1s[i1], x2s[i2]);
            g1 += dv1 * rho;
            g2 += dv2 * rho;
        }
    }
    (g1, g2)
}

/// Free-particle evolution of a resting Gaussian packet of width parameter
/// `alpha`: amplitude ∝ exp(−αx²/(1+4iαDt))/√(1+4iαDt) with D = ħ/(2m).
pub fn analytic_free_gaussian(alpha: f64, t: f64, grid: &Grid1D, m: f64) -> ComplexField1D {
    analytic_free_gaussian_moving(alpha, 0.0, 0.0, t, grid, m, 1.0)
}

/// Free-particle evolution of a Gaussian packet with initial center `c`,
/// phase wavenumber `k0` and width parameter `alpha`:
///
///   ψ(x,t) = (2α/π)^{1/4}/√(1+4iαDt)
///              · exp(−α(x−c−vt)²/(1+4iαDt))
///              · exp(i(k₀x − ħk₀²t/(2m)))
///
/// with v = ħk₀/m and D = ħ/(2m).
pub fn analytic_free_gaussian_moving(
    alpha: f64,
    center: f64,
    k0: f64,
    t: f64,
    grid: &Grid1D,
    m: f64,
    hbar: f64,
) -> ComplexField1D {
    let d = hbar / (2.0 * m);
    let denom = Complex64::new(1.0, 4.0 * alpha * d * t);
    let amp = (2.0 * alpha / std::f64::consts::PI).powf(0.25) / denom.sqrt();
    let v = hbar * k0 / m;
    let drift = center + v * t;
    let phase_rate = hbar * k0 * k0 / (2.0 * m);
    let values = grid
        .nodes()
        .iter()
        .map(|&x| {
            let dx = x - drift;
            let envelope = (-alpha * dx * dx / denom).exp();
            let boost = Complex64::from_polar(1.0, k0 * x - phase_rate * t);
            amp * envelope * boost
        })
        .collect();
    ComplexField1D {
        grid: grid.clone(),
        values,
    }
}
