//! Observables of the hybrid run: ⟨·⟩₂ expectations, the conserved energy,
//! Ehrenfest residuals and the trajectory-gap series.

use crate::error::{Error, Result};
use crate::field::ComplexField1D;
use crate::hybrid::{log_density_slope, quantum_velocity, HybridState};
use crate::params::PhysParams;
use crate::potential::PotentialSpec;
use crate::spectral::Spectral1D;

/// One recorded step; also the canonical CSV row, columns in field order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticRow {
    pub t: f64,
    /// Mean trajectory of the classicalized particle.
    pub r1: f64,
    /// ⟨f₁⟩₂.
    pub f1_mean: f64,
    /// ⟨x₂⟩₂.
    pub x2_mean: f64,
    /// ⟨w⟩₂ = ⟨v₁⟩₂.
    pub w_mean: f64,
    /// ⟨p̂₂⟩₂.
    pub p2_mean: f64,
    pub energy: f64,
    pub norm2: f64,
    /// r1 − f1_mean.
    pub diff_r1_f1: f64,
    /// r1 − x2_mean.
    pub diff_r1_x2: f64,
}

pub const CSV_HEADER: &str =
    "t,r1,f1_mean,x2_mean,w_mean,p2_mean,energy,norm2,diff_r1_f1,diff_r1_x2";

/// Force expectations recorded alongside each row; not part of the CSV
/// schema, consumed by the Ehrenfest report.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ForceMeans {
    /// ⟨∂₁V(f₁(x₂), x₂)⟩₂.
    pub grad1_v: f64,
    /// ⟨(∂₂V)(f₁(x₂), x₂)⟩₂ — derivative in the second slot only.
    pub grad2_v_slot: f64,
    /// ⟨∂ₓ₂[V(f₁(x₂), x₂)]⟩₂ — derivative through the stored x₂ dependence.
    pub grad2_v_stored: f64,
}

/// Field dump for plotting or restart-style inspection.
#[derive(Debug, Clone)]
pub struct FieldSnapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub phi_re: Vec<f64>,
    pub phi_im: Vec<f64>,
    pub f1: Vec<f64>,
    pub w: Vec<f64>,
}

/// Aggregate step diagnostics of a run.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunStats {
    /// Steps whose advection CFL number max|v₂q|·dt/dx exceeded 1.
    pub cfl_flags: usize,
    pub max_cfl: f64,
    /// Boundary tail density above the warning threshold at init.
    pub boundary_contact: bool,
}

/// Recorded output of one engine run.
#[derive(Debug, Clone, Default)]
pub struct TimeSeries {
    pub rows: Vec<DiagnosticRow>,
    /// Aligned with `rows` when the engine records forces (hybrid, qm2d).
    pub forces: Vec<ForceMeans>,
    pub snapshots: Vec<FieldSnapshot>,
    pub stats: RunStats,
    /// Set when the run stopped before t_max; the partial series is kept.
    pub truncated: bool,
}

/// Multiplicative or spectral weights for ⟨A⟩₂ = ∫ Φ* A Φ dx₂.
pub enum Weight<'a> {
    /// A = 1 up to a constant factor.
    Const(f64),
    /// A = x₂.
    Position,
    /// A = x₂².
    PositionSquared,
    /// A given nodewise.
    Field(&'a [f64]),
    /// A = −iħ∂ₓ₂ (spectral derivative), ħ = 1 natural units.
    Momentum,
}

/// Expectation value of a weight against |Φ|², or the spectral momentum.
pub fn expectation(phi: &ComplexField1D, weight: Weight<'_>) -> f64 {
    let dx = phi.grid.dx;
    match weight {
        Weight::Const(c) => c * phi.norm2(),
        Weight::Position => {
            phi.grid
                .nodes()
                .iter()
                .zip(phi.density())
                .map(|(&x, rho)| x * rho)
                .sum::<f64>()
                * dx
        }
        Weight::PositionSquared => {
            phi.grid
                .nodes()
                .iter()
                .zip(phi.density())
                .map(|(&x, rho)| x * x * rho)
                .sum::<f64>()
                * dx
        }
        Weight::Field(a) => {
            a.iter()
                .zip(phi.density())
                .map(|(&a, rho)| a * rho)
                .sum::<f64>()
                * dx
        }
        Weight::Momentum => momentum_mean(phi, 1.0),
    }
}

/// Re ∫ Φ*(−iħ∂ₓ)Φ dx by spectral derivative.
fn momentum_mean(phi: &ComplexField1D, hbar: f64) -> f64 {
    let mut sp = Spectral1D::new(phi.grid.n);
    let dphi = sp.derivative(&phi.values, phi.grid.wavenumbers());
    let dx = phi.grid.dx;
    hbar * phi
        .values
        .iter()
        .zip(&dphi)
        .map(|(v, dv)| (v.conj() * dv).im)
        .sum::<f64>()
        * dx
}

/// Conserved energy of the hybrid dynamics:
///
///   E = ⟨ (m₁/2)w² + (m₂/2)v₂q² + V(f₁, x₂) + (ħ²/8m₂)(∂ₓ ln ρ₂)² ⟩₂.
pub fn qch_energy(state: &HybridState, pot: &PotentialSpec, params: &PhysParams) -> f64 {
    let rho = state.phi.density();
    let dx = state.grid().dx;
    let v2q = quantum_velocity(&state.phi, params);
    let slope = log_density_slope(&state.phi);
    let osmotic_coeff = params.hbar * params.hbar / (8.0 * params.m2);
    let mut e = 0.0;
    for (j, &x) in state.grid().nodes().iter().enumerate() {
        let dens = rho[j];
        let classical = 0.5 * params.m1 * state.w.values[j] * state.w.values[j];
        let quantum = 0.5 * params.m2 * v2q.values[j] * v2q.values[j];
        let pot_term = pot.value(state.f1.values[j], x);
        let osmotic = osmotic_coeff * slope.values[j] * slope.values[j];
        e += dens * (classical + quantum + pot_term + osmotic);
    }
    e * dx
}

/// Build the canonical row for a hybrid state.
pub fn diagnostic_row(
    state: &HybridState,
    pot: &PotentialSpec,
    params: &PhysParams,
) -> DiagnosticRow {
    let f1_mean = expectation(&state.phi, Weight::Field(&state.f1.values));
    let x2_mean = expectation(&state.phi, Weight::Position);
    let w_mean = expectation(&state.phi, Weight::Field(&state.w.values));
    let p2_mean = momentum_mean(&state.phi, params.hbar);
    DiagnosticRow {
        t: state.t,
        r1: state.r1,
        f1_mean,
        x2_mean,
        w_mean,
        p2_mean,
        energy: qch_energy(state, pot, params),
        norm2: state.phi.norm2(),
        diff_r1_f1: state.r1 - f1_mean,
        diff_r1_x2: state.r1 - x2_mean,
    }
}

/// Force expectations of a hybrid state, both ∂₂ conventions.
///
/// The stored-field derivative uses a central difference of f₁ rather than a
/// spectral one: f₁ is smooth where ρ₂ carries weight but wraps with a jump
/// at the domain seam.
pub fn force_means(state: &HybridState, pot: &PotentialSpec) -> ForceMeans {
    let rho = state.phi.density();
    let dx = state.grid().dx;
    let n = state.grid().n;
    let nodes = state.grid().nodes();
    let f1 = &state.f1.values;
    let mut g1 = 0.0;
    let mut g2_slot = 0.0;
    let mut g2_stored = 0.0;
    for j in 0..n {
        let (_, dv1, dv2) = pot.eval(f1[j], nodes[j]);
        let jp = (j + 1) % n;
        let jm = (j + n - 1) % n;
        let df1 = (f1[jp] - f1[jm]) / (2.0 * dx);
        g1 += rho[j] * dv1;
        g2_slot += rho[j] * dv2;
        g2_stored += rho[j] * (dv1 * df1 + dv2);
    }
    ForceMeans {
        grad1_v: g1 * dx,
        grad2_v_slot: g2_slot * dx,
        grad2_v_stored: g2_stored * dx,
    }
}

/// Central-difference residuals of the modified Ehrenfest relations at the
/// interior recorded times.
#[derive(Debug, Clone)]
pub struct EhrenfestResiduals {
    pub t: Vec<f64>,
    /// dR₁/dt − ⟨v₁⟩₂.
    pub r1: Vec<f64>,
    /// d⟨v₁⟩₂/dt + (1/m₁)⟨∂₁V⟩₂.
    pub w: Vec<f64>,
    /// d⟨x₂⟩₂/dt − ⟨p̂₂⟩₂/m₂.
    pub x2: Vec<f64>,
    /// d⟨p̂₂⟩₂/dt + ⟨∂₂V⟩₂, slot-wise derivative convention.
    pub p2_slot: Vec<f64>,
    /// d⟨p̂₂⟩₂/dt + ⟨∂ₓ₂V⟩₂, stored-field derivative convention.
    pub p2_stored: Vec<f64>,
}

pub fn ehrenfest_residuals(series: &TimeSeries, params: &PhysParams) -> Result<EhrenfestResiduals> {
    let rows = &series.rows;
    if rows.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "Ehrenfest residuals need at least 3 recorded rows, got {}",
            rows.len()
        )));
    }
    let have_forces = series.forces.len() == rows.len();
    let mut out = EhrenfestResiduals {
        t: Vec::new(),
        r1: Vec::new(),
        w: Vec::new(),
        x2: Vec::new(),
        p2_slot: Vec::new(),
        p2_stored: Vec::new(),
    };
    for i in 1..rows.len() - 1 {
        let dt2 = rows[i + 1].t - rows[i - 1].t;
        let ddt = |f: fn(&DiagnosticRow) -> f64| (f(&rows[i + 1]) - f(&rows[i - 1])) / dt2;
        out.t.push(rows[i].t);
        out.r1.push(ddt(|r| r.r1) - rows[i].w_mean);
        out.x2
            .push(ddt(|r| r.x2_mean) - rows[i].p2_mean / params.m2);
        if have_forces {
            out.w
                .push(ddt(|r| r.w_mean) + series.forces[i].grad1_v / params.m1);
            out.p2_slot
                .push(ddt(|r| r.p2_mean) + series.forces[i].grad2_v_slot);
            out.p2_stored
                .push(ddt(|r| r.p2_mean) + series.forces[i].grad2_v_stored);
        }
    }
    Ok(out)
}

/// One gap series: (t, gap) pairs.
pub type GapSeries = Vec<(f64, f64)>;

/// Both trajectory-gap series: r1 − ⟨f₁⟩₂ and r1 − ⟨x₂⟩₂.
pub fn quasi_trajectory_gap(series: &TimeSeries) -> (GapSeries, GapSeries) {
    let f1 = series.rows.iter().map(|r| (r.t, r.diff_r1_f1)).collect();
    let x2 = series.rows.iter().map(|r| (r.t, r.diff_r1_x2)).collect();
    (f1, x2)
}
