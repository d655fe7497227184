//! Two-body Newtonian reference: a generic RK4 step plus the closed-form
//! solution for the harmonic interaction.

use crate::error::{Error, Result};
use crate::params::PhysParams;
use crate::potential::PotentialSpec;

/// Positions and velocities of the two-particle classical system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub v1: f64,
    pub v2: f64,
}

impl ClassicalState {
    pub fn energy(&self, pot: &PotentialSpec, params: &PhysParams) -> f64 {
        0.5 * params.m1 * self.v1 * self.v1
            + 0.5 * params.m2 * self.v2 * self.v2
            + pot.value(self.x1, self.x2)
    }

    /// Total linear momentum m₁v₁ + m₂v₂.
    pub fn momentum(&self, params: &PhysParams) -> f64 {
        params.m1 * self.v1 + params.m2 * self.v2
    }
}

#[derive(Clone, Copy)]
struct Deriv {
    dx1: f64,
    dx2: f64,
    dv1: f64,
    dv2: f64,
}

fn rhs(s: &ClassicalState, pot: &PotentialSpec, params: &PhysParams) -> Deriv {
    let (_, dv1, dv2) = pot.eval(s.x1, s.x2);
    Deriv {
        dx1: s.v1,
        dx2: s.v2,
        dv1: -dv1 / params.m1,
        dv2: -dv2 / params.m2,
    }
}

fn advance(s: &ClassicalState, d: &Deriv, h: f64) -> ClassicalState {
    ClassicalState {
        t: s.t + h,
        x1: s.x1 + h * d.dx1,
        x2: s.x2 + h * d.dx2,
        v1: s.v1 + h * d.dv1,
        v2: s.v2 + h * d.dv2,
    }
}

/// One RK4 step of ẋᵢ = vᵢ, mᵢ·v̇ᵢ = −∂ᵢV.
pub fn step_newton(
    state: &ClassicalState,
    dt: f64,
    pot: &PotentialSpec,
    params: &PhysParams,
) -> Result<ClassicalState> {
    let k1 = rhs(state, pot, params);
    let k2 = rhs(&advance(state, &k1, 0.5 * dt), pot, params);
    let k3 = rhs(&advance(state, &k2, 0.5 * dt), pot, params);
    let k4 = rhs(&advance(state, &k3, dt), pot, params);
    let next = ClassicalState {
        t: state.t + dt,
        x1: state.x1 + dt / 6.0 * (k1.dx1 + 2.0 * k2.dx1 + 2.0 * k3.dx1 + k4.dx1),
        x2: state.x2 + dt / 6.0 * (k1.dx2 + 2.0 * k2.dx2 + 2.0 * k3.dx2 + k4.dx2),
        v1: state.v1 + dt / 6.0 * (k1.dv1 + 2.0 * k2.dv1 + 2.0 * k3.dv1 + k4.dv1),
        v2: state.v2 + dt / 6.0 * (k1.dv2 + 2.0 * k2.dv2 + 2.0 * k3.dv2 + k4.dv2),
    };
    let finite =
        next.x1.is_finite() && next.x2.is_finite() && next.v1.is_finite() && next.v2.is_finite();
    if !finite {
        return Err(Error::Diverged {
            step: 0,
            what: "classical state picked up a non-finite component".into(),
        });
    }
    Ok(next)
}

/// Closed-form two-body solution for V = (K/2)(x₁ − x₂)²: free center of
/// mass, relative coordinate r(t) = r₀·cos(ωt) + (ṙ₀/ω)·sin(ωt) with
/// ω = √(K/μ) and reduced mass μ = m₁m₂/(m₁+m₂).
pub fn harmonic_analytic(
    params: &PhysParams,
    k_spring: f64,
    init: &ClassicalState,
    t: f64,
) -> ClassicalState {
    let m = params.m1 + params.m2;
    let mu = params.m1 * params.m2 / m;
    let omega = (k_spring / mu).sqrt();

    let x_cm0 = (params.m1 * init.x1 + params.m2 * init.x2) / m;
    let v_cm = (params.m1 * init.v1 + params.m2 * init.v2) / m;
    let r0 = init.x1 - init.x2;
    let rdot0 = init.v1 - init.v2;

    let tau = t - init.t;
    let (s, c) = (omega * tau).sin_cos();
    let r = r0 * c + rdot0 / omega * s;
    let rdot = -r0 * omega * s + rdot0 * c;
    let x_cm = x_cm0 + v_cm * tau;

    ClassicalState {
        t,
        x1: x_cm + params.m2 / m * r,
        x2: x_cm - params.m1 / m * r,
        v1: v_cm + params.m2 / m * rdot,
        v2: v_cm - params.m1 / m * rdot,
    }
}

/// Scenario initial condition shared by every preset: particle 1 at 0.5 with
/// velocity −1, particle 2 at rest at the origin.
pub fn preset_initial_state() -> ClassicalState {
    ClassicalState {
        t: 0.0,
        x1: 0.5,
        x2: 0.0,
        v1: -1.0,
        v2: 0.0,
    }
}
