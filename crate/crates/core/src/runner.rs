//! Run loops turning a [`ScenarioConfig`] into recorded [`TimeSeries`] for
//! each engine. All loops are deterministic for a fixed config.

use crate::classical::{step_newton, ClassicalState};
use crate::diagnostics::{
    diagnostic_row, force_means, DiagnosticRow, FieldSnapshot, ForceMeans, TimeSeries,
};
use crate::error::Error;
use crate::field::boundary_contact;
use crate::hybrid::{init_hybrid, HybridPropagator, HybridState};
use crate::params::PhysParams;
use crate::qm2d::{
    boundary_contact_2d, force_means_2d, init_two_particle_state, observables_2d, InitScenario,
    Propagator2D, QMObservables, Wavefunction2D,
};
use crate::scenario::{Scenario, ScenarioConfig};

/// Density threshold above which the initial packet is considered to touch
/// the domain boundary; surfaced as a run warning.
pub const BOUNDARY_WARN_DENSITY: f64 = 1e-10;

/// A failed run carrying whatever was recorded before the failure, so the
/// caller can still flush the partial series with a truncation marker.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    pub partial: TimeSeries,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.error)
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

pub type RunResult = std::result::Result<TimeSeries, Box<RunFailure>>;

fn fail(error: Error, partial: TimeSeries) -> RunResult {
    Err(Box::new(RunFailure {
        error,
        partial: TimeSeries {
            truncated: true,
            ..partial
        },
    }))
}

fn snapshot(state: &HybridState) -> FieldSnapshot {
    FieldSnapshot {
        t: state.t,
        x: state.grid().nodes().to_vec(),
        phi_re: state.phi.values.iter().map(|v| v.re).collect(),
        phi_im: state.phi.values.iter().map(|v| v.im).collect(),
        f1: state.f1.values.clone(),
        w: state.w.values.clone(),
    }
}

/// Evolve the hybrid system from T = 0 to t_max, recording a row every
/// `record_every` steps (the initial state included).
pub fn run_qch(config: &ScenarioConfig) -> RunResult {
    if let Err(e) = config.validate() {
        return fail(e, TimeSeries::default());
    }
    let params = match PhysParams::natural(config.mass_ratio) {
        Ok(p) => p,
        Err(e) => return fail(e, TimeSeries::default()),
    };
    let pot = config.potential();
    let grid = match config.grid.build() {
        Ok(g) => g,
        Err(e) => return fail(e, TimeSeries::default()),
    };
    let mut state = match init_hybrid(&grid, config.alpha, config.r1_0, config.v1_0) {
        Ok(s) => s,
        Err(e) => return fail(e, TimeSeries::default()),
    };

    let mut series = TimeSeries::default();
    series.stats.boundary_contact = boundary_contact(&state.phi, BOUNDARY_WARN_DENSITY);
    series.rows.push(diagnostic_row(&state, &pot, &params));
    series.forces.push(force_means(&state, &pot));
    if config.snapshot_every > 0 {
        series.snapshots.push(snapshot(&state));
    }

    let mut prop = HybridPropagator::new(&grid, config.dt, &pot, &params);
    let steps = config.steps();
    for i in 1..=steps {
        match prop.step(&mut state, i) {
            Ok(diag) => {
                if diag.cfl > 1.0 {
                    series.stats.cfl_flags += 1;
                }
                series.stats.max_cfl = series.stats.max_cfl.max(diag.cfl);
            }
            Err(e) => return fail(e, series),
        }
        if i % config.record_every == 0 {
            series.rows.push(diagnostic_row(&state, &pot, &params));
            series.forces.push(force_means(&state, &pot));
        }
        if config.snapshot_every > 0 && i % config.snapshot_every == 0 {
            series.snapshots.push(snapshot(&state));
        }
    }
    Ok(series)
}

fn qm_row(obs: &QMObservables, params: &PhysParams) -> DiagnosticRow {
    // particle 1 is a quantum expectation here: its trajectory column is
    // ⟨x̂₁⟩ and the velocity column ⟨p̂₁⟩/m₁; both gap columns then measure
    // ⟨x̂₁⟩ against itself and against ⟨x̂₂⟩.
    DiagnosticRow {
        t: obs.t,
        r1: obs.x1_mean,
        f1_mean: obs.x1_mean,
        x2_mean: obs.x2_mean,
        w_mean: obs.p1_mean / params.m1,
        p2_mean: obs.p2_mean,
        energy: obs.energy,
        norm2: obs.norm2,
        diff_r1_f1: 0.0,
        diff_r1_x2: obs.x1_mean - obs.x2_mean,
    }
}

/// Evolve the two-particle oracle on a qm_n × qm_n grid over the same time
/// span and record the matching rows.
pub fn run_qm2d(config: &ScenarioConfig) -> RunResult {
    if let Err(e) = config.validate() {
        return fail(e, TimeSeries::default());
    }
    let params = match PhysParams::natural(config.mass_ratio) {
        Ok(p) => p,
        Err(e) => return fail(e, TimeSeries::default()),
    };
    let pot = config.potential();
    let mut grid_spec = config.grid;
    grid_spec.n = config.qm_n;
    let grid = match grid_spec.build() {
        Ok(g) => g,
        Err(e) => return fail(e, TimeSeries::default()),
    };
    let init_scenario = match config.scenario {
        Scenario::Repulsive => InitScenario::Repulsive,
        _ => InitScenario::Harmonic,
    };
    let phase_k = match config.scenario {
        Scenario::Repulsive => Some(config.qm_phase_k),
        _ => None,
    };
    let mut psi: Wavefunction2D =
        match init_two_particle_state(&grid, &grid, config.alpha, init_scenario, phase_k) {
            Ok(p) => p,
            Err(e) => return fail(e, TimeSeries::default()),
        };

    let mut series = TimeSeries::default();
    series.stats.boundary_contact = boundary_contact_2d(&psi, BOUNDARY_WARN_DENSITY);
    let record = |psi: &Wavefunction2D, t: f64, series: &mut TimeSeries| {
        let obs = observables_2d(psi, t, &pot, &params);
        series.rows.push(qm_row(&obs, &params));
        let (g1, g2) = force_means_2d(psi, &pot);
        series.forces.push(ForceMeans {
            grad1_v: g1,
            grad2_v_slot: g2,
            grad2_v_stored: g2,
        });
    };
    record(&psi, 0.0, &mut series);

    let mut prop = Propagator2D::new(&grid, &grid, config.dt, &pot, &params);
    let steps = config.steps();
    for i in 1..=steps {
        prop.step(&mut psi);
        if !psi.is_finite() {
            return fail(
                Error::Diverged {
                    step: i,
                    what: "two-particle wavefunction picked up NaN".into(),
                },
                series,
            );
        }
        if i % config.record_every == 0 {
            record(&psi, i as f64 * config.dt, &mut series);
        }
    }
    Ok(series)
}

fn classical_row(
    s: &ClassicalState,
    pot: &crate::potential::PotentialSpec,
    params: &PhysParams,
) -> DiagnosticRow {
    DiagnosticRow {
        t: s.t,
        r1: s.x1,
        f1_mean: s.x1,
        x2_mean: s.x2,
        w_mean: s.v1,
        p2_mean: params.m2 * s.v2,
        energy: s.energy(pot, params),
        norm2: 1.0,
        diff_r1_f1: 0.0,
        diff_r1_x2: s.x1 - s.x2,
    }
}

/// Integrate the Newtonian reference with RK4 at the configured dt.
pub fn run_classical(config: &ScenarioConfig) -> RunResult {
    if let Err(e) = config.validate() {
        return fail(e, TimeSeries::default());
    }
    let params = match PhysParams::natural(config.mass_ratio) {
        Ok(p) => p,
        Err(e) => return fail(e, TimeSeries::default()),
    };
    let pot = config.potential();
    let mut s = ClassicalState {
        t: 0.0,
        x1: config.r1_0,
        x2: 0.0,
        v1: config.v1_0,
        v2: 0.0,
    };
    let mut series = TimeSeries::default();
    let push = |s: &ClassicalState, series: &mut TimeSeries| {
        series.rows.push(classical_row(s, &pot, &params));
        let (_, dv1, dv2) = pot.eval(s.x1, s.x2);
        series.forces.push(ForceMeans {
            grad1_v: dv1,
            grad2_v_slot: dv2,
            grad2_v_stored: dv2,
        });
    };
    push(&s, &mut series);
    let steps = config.steps();
    for i in 1..=steps {
        s = match step_newton(&s, config.dt, &pot, &params) {
            Ok(next) => next,
            Err(e) => return fail(e, series),
        };
        if i % config.record_every == 0 {
            push(&s, &mut series);
        }
    }
    Ok(series)
}
