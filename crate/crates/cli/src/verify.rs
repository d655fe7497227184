//! `qch-lab verify`: the free-limit suite, the sampler suite and the
//! convergence checks, with a non-zero exit on any failure.

use std::path::Path;

use anyhow::Result;

use qch_core::classical::{harmonic_analytic, preset_initial_state, step_newton};
use qch_core::diagnostics::qch_energy;
use qch_core::hybrid::{init_hybrid, HybridPropagator};
use qch_core::{make_grid, PhysParams, PotentialSpec};

use crate::preset::{free_limit_suite, sampler_suite, write_checks, Check};

/// Run every verification family; returns all checks (callers decide exit).
pub fn run_verify(dir: &Path) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    println!("== free-limit suite");
    match free_limit_suite(&dir.join("free-limit"), &[]) {
        Ok(mut c) => checks.append(&mut c),
        Err(e) => {
            println!("free-limit suite failed: {e}");
            checks.push(Check {
                name: "free-limit suite completed".to_string(),
                passed: false,
                measured: 1.0,
                threshold: 0.5,
                comparison: "<".to_string(),
            });
        }
    }

    println!("== sampler suite");
    match sampler_suite(&dir.join("sampler-suite"), &[]) {
        Ok(mut c) => checks.append(&mut c),
        Err(e) => {
            println!("sampler suite failed: {e}");
            checks.push(Check {
                name: "sampler suite completed".to_string(),
                passed: false,
                measured: 1.0,
                threshold: 0.5,
                comparison: "<".to_string(),
            });
        }
    }

    println!("== convergence checks");
    let mut conv = convergence_checks()?;
    for c in &conv {
        c.print();
    }
    checks.append(&mut conv);

    write_checks(&checks, dir)?;
    Ok(checks)
}

/// Step-size refinement behavior of the three integrators.
fn convergence_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let params = PhysParams::default();
    let pot = PotentialSpec::Harmonic { k: 1.0 };

    // hybrid self-convergence: the field difference between dt and dt/2
    // runs must shrink fourfold
    let grid = make_grid(-10.0, 10.0, 512)?;
    let hybrid_run = |dt: f64| -> Result<qch_core::HybridState> {
        let mut s = init_hybrid(&grid, 1.0, 0.5, -1.0)?;
        let mut prop = HybridPropagator::new(&grid, dt, &pot, &params);
        for i in 0..(1.0 / dt).round() as usize {
            prop.step(&mut s, i)?;
        }
        Ok(s)
    };
    let coarse = hybrid_run(2e-3)?;
    let mid = hybrid_run(1e-3)?;
    let fine = hybrid_run(5e-4)?;
    let ratio = coarse.phi.l2_distance(&mid.phi) / mid.phi.l2_distance(&fine.phi);
    checks.push(Check::within(
        "convergence: hybrid field ratio under dt halving",
        ratio,
        4.0,
        1.0,
    ));

    // energy drift must fall at least 3.5x when dt halves
    let drift = |dt: f64| -> Result<f64> {
        let mut s = init_hybrid(&grid, 1.0, 0.5, -1.0)?;
        let e0 = qch_energy(&s, &pot, &params);
        let mut prop = HybridPropagator::new(&grid, dt, &pot, &params);
        let mut worst = 0.0_f64;
        for i in 0..(1.2 / dt).round() as usize {
            prop.step(&mut s, i)?;
            worst = worst.max(((qch_energy(&s, &pot, &params) - e0) / e0).abs());
        }
        Ok(worst)
    };
    let d1 = drift(1e-3)?;
    let d2 = drift(5e-4)?;
    checks.push(Check::less(
        "convergence: energy drift at dt=1e-3",
        d1,
        1e-3,
    ));
    checks.push(Check {
        name: "convergence: energy drift reduction under dt halving".to_string(),
        passed: d1 / d2 >= 3.5,
        measured: d1 / d2,
        threshold: 3.5,
        comparison: ">=".to_string(),
    });

    // RK4 order against the closed-form two-body solution
    let rk4_err = |dt: f64| -> Result<f64> {
        let init = preset_initial_state();
        let mut s = init;
        for _ in 0..(1.2 / dt).round() as usize {
            s = step_newton(&s, dt, &pot, &params)?;
        }
        let exact = harmonic_analytic(&params, 1.0, &init, 1.2);
        Ok(((s.x1 - exact.x1).powi(2) + (s.x2 - exact.x2).powi(2)).sqrt())
    };
    let rk_ratio = rk4_err(0.05)? / rk4_err(0.025)?;
    checks.push(Check::within(
        "convergence: RK4 error ratio under dt halving",
        rk_ratio,
        16.0,
        4.0,
    ));

    Ok(checks)
}
