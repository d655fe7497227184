//! Integration checks of the stochastic-trajectory sampler, including the
//! coupling to stored solver fields.

use qch_core::hybrid::quantum_velocity;
use qch_core::runner::run_qch;
use qch_core::sampler::{
    evolve_ensemble, ks_distance, Ensemble, FreeGaussianDrift, GridDrift, HarmonicGroundDrift,
};
use qch_core::scenario::{Engine, Scenario, ScenarioConfig};
use qch_core::PhysParams;

#[test]
fn free_gaussian_density_tracking() {
    let model = FreeGaussianDrift::new(1.0, 0.5, 1.0);
    let n = 20_000;
    let e0 = Ensemble::gaussian(2024, n, 0.0, 0.5, model.diffusion);
    let dt = 1e-3;
    let quarter = evolve_ensemble(&e0, &model, dt, 250);
    let half = evolve_ensemble(&quarter, &model, dt, 250);
    // 99% band at N = 2e4 is 1.628/√N ≈ 0.0115
    for (e, label) in [(&quarter, "T=0.25"), (&half, "T=0.5")] {
        let d = ks_distance(e, &|x| model.cdf(x, e.t));
        assert!(d < 0.0115, "{label}: KS {d}");
    }
    let se = model.variance(0.5) * (2.0 / n as f64).sqrt();
    assert!(
        (half.variance() - 1.25).abs() < 3.0 * se + 3.0 * dt,
        "variance {} at T=0.5",
        half.variance()
    );
    assert_eq!(half.resamples, 0);
}

#[test]
fn stationary_ground_state_ks() {
    let model = HarmonicGroundDrift::new(0.5, 1.0, 1.0);
    let n = 20_000;
    let e0 = Ensemble::gaussian(7, n, 0.0, 1.0, 1.0);
    let evolved = evolve_ensemble(&e0, &model, 1e-3, 500);
    let d = ks_distance(&evolved, &|x| model.cdf(x));
    assert!(d < 0.0115, "KS {d}");
}

#[test]
fn ensembles_are_partition_independent() {
    // trajectory i draws from the stream (seed, i, ·) regardless of how many
    // other trajectories run alongside
    let model = FreeGaussianDrift::new(1.0, 0.5, 1.0);
    let full = evolve_ensemble(
        &Ensemble::gaussian(99, 128, 0.0, 0.5, model.diffusion),
        &model,
        1e-3,
        50,
    );
    let half = evolve_ensemble(
        &Ensemble::gaussian(99, 64, 0.0, 0.5, model.diffusion),
        &model,
        1e-3,
        50,
    );
    assert_eq!(&full.positions[..64], &half.positions[..]);
}

#[test]
fn grid_drift_tracks_recorded_free_run() {
    // sample trajectories against fields recorded from the free hybrid run
    // and compare with the analytic dispersion law
    let mut config = ScenarioConfig::defaults(Scenario::Free);
    config.t_max = 0.5;
    config.snapshot_every = 25;
    config.record_every = 25;
    config.engines = vec![Engine::Qch];
    let series = run_qch(&config).unwrap();
    assert!(!series.snapshots.is_empty());

    let params = PhysParams::default();
    let grid = config.grid.build().unwrap();
    let frames: Vec<(f64, Vec<f64>, Vec<f64>)> = series
        .snapshots
        .iter()
        .map(|s| {
            let values: Vec<num_complex::Complex64> = s
                .phi_re
                .iter()
                .zip(&s.phi_im)
                .map(|(&re, &im)| num_complex::Complex64::new(re, im))
                .collect();
            let phi = qch_core::ComplexField1D {
                grid: grid.clone(),
                values,
            };
            let v = quantum_velocity(&phi, &params);
            let rho = phi.density();
            (s.t, v.values, rho)
        })
        .collect();
    let drift = GridDrift::new(grid, frames);

    let reference = FreeGaussianDrift::new(config.alpha, params.m2, params.hbar);
    let n = 20_000;
    let e0 = Ensemble::gaussian(31, n, 0.0, 0.5, params.nu2);
    let evolved = evolve_ensemble(&e0, &drift, 1e-3, 500);
    let d = ks_distance(&evolved, &|x| reference.cdf(x, 0.5));
    // linear time interpolation of the stored fields adds bias on top of
    // the sampling band
    assert!(d < 0.02, "KS against analytic dispersion {d}");
    let se = reference.variance(0.5) * (2.0 / n as f64).sqrt();
    assert!(
        (evolved.variance() - 1.25).abs() < 4.0 * se + 0.01,
        "variance {}",
        evolved.variance()
    );
}
