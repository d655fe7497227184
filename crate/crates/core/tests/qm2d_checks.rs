//! Integration checks of the two-particle reference solver.

use num_complex::Complex64;

use qch_core::classical::{harmonic_analytic, preset_initial_state};
use qch_core::qm2d::{
    analytic_free_gaussian_moving, init_two_particle_state, observables_2d, InitScenario,
    Propagator2D, Wavefunction2D,
};
use qch_core::{make_grid, PhysParams, PotentialSpec};

/// Free 2D evolution of the product state stays the product of the 1D
/// closed forms; wide grid keeps periodic images below the tolerance.
#[test]
fn free_oracle_equivalence() {
    let g = make_grid(-20.0, 20.0, 256).unwrap();
    let params = PhysParams::default();
    let pot = PotentialSpec::Zero;
    let mut psi = init_two_particle_state(&g, &g, 1.0, InitScenario::Harmonic, None).unwrap();
    let dt = 1e-3;
    let mut prop = Propagator2D::new(&g, &g, dt, &pot, &params);
    for _ in 0..1000 {
        prop.step(&mut psi);
    }
    let t = 1.0;
    let ref1 = analytic_free_gaussian_moving(2.0, 0.5, -2.5, t, &g, params.m1, params.hbar);
    let ref2 = analytic_free_gaussian_moving(1.0, 0.0, 0.0, t, &g, params.m2, params.hbar);
    let mut reference = vec![Complex64::ZERO; g.n * g.n];
    for (i1, a) in ref1.values.iter().enumerate() {
        for (i2, b) in ref2.values.iter().enumerate() {
            reference[i1 * g.n + i2] = a * b;
        }
    }
    let reference = Wavefunction2D {
        grid1: g.clone(),
        grid2: g.clone(),
        values: reference,
    };
    let err = psi.l2_distance(&reference);
    assert!(err < 1e-6, "free-oracle L2 error {err}");
}

#[test]
fn dispersion_of_resting_packet() {
    // variance of the x2 marginal after free evolution matches the
    // closed-form (1 + 16α²D²t²)/(4α), D = 1
    let g = make_grid(-10.0, 10.0, 128).unwrap();
    let params = PhysParams::default();
    let pot = PotentialSpec::Zero;
    let mut psi = init_two_particle_state(&g, &g, 1.0, InitScenario::Harmonic, Some(0.0)).unwrap();
    let dt = 1e-3;
    let mut prop = Propagator2D::new(&g, &g, dt, &pot, &params);
    for _ in 0..500 {
        prop.step(&mut psi);
    }
    let w = g.dx * g.dx;
    let mut var = 0.0;
    for i1 in 0..g.n {
        for i2 in 0..g.n {
            let rho = psi.values[i1 * g.n + i2].norm_sqr() * w;
            var += g.nodes()[i2] * g.nodes()[i2] * rho;
        }
    }
    assert!((var - 1.25).abs() < 1e-6, "variance {var}");
}

#[test]
fn unitarity_and_energy_conservation() {
    let g = make_grid(-10.0, 10.0, 128).unwrap();
    let params = PhysParams::default();
    let pot = PotentialSpec::Harmonic { k: 1.0 };
    let mut psi = init_two_particle_state(&g, &g, 1.0, InitScenario::Harmonic, None).unwrap();
    let dt = 1e-3;
    let mut prop = Propagator2D::new(&g, &g, dt, &pot, &params);
    let obs0 = observables_2d(&psi, 0.0, &pot, &params);
    for i in 0..1200 {
        prop.step(&mut psi);
        if (i + 1) % 200 == 0 {
            let obs = observables_2d(&psi, (i + 1) as f64 * dt, &pot, &params);
            assert!((obs.norm2 - 1.0).abs() < 1e-8, "norm {}", obs.norm2);
            assert!(
                ((obs.energy - obs0.energy) / obs0.energy).abs() < 1e-6,
                "energy {} vs {}",
                obs.energy,
                obs0.energy
            );
        }
    }
}

#[test]
fn ehrenfest_exactness_for_quadratic_potential() {
    // coarse 128² run: expectation trajectories ride the classical
    // solution to well below the acceptance tolerance
    let g = make_grid(-10.0, 10.0, 128).unwrap();
    let params = PhysParams::default();
    let pot = PotentialSpec::Harmonic { k: 1.0 };
    let mut psi = init_two_particle_state(&g, &g, 1.0, InitScenario::Harmonic, None).unwrap();
    let dt = 2e-3;
    let mut prop = Propagator2D::new(&g, &g, dt, &pot, &params);
    let init = preset_initial_state();
    let mut worst = 0.0_f64;
    for i in 0..600 {
        prop.step(&mut psi);
        if (i + 1) % 100 == 0 {
            let t = (i + 1) as f64 * dt;
            let obs = observables_2d(&psi, t, &pot, &params);
            let exact = harmonic_analytic(&params, 1.0, &init, t);
            worst = worst
                .max((obs.x1_mean - exact.x1).abs())
                .max((obs.x2_mean - exact.x2).abs());
        }
    }
    assert!(worst < 1e-2, "Ehrenfest deviation {worst}");
}

#[test]
fn second_order_time_convergence() {
    // halving dt must shrink the L2 difference to a dt/8 reference 4x;
    // all runs share the grid so spatial error cancels in the differences
    let g = make_grid(-10.0, 10.0, 128).unwrap();
    let params = PhysParams::default();
    let pot = PotentialSpec::Harmonic { k: 1.0 };
    let t_end = 0.2;
    let run = |dt: f64| -> Wavefunction2D {
        let mut psi = init_two_particle_state(&g, &g, 1.0, InitScenario::Harmonic, None).unwrap();
        let mut prop = Propagator2D::new(&g, &g, dt, &pot, &params);
        for _ in 0..(t_end / dt).round() as usize {
            prop.step(&mut psi);
        }
        psi
    };
    let reference = run(1e-3);
    let e1 = run(8e-3).l2_distance(&reference);
    let e2 = run(4e-3).l2_distance(&reference);
    let ratio = e1 / e2;
    assert!(
        (3.2..=4.8).contains(&ratio),
        "time-convergence ratio {ratio} outside 4 ± 20%"
    );
}
