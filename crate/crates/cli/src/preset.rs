//! Named presets reproducing the scenario sweeps, plus the scripted
//! verification suites (free limit, sampler).

use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Result};
use serde::Serialize;

use qch_core::qm2d::analytic_free_gaussian;
use qch_core::runner::{run_qch, RunResult};
use qch_core::sampler::{
    evolve_ensemble, histogram, ks_distance, Ensemble, FreeGaussianDrift, HarmonicGroundDrift,
};
use qch_core::scenario::{Engine, Scenario, ScenarioConfig};
use qch_core::{ComplexField1D, PhysParams};

use crate::config::apply_override;
use crate::output::{write_histogram, write_series, RunManifest};
use crate::run::flush_labelled;

pub const PRESET_NAMES: &[&str] = &[
    "fig1",
    "fig2",
    "fig3",
    "fig4",
    "fig5",
    "free-limit",
    "sampler-suite",
];

/// Outcome of one scripted assertion.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub comparison: String,
}

impl Check {
    pub fn less(name: &str, measured: f64, threshold: f64) -> Self {
        Check {
            name: name.to_string(),
            passed: measured < threshold,
            measured,
            threshold,
            comparison: "<".to_string(),
        }
    }

    pub fn within(name: &str, measured: f64, target: f64, tol: f64) -> Self {
        Check {
            name: name.to_string(),
            passed: (measured - target).abs() <= tol,
            measured,
            threshold: target,
            comparison: format!("= ± {tol}"),
        }
    }

    pub fn print(&self) {
        let status = if self.passed { "PASS" } else { "FAIL" };
        println!(
            "[{status}] {}: measured {:.6e} ({} {:.6e})",
            self.name, self.measured, self.comparison, self.threshold
        );
    }
}

pub fn write_checks(checks: &[Check], dir: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(checks)?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("checks.json"), json + "\n")?;
    Ok(())
}

fn base_with_overrides(scenario: Scenario, overrides: &[String]) -> Result<ScenarioConfig> {
    let mut config = ScenarioConfig::defaults(scenario);
    config.record_every = 1;
    for o in overrides {
        apply_override(&mut config, o)?;
    }
    Ok(config)
}

/// A sweep member: label, config and which engine to run.
struct Job {
    label: String,
    config: ScenarioConfig,
    engine: Engine,
}

/// Run sweep members concurrently, then flush everything in a fixed order
/// and write the single manifest.
fn run_jobs(jobs: Vec<Job>, base: &ScenarioConfig, dir: &Path, command: &str) -> Result<()> {
    let started = Instant::now();
    let mut manifest = RunManifest::new(command, base);
    let results: Vec<(String, ScenarioConfig, RunResult)> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .into_iter()
            .map(|job| {
                scope.spawn(move || {
                    let result = match job.engine {
                        Engine::Qch => qch_core::runner::run_qch(&job.config),
                        Engine::Qm2d => qch_core::runner::run_qm2d(&job.config),
                        Engine::Classical => qch_core::runner::run_classical(&job.config),
                        Engine::Sampler => unreachable!("sampler runs are not sweep jobs"),
                    };
                    (job.label, job.config, result)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut first_error = None;
    for (label, config, result) in results {
        let params = PhysParams::natural(config.mass_ratio)?;
        if let Err(e) = flush_labelled(&label, result, dir, &mut manifest, &params) {
            first_error.get_or_insert(e);
        }
    }
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    manifest.write(dir)?;
    match first_error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Execute a named preset into `dir`. `overrides` apply to every member.
pub fn run_preset(name: &str, dir: &Path, overrides: &[String]) -> Result<()> {
    match name {
        "fig1" | "fig2" | "fig3" => harmonic_sweep(name, dir, overrides),
        "fig4" | "fig5" => repulsive_sweep(name, dir, overrides),
        "free-limit" => free_limit_suite(dir, overrides).map(|_| ()),
        "sampler-suite" => sampler_suite(dir, overrides).map(|_| ()),
        other => bail!("unknown preset `{other}` (expected one of {PRESET_NAMES:?})"),
    }
}

/// Harmonic sweep α ∈ {0.5, 1, 2} with the Newtonian oracle alongside.
fn harmonic_sweep(name: &str, dir: &Path, overrides: &[String]) -> Result<()> {
    let base = base_with_overrides(Scenario::Harmonic, overrides)?;
    let mut jobs = Vec::new();
    for alpha in [0.5, 1.0, 2.0] {
        let mut config = base.clone();
        config.alpha = alpha;
        jobs.push(Job {
            label: format!("qch_alpha{alpha}"),
            config,
            engine: Engine::Qch,
        });
    }
    jobs.push(Job {
        label: "classical".to_string(),
        config: base.clone(),
        engine: Engine::Classical,
    });
    run_jobs(jobs, &base, dir, &format!("preset {name}"))
}

/// Repulsive sweep α ∈ {0.5, 1} against the two-particle oracle, which runs
/// with both packet phase conventions.
fn repulsive_sweep(name: &str, dir: &Path, overrides: &[String]) -> Result<()> {
    let base = base_with_overrides(Scenario::Repulsive, overrides)?;
    let mut jobs = Vec::new();
    for alpha in [0.5, 1.0] {
        let mut config = base.clone();
        config.alpha = alpha;
        jobs.push(Job {
            label: format!("qch_alpha{alpha}"),
            config: config.clone(),
            engine: Engine::Qch,
        });
        for phase_k in [-5.0, -2.5] {
            let mut qm_config = config.clone();
            qm_config.qm_phase_k = phase_k;
            jobs.push(Job {
                label: format!("qm2d_alpha{alpha}_k{phase_k}"),
                config: qm_config,
                engine: Engine::Qm2d,
            });
        }
    }
    run_jobs(jobs, &base, dir, &format!("preset {name}"))
}

/// Free-limit suite: with V = 0 the hybrid run must keep the classical
/// sector exact and reduce the quantum field to free evolution.
pub fn free_limit_suite(dir: &Path, overrides: &[String]) -> Result<Vec<Check>> {
    // the free default grid is already the wide one; the field comparison
    // at T = 1 needs the packet tail far from the periodic seam
    let mut config = ScenarioConfig::defaults(Scenario::Free);
    config.t_max = 1.0;
    config.record_every = 10;
    for o in overrides {
        apply_override(&mut config, o)?;
    }

    let started = Instant::now();
    let mut manifest = RunManifest::new("preset free-limit", &config);
    let series = match run_qch(&config) {
        Ok(s) => s,
        Err(f) => {
            manifest.absorb_series_stats("qch", &f.partial);
            write_series(&f.partial, &dir.join("qch.csv"))?;
            manifest.write(dir)?;
            bail!("free-limit run failed: {}", f.error);
        }
    };
    manifest.absorb_series_stats("qch", &series);
    write_series(&series, &dir.join("qch.csv"))?;
    manifest.outputs.push("qch.csv".to_string());

    // (a) mean trajectory moves ballistically
    let r1_err = series
        .rows
        .iter()
        .map(|r| (r.r1 - (config.r1_0 + config.v1_0 * r.t)).abs())
        .fold(0.0_f64, f64::max);
    // (b) the quasi-trajectory field never decouples from it
    let f1_err = series
        .rows
        .iter()
        .map(|r| r.diff_r1_f1.abs())
        .fold(0.0_f64, f64::max);
    // (c) the stored field is the free Gaussian, up to its global phase
    let final_phi = rerun_final_phi(&config)?;
    let params = PhysParams::natural(config.mass_ratio)?;
    let grid = config.grid.build()?;
    let exact = analytic_free_gaussian(config.alpha, config.t_max, &grid, params.m2);
    let l2 = final_phi.l2_distance_phase_aligned(&exact);

    let checks = vec![
        Check::less("free-limit: max |R1(T) - (0.5 - T)|", r1_err, 1e-10),
        Check::less("free-limit: max |f1 - R1|", f1_err, 1e-10),
        Check::less("free-limit: phi vs analytic free Gaussian L2", l2, 1e-6),
    ];
    for c in &checks {
        c.print();
    }
    write_checks(&checks, dir)?;
    manifest.outputs.push("checks.json".to_string());
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    manifest.write(dir)?;
    if checks.iter().any(|c| !c.passed) {
        bail!("free-limit suite failed");
    }
    Ok(checks)
}

/// Step the hybrid state again to t_max and hand back the final field.
fn rerun_final_phi(config: &ScenarioConfig) -> Result<ComplexField1D> {
    let params = PhysParams::natural(config.mass_ratio)?;
    let grid = config.grid.build()?;
    let pot = config.potential();
    let mut state = qch_core::hybrid::init_hybrid(&grid, config.alpha, config.r1_0, config.v1_0)?;
    let mut prop = qch_core::hybrid::HybridPropagator::new(&grid, config.dt, &pot, &params);
    for i in 0..config.steps() {
        prop.step(&mut state, i)?;
    }
    Ok(state.phi)
}

/// Sampler suite: ensembles must track the analytic densities and stay
/// reproducible.
pub fn sampler_suite(dir: &Path, overrides: &[String]) -> Result<Vec<Check>> {
    let mut config = ScenarioConfig::defaults(Scenario::Free);
    config.engines = vec![Engine::Sampler];
    for o in overrides {
        apply_override(&mut config, o)?;
    }
    let started = Instant::now();
    let mut manifest = RunManifest::new("preset sampler-suite", &config);
    let params = PhysParams::natural(config.mass_ratio)?;
    let n = config.n_paths;
    let dt = config.dt;
    // 0.0061 at the reference N = 1e5, scaled with 1/√N for overrides
    let ks_threshold = 1.929 / (n as f64).sqrt();

    let mut checks = Vec::new();

    // dispersing free Gaussian, KS at T = 0.25 and 0.5
    let free = FreeGaussianDrift::new(config.alpha, params.m2, params.hbar);
    let sigma0 = (1.0 / (4.0 * config.alpha)).sqrt();
    let e0 = Ensemble::gaussian(config.seed, n, 0.0, sigma0, free.diffusion);
    let quarter = evolve_ensemble(&e0, &free, dt, (0.25 / dt).round() as usize);
    checks.push(Check::less(
        "sampler: free Gaussian KS at T=0.25",
        ks_distance(&quarter, &|x| free.cdf(x, quarter.t)),
        ks_threshold,
    ));
    let half = evolve_ensemble(&quarter, &free, dt, (0.25 / dt).round() as usize);
    checks.push(Check::less(
        "sampler: free Gaussian KS at T=0.5",
        ks_distance(&half, &|x| free.cdf(x, half.t)),
        ks_threshold,
    ));
    let var_tol = 3.0 * free.variance(0.5) * (2.0 / n as f64).sqrt();
    checks.push(Check::within(
        "sampler: free Gaussian variance at T=0.5",
        half.variance(),
        free.variance(0.5),
        var_tol + 3.0 * dt, // Monte-Carlo band plus the O(dt) weak bias
    ));
    let rows = histogram(&half, &free, 200, -10.0, 10.0);
    write_histogram(&rows, &dir.join("histogram_free_gaussian.csv"))?;
    manifest
        .outputs
        .push("histogram_free_gaussian.csv".to_string());

    // stationary ground state of the unit-frequency oscillator
    let ground = HarmonicGroundDrift::new(params.m2, 1.0, params.hbar);
    let g0 = Ensemble::gaussian(
        config.seed ^ 0x5eed,
        n,
        0.0,
        ground.sigma2.sqrt(),
        params.nu2,
    );
    let g_quarter = evolve_ensemble(&g0, &ground, dt, (0.25 / dt).round() as usize);
    checks.push(Check::less(
        "sampler: ground state KS at T=0.25",
        ks_distance(&g_quarter, &|x| ground.cdf(x)),
        ks_threshold,
    ));
    let g_half = evolve_ensemble(&g_quarter, &ground, dt, (0.25 / dt).round() as usize);
    checks.push(Check::less(
        "sampler: ground state KS at T=0.5",
        ks_distance(&g_half, &|x| ground.cdf(x)),
        ks_threshold,
    ));
    let g_long = evolve_ensemble(&g_half, &ground, dt, (1.5 / dt).round() as usize);
    let g_tol = 3.0 * ground.sigma2 * (2.0 / n as f64).sqrt();
    checks.push(Check::within(
        "sampler: stationary variance over T=2",
        g_long.variance(),
        ground.sigma2,
        2.0 * g_tol,
    ));
    let g_rows = histogram(&g_long, &ground, 200, -5.0, 5.0);
    write_histogram(&g_rows, &dir.join("histogram_ground_state.csv"))?;
    manifest
        .outputs
        .push("histogram_ground_state.csv".to_string());
    manifest.warnings.sampler_resamples = half.resamples + g_long.resamples;

    // bitwise determinism and the noiseless classical limit
    let again = evolve_ensemble(&e0, &free, dt, (0.25 / dt).round() as usize);
    let identical = again.positions == quarter.positions;
    checks.push(Check {
        name: "sampler: identical seed reproduces ensemble bitwise".to_string(),
        passed: identical,
        measured: if identical { 0.0 } else { 1.0 },
        threshold: 0.5,
        comparison: "<".to_string(),
    });
    let frozen_a = evolve_ensemble(&Ensemble::point(1, 64, 0.3, 0.0), &free, dt, 200);
    let frozen_b = evolve_ensemble(&Ensemble::point(2, 64, 0.3, 0.0), &free, dt, 200);
    let frozen_ok = frozen_a.positions == frozen_b.positions && frozen_a.variance() < 1e-30;
    checks.push(Check {
        name: "sampler: nu = 0 trajectories are deterministic".to_string(),
        passed: frozen_ok,
        measured: frozen_a.variance(),
        threshold: 1e-30,
        comparison: "<".to_string(),
    });

    for c in &checks {
        c.print();
    }
    write_checks(&checks, dir)?;
    manifest.outputs.push("checks.json".to_string());
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    manifest.write(dir)?;
    if checks.iter().any(|c| !c.passed) {
        bail!("sampler suite failed");
    }
    Ok(checks)
}
