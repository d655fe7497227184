//! Executes the engines of one scenario config and writes their outputs.

use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};

use qch_core::diagnostics::ehrenfest_residuals;
use qch_core::runner::{run_classical, run_qch, run_qm2d, RunResult};
use qch_core::sampler::{evolve_ensemble, histogram, ks_distance, Ensemble, FreeGaussianDrift};
use qch_core::scenario::{Engine, ScenarioConfig};
use qch_core::{PhysParams, TimeSeries};

use crate::output::{
    write_ehrenfest_report, write_histogram, write_series, write_snapshot, RunManifest,
};

/// Run one engine, flushing a partial series with the truncation marker
/// recorded in the manifest if the engine fails mid-run.
pub fn flush_labelled(
    label: &str,
    result: RunResult,
    dir: &Path,
    manifest: &mut RunManifest,
    params: &PhysParams,
) -> Result<TimeSeries> {
    let (series, failure) = match result {
        Ok(s) => (s, None),
        Err(f) => (f.partial.clone(), Some(f.error)),
    };
    manifest.absorb_series_stats(label, &series);
    let path = dir.join(format!("{label}.csv"));
    write_series(&series, &path)?;
    manifest.outputs.push(file_name(&path));

    if !series.forces.is_empty() && series.rows.len() >= 3 {
        if let Ok(res) = ehrenfest_residuals(&series, params) {
            let rpath = dir.join(format!("ehrenfest_{label}.csv"));
            write_ehrenfest_report(&res, &rpath)?;
            manifest.outputs.push(file_name(&rpath));
        }
    }
    for (i, snap) in series.snapshots.iter().enumerate() {
        let spath = dir.join(format!("snapshot_{label}_{i:04}.csv"));
        write_snapshot(snap, &spath)?;
        manifest.outputs.push(file_name(&spath));
    }

    if let Some(error) = failure {
        bail!("engine {label} failed: {error} (partial series flushed)");
    }
    Ok(series)
}

fn file_name(p: &Path) -> String {
    p.file_name().unwrap().to_string_lossy().into_owned()
}

/// Execute every engine in `config.engines`, writing per-engine outputs and
/// accumulating warnings into the manifest. Returns the labelled series.
pub fn run_engines(
    config: &ScenarioConfig,
    dir: &Path,
    manifest: &mut RunManifest,
) -> Result<Vec<(String, TimeSeries)>> {
    config.validate().context("invalid configuration")?;
    let params = PhysParams::natural(config.mass_ratio)?;
    let mut out = Vec::new();
    for engine in &config.engines {
        match engine {
            Engine::Qch => {
                let s = flush_labelled("qch", run_qch(config), dir, manifest, &params)?;
                out.push(("qch".to_string(), s));
            }
            Engine::Qm2d => {
                let s = flush_labelled("qm2d", run_qm2d(config), dir, manifest, &params)?;
                out.push(("qm2d".to_string(), s));
            }
            Engine::Classical => {
                let s = flush_labelled("classical", run_classical(config), dir, manifest, &params)?;
                out.push(("classical".to_string(), s));
            }
            Engine::Sampler => {
                run_sampler_engine(config, dir, manifest, &params)?;
            }
        }
    }
    Ok(out)
}

/// Sampler engine for the free scenario: evolve an ensemble under the
/// dispersing-Gaussian drift to t_max, dump a histogram and record the KS
/// distance against the model CDF.
fn run_sampler_engine(
    config: &ScenarioConfig,
    dir: &Path,
    manifest: &mut RunManifest,
    params: &PhysParams,
) -> Result<()> {
    let model = FreeGaussianDrift::new(config.alpha, params.m2, params.hbar);
    let sigma0 = (1.0 / (4.0 * config.alpha)).sqrt();
    let e0 = Ensemble::gaussian(config.seed, config.n_paths, 0.0, sigma0, model.diffusion);
    let steps = config.steps();
    let t0 = Instant::now();
    let e1 = evolve_ensemble(&e0, &model, config.dt, steps);
    let ks = ks_distance(&e1, &|x| model.cdf(x, e1.t));
    manifest.sampler_ks = Some(ks);
    manifest.warnings.sampler_resamples += e1.resamples;
    let sigma_t = model.variance(e1.t).sqrt();
    let rows = histogram(&e1, &model, 200, -8.0 * sigma_t, 8.0 * sigma_t);
    let path = dir.join("sampler_histogram.csv");
    write_histogram(&rows, &path)?;
    manifest.outputs.push(file_name(&path));
    eprintln!(
        "sampler: {} paths x {} steps in {:.2?}, KS = {ks:.5}",
        config.n_paths,
        steps,
        t0.elapsed()
    );
    Ok(())
}

/// Run a full scenario into `dir` and write the manifest exactly once.
pub fn run_scenario(config: &ScenarioConfig, dir: &Path, command: &str) -> Result<()> {
    let started = Instant::now();
    let mut manifest = RunManifest::new(command, config);
    let result = run_engines(config, dir, &mut manifest);
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    manifest.write(dir)?;
    result.map(|_| ())
}
