//! Run configuration shared by every engine and the command-line runner.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{make_grid, Grid1D};
use crate::potential::PotentialSpec;

/// Which physical setup a run simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Harmonic,
    Repulsive,
    Free,
    Custom,
}

/// Which solvers participate in a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Qch,
    Qm2d,
    Classical,
    Sampler,
}

/// Grid extent and node count, kept separate from [`Grid1D`] so configs stay
/// plain data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid1D> {
        make_grid(self.x_min, self.x_max, self.n)
    }
}

/// Complete description of one run; identical configs produce identical
/// outputs byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Width parameter of the quantum packet.
    pub alpha: f64,
    /// m₁/m₂.
    pub mass_ratio: f64,
    /// 1D grid for the hybrid engine.
    pub grid: GridSpec,
    /// Node count per axis for the two-particle oracle.
    pub qm_n: usize,
    pub dt: f64,
    pub t_max: f64,
    /// Record a diagnostic row every this many steps.
    pub record_every: usize,
    /// Dump field snapshots every this many steps; 0 disables.
    pub snapshot_every: usize,
    pub engines: Vec<Engine>,
    /// Phase wavenumber of the x₁ packet handed to the two-particle oracle.
    pub qm_phase_k: f64,
    pub seed: u64,
    /// Trajectory count for the sampler engine.
    pub n_paths: usize,
    pub out_dir: Option<PathBuf>,
    /// Initial mean trajectory of the classicalized particle.
    pub r1_0: f64,
    /// Initial velocity field value of the classicalized particle.
    pub v1_0: f64,
    /// Potential for `Scenario::Custom`; ignored otherwise.
    pub custom_potential: Option<PotentialSpec>,
}

impl ScenarioConfig {
    /// Baseline configuration: α = 1, dt = 10⁻³ up to T = 1.2.
    ///
    /// The harmonic scenario runs on [−10, 10)/512 with a 256² oracle grid.
    /// Scenarios without a confining interaction (free, repulsive) default
    /// to [−20, 20) at the same spacing: their packet disperses to σ ≈ 2.5
    /// by T = 1.2 and on the narrow domain the probability current through
    /// the periodic seam would contaminate ⟨x₂⟩-level diagnostics at the
    /// 1e-3 level.
    pub fn defaults(scenario: Scenario) -> Self {
        let confined = matches!(scenario, Scenario::Harmonic | Scenario::Custom);
        let (half_width, n, qm_n) = if confined {
            (10.0, 512, 256)
        } else {
            (20.0, 1024, 512)
        };
        ScenarioConfig {
            scenario,
            alpha: 1.0,
            mass_ratio: 5.0,
            grid: GridSpec {
                x_min: -half_width,
                x_max: half_width,
                n,
            },
            qm_n,
            dt: 1e-3,
            t_max: 1.2,
            record_every: 1,
            snapshot_every: 0,
            engines: vec![Engine::Qch],
            qm_phase_k: -5.0,
            seed: 12345,
            n_paths: 100_000,
            out_dir: None,
            r1_0: 0.5,
            v1_0: -1.0,
            custom_potential: None,
        }
    }

    pub fn potential(&self) -> PotentialSpec {
        match self.scenario {
            Scenario::Harmonic => PotentialSpec::harmonic_default(),
            Scenario::Repulsive => PotentialSpec::repulsive_default(),
            Scenario::Free => PotentialSpec::Zero,
            Scenario::Custom => self.custom_potential.unwrap_or(PotentialSpec::Zero),
        }
    }

    /// Number of integration steps implied by dt and t_max.
    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::config("alpha must be positive"));
        }
        if !self.mass_ratio.is_finite() || self.mass_ratio <= 0.0 {
            return Err(Error::config("mass_ratio must be positive"));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 || self.dt > 1e-2 {
            return Err(Error::config("dt must lie in (0, 1e-2]"));
        }
        if self.t_max < 0.0 {
            return Err(Error::config("t_max must be non-negative"));
        }
        if self.record_every == 0 {
            return Err(Error::config("record_every must be at least 1"));
        }
        if self.engines.is_empty() {
            return Err(Error::config("engines must not be empty"));
        }
        if self.qm_n < 16 || !self.qm_n.is_power_of_two() {
            return Err(Error::config("qm_n must be a power of two >= 16"));
        }
        if self.n_paths == 0 {
            return Err(Error::config("n_paths must be at least 1"));
        }
        if self.engines.contains(&Engine::Sampler) && self.scenario != Scenario::Free {
            return Err(Error::config(
                "the sampler engine has closed-form drift models for the free scenario only",
            ));
        }
        self.grid.build()?;
        // dt·record_every must tile t_max
        let interval = self.dt * self.record_every as f64;
        let ratio = self.t_max / interval;
        if self.t_max > 0.0 && (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::config(format!(
                "dt * record_every = {interval} does not divide t_max = {}",
                self.t_max
            )));
        }
        if self.scenario == Scenario::Custom && self.custom_potential.is_none() {
            return Err(Error::config(
                "custom scenario requires an explicit potential",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ScenarioConfig::defaults(Scenario::Harmonic)
            .validate()
            .unwrap();
    }

    #[test]
    fn rejects_negative_alpha() {
        let mut c = ScenarioConfig::defaults(Scenario::Harmonic);
        c.alpha = -1.0;
        let err = c.validate().unwrap_err();
        assert!(err.to_string().contains("alpha must be positive"));
    }

    #[test]
    fn rejects_non_dividing_record_interval() {
        let mut c = ScenarioConfig::defaults(Scenario::Harmonic);
        c.record_every = 7;
        assert!(c.validate().is_err());
    }

    #[test]
    fn rejects_empty_engines() {
        let mut c = ScenarioConfig::defaults(Scenario::Free);
        c.engines.clear();
        assert!(c.validate().is_err());
    }
}
