//! A desk-scale numerical laboratory for hybrid quantum-classical dynamics
//! in one dimension: a quantum wavefunction coupled to a classicalized
//! particle through a quasi-trajectory field, validated against a full
//! two-particle quantum solver, a Newtonian two-body oracle and a
//! stochastic-trajectory sampler.
//!
//! Everything runs in natural units: ħ = 1, reference length λ = 1 and
//! m₂ = 1/2, so times are the dimensionless T of the scenario presets.

pub mod classical;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod grid;
pub mod hybrid;
pub mod interp;
pub mod params;
pub mod potential;
pub mod qm2d;
pub mod runner;
pub mod sampler;
pub mod scenario;
pub mod spectral;

pub use diagnostics::{DiagnosticRow, TimeSeries, CSV_HEADER};
pub use error::{Error, Result};
pub use field::{ComplexField1D, RealField1D};
pub use grid::{make_grid, Grid1D};
pub use hybrid::HybridState;
pub use params::PhysParams;
pub use potential::PotentialSpec;
pub use runner::{run_classical, run_qch, run_qm2d, RunFailure, RunResult};
pub use scenario::{Engine, Scenario, ScenarioConfig};
