//! Forward stochastic-trajectory sampling: ensembles of dr̂ = u·dt + √(2ν)·dW
//! with the drift u = v + ν·∂ₓln ρ tied to a density by the consistency
//! condition. Verifies that sampled ensembles track |ψ|².
//!
//! Randomness is counter-based: every draw is a pure function of
//! (seed, trajectory, counter), so ensembles are reproducible bit for bit
//! no matter how trajectories are partitioned across workers.

use crate::grid::Grid1D;
use crate::interp::{cubic_periodic, nearest_good_fill};

/// Positions of N sampled trajectories at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub t: f64,
    pub positions: Vec<f64>,
    pub seed: u64,
    pub nu: f64,
    /// Global step counter; continuation runs keep drawing fresh noise.
    pub steps_taken: u64,
    /// Trajectories clamped back into the support window so far.
    pub resamples: u64,
}

/// Drift data: current velocity and density (or its log-slope) of the state
/// being tracked, plus the noise intensity.
pub trait DriftModel {
    fn current_velocity(&self, x: f64, t: f64) -> f64;
    fn log_density_slope(&self, x: f64, t: f64) -> f64;
    fn density(&self, x: f64, t: f64) -> f64;
    /// Window outside which trajectories are clamped back and counted.
    fn support(&self) -> (f64, f64);
}

/// Forward drift u = v + ν·∂ₓln ρ of the consistency condition.
pub fn forward_drift(model: &dyn DriftModel, nu: f64, x: f64, t: f64) -> f64 {
    model.current_velocity(x, t) + nu * model.log_density_slope(x, t)
}

// ---------------------------------------------------------------------------
// counter-based randomness

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One draw of the stream (seed, trajectory): a chained splitmix64 hash.
fn draw_u64(seed: u64, trajectory: u64, counter: u64) -> u64 {
    let mut z = mix64(seed ^ GOLDEN);
    z = mix64(z ^ trajectory.wrapping_mul(GOLDEN));
    mix64(z ^ counter.wrapping_mul(0xD605_0B58_63D4_4D4D))
}

fn draw_uniform(seed: u64, trajectory: u64, counter: u64) -> f64 {
    // 53-bit mantissa in [0, 1)
    (draw_u64(seed, trajectory, counter) >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Standard normal via Box–Muller; the pair (counter, counter+1) feeds one
/// draw so the stream stays a pure function of its indices.
fn draw_normal(seed: u64, trajectory: u64, counter: u64) -> f64 {
    let u1 = 1.0 - draw_uniform(seed, trajectory, counter); // (0, 1]
    let u2 = draw_uniform(seed, trajectory, counter + 1);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

// ---------------------------------------------------------------------------
// ensembles

impl Ensemble {
    /// Sample N positions from a Gaussian with the given mean and standard
    /// deviation; draw counters 0 and 1 are reserved for initialization.
    pub fn gaussian(seed: u64, n: usize, mean: f64, sigma: f64, nu: f64) -> Ensemble {
        let positions = (0..n as u64)
            .map(|i| mean + sigma * draw_normal(seed, i, 0))
            .collect();
        Ensemble {
            t: 0.0,
            positions,
            seed,
            nu,
            steps_taken: 0,
            resamples: 0,
        }
    }

    /// All N trajectories at one point; the ν → 0 classical limit test
    /// starts here.
    pub fn point(seed: u64, n: usize, x0: f64, nu: f64) -> Ensemble {
        Ensemble {
            t: 0.0,
            positions: vec![x0; n],
            seed,
            nu,
            steps_taken: 0,
            resamples: 0,
        }
    }

    pub fn mean(&self) -> f64 {
        self.positions.iter().sum::<f64>() / self.positions.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.positions
            .iter()
            .map(|&x| (x - m) * (x - m))
            .sum::<f64>()
            / (self.positions.len() - 1) as f64
    }
}

/// Euler–Maruyama evolution over `steps` steps of size `dt`.
///
/// With ν = 0 the noise term is skipped entirely and trajectories follow the
/// deterministic characteristics ẋ = v(x, t) independent of the seed.
pub fn evolve_ensemble(e: &Ensemble, model: &dyn DriftModel, dt: f64, steps: usize) -> Ensemble {
    let mut out = e.clone();
    let noise_scale = (2.0 * out.nu * dt).sqrt();
    let (lo, hi) = model.support();
    for s in 0..steps as u64 {
        let t = out.t;
        let global = out.steps_taken + s;
        // counters 0/1 are the init draw; step k uses 2(k+1), 2(k+1)+1
        let counter = 2 * (global + 1);
        for (i, x) in out.positions.iter_mut().enumerate() {
            let drift = forward_drift(model, out.nu, *x, t);
            let mut next = *x + drift * dt;
            if out.nu > 0.0 {
                next += noise_scale * draw_normal(out.seed, i as u64, counter);
            }
            if next < lo || next > hi {
                next = next.clamp(lo, hi);
                out.resamples += 1;
            }
            *x = next;
        }
        out.t += dt;
    }
    out.steps_taken += steps as u64;
    out
}

/// Kolmogorov–Smirnov sup-norm distance between the empirical distribution
/// and a reference CDF.
pub fn ks_distance(e: &Ensemble, cdf: &dyn Fn(f64) -> f64) -> f64 {
    let mut sorted = e.positions.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Histogram over [lo, hi] with equal bins: (center, count, model density).
pub fn histogram(
    e: &Ensemble,
    model: &dyn DriftModel,
    bins: usize,
    lo: f64,
    hi: f64,
) -> Vec<(f64, usize, f64)> {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in &e.positions {
        if x >= lo && x < hi {
            let b = ((x - lo) / width) as usize;
            counts[b.min(bins - 1)] += 1;
        }
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(b, c)| {
            let center = lo + (b as f64 + 0.5) * width;
            (center, c, model.density(center, e.t))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// closed-form drift models

/// Freely dispersing Gaussian packet of width parameter α and mass m:
/// ρ is N(0, σ²(t)) with σ²(t) = (1 + 16α²D²t²)/(4α), D = ħ/(2m).
#[derive(Debug, Clone, Copy)]
pub struct FreeGaussianDrift {
    pub alpha: f64,
    pub diffusion: f64,
}

impl FreeGaussianDrift {
    pub fn new(alpha: f64, m: f64, hbar: f64) -> Self {
        FreeGaussianDrift {
            alpha,
            diffusion: hbar / (2.0 * m),
        }
    }

    pub fn variance(&self, t: f64) -> f64 {
        let y = 4.0 * self.alpha * self.diffusion * t;
        (1.0 + y * y) / (4.0 * self.alpha)
    }

    pub fn cdf(&self, x: f64, t: f64) -> f64 {
        normal_cdf(x, 0.0, self.variance(t).sqrt())
    }
}

impl DriftModel for FreeGaussianDrift {
    fn current_velocity(&self, x: f64, t: f64) -> f64 {
        let y = 4.0 * self.alpha * self.diffusion * t;
        4.0 * self.alpha * self.diffusion * y * x / (1.0 + y * y)
    }

    fn log_density_slope(&self, x: f64, t: f64) -> f64 {
        -x / self.variance(t)
    }

    fn density(&self, x: f64, t: f64) -> f64 {
        let var = self.variance(t);
        (-x * x / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
    }

    fn support(&self) -> (f64, f64) {
        (-50.0, 50.0)
    }
}

/// Harmonic-oscillator ground state: stationary Gaussian with
/// σ² = ħ/(2mω) and zero current velocity.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicGroundDrift {
    pub sigma2: f64,
}

impl HarmonicGroundDrift {
    pub fn new(m: f64, omega: f64, hbar: f64) -> Self {
        HarmonicGroundDrift {
            sigma2: hbar / (2.0 * m * omega),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        normal_cdf(x, 0.0, self.sigma2.sqrt())
    }
}

impl DriftModel for HarmonicGroundDrift {
    fn current_velocity(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }

    fn log_density_slope(&self, x: f64, _t: f64) -> f64 {
        -x / self.sigma2
    }

    fn density(&self, x: f64, _t: f64) -> f64 {
        (-x * x / (2.0 * self.sigma2)).exp() / (2.0 * std::f64::consts::PI * self.sigma2).sqrt()
    }

    fn support(&self) -> (f64, f64) {
        (-50.0, 50.0)
    }
}

/// Drift read off a sequence of stored solver fields: cubic interpolation in
/// space, linear interpolation in time. The log-density slope is a central
/// difference with the same relative density floor as the solvers, continued
/// from the nearest above-floor node.
pub struct GridDrift {
    grid: Grid1D,
    times: Vec<f64>,
    velocities: Vec<Vec<f64>>,
    densities: Vec<Vec<f64>>,
    slopes: Vec<Vec<f64>>,
}

impl GridDrift {
    /// `frames` are (t, v field, ρ field) triples sorted by time.
    pub fn new(grid: Grid1D, frames: Vec<(f64, Vec<f64>, Vec<f64>)>) -> Self {
        let floor_rel = crate::hybrid::DENSITY_FLOOR;
        let mut times = Vec::with_capacity(frames.len());
        let mut velocities = Vec::with_capacity(frames.len());
        let mut densities = Vec::with_capacity(frames.len());
        let mut slopes = Vec::with_capacity(frames.len());
        for (t, v, rho) in frames {
            let n = rho.len();
            let rho_max = rho.iter().cloned().fold(0.0_f64, f64::max);
            let floor = floor_rel * rho_max;
            let mut slope = vec![0.0; n];
            let mut good = vec![false; n];
            for j in 0..n {
                let jp = (j + 1) % n;
                let jm = (j + n - 1) % n;
                if rho[j] >= floor && rho[j] > 0.0 {
                    slope[j] = (rho[jp] - rho[jm]) / (2.0 * grid.dx * rho[j]);
                    good[j] = true;
                }
            }
            nearest_good_fill(&mut slope, &good);
            times.push(t);
            velocities.push(v);
            densities.push(rho);
            slopes.push(slope);
        }
        GridDrift {
            grid,
            times,
            velocities,
            densities,
            slopes,
        }
    }

    fn frame_weights(&self, t: f64) -> (usize, usize, f64) {
        let m = self.times.len();
        if t <= self.times[0] {
            return (0, 0, 0.0);
        }
        if t >= self.times[m - 1] {
            return (m - 1, m - 1, 0.0);
        }
        let hi = self.times.partition_point(|&tt| tt <= t).min(m - 1);
        let lo = hi - 1;
        let span = self.times[hi] - self.times[lo];
        let w = if span > 0.0 {
            (t - self.times[lo]) / span
        } else {
            0.0
        };
        (lo, hi, w)
    }

    fn sample(&self, fields: &[Vec<f64>], x: f64, t: f64) -> f64 {
        let (lo, hi, w) = self.frame_weights(t);
        let u = (x - self.grid.x_min) / self.grid.dx;
        let a = cubic_periodic(&fields[lo], u);
        if lo == hi {
            return a;
        }
        let b = cubic_periodic(&fields[hi], u);
        (1.0 - w) * a + w * b
    }
}

impl DriftModel for GridDrift {
    fn current_velocity(&self, x: f64, t: f64) -> f64 {
        self.sample(&self.velocities, x, t)
    }

    fn log_density_slope(&self, x: f64, t: f64) -> f64 {
        self.sample(&self.slopes, x, t)
    }

    fn density(&self, x: f64, t: f64) -> f64 {
        self.sample(&self.densities, x, t).max(0.0)
    }

    fn support(&self) -> (f64, f64) {
        (self.grid.x_min, self.grid.x_max)
    }
}

// ---------------------------------------------------------------------------
// normal CDF

/// Φ((x − mean)/σ).
pub fn normal_cdf(x: f64, mean: f64, sigma: f64) -> f64 {
    let z = (x - mean) / (sigma * std::f64::consts::SQRT_2);
    0.5 * erfc(-z)
}

/// Complementary error function: series for small arguments, continued
/// fraction for the tails. Absolute error well below 1e-14.
fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        erfc_fraction(x)
    }
}

fn erf_series(x: f64) -> f64 {
    // 2/√π Σ (−1)^n x^{2n+1}/(n!(2n+1))
    let mut term = x;
    let mut sum = x;
    let x2 = x * x;
    for n in 1..200 {
        term *= -x2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

fn erfc_fraction(x: f64) -> f64 {
    // erfc(x) = e^{−x²}/(x√π) · 1/(1 + q₁/(1 + q₂/(1 + …))), qₙ = n/(2x²)
    // evaluated by the modified Lentz method
    let tiny = 1e-300;
    let mut f = 1.0_f64;
    let mut c = f;
    let mut d = 0.0_f64;
    let two_x2 = 2.0 * x * x;
    for n in 1..300 {
        let q = n as f64 / two_x2;
        d = 1.0 + q * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = 1.0 + q / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (x * std::f64::consts::PI.sqrt()) / f
}
