//! CSV and manifest writers. Every float prints with 17 significant digits
//! so written values parse back bit-exactly; line endings are LF.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use qch_core::diagnostics::{EhrenfestResiduals, FieldSnapshot, TimeSeries};
use qch_core::scenario::ScenarioConfig;
use qch_core::CSV_HEADER;

/// 17 significant digits: enough for f64 round-trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write the canonical diagnostic series CSV.
pub fn write_series(series: &TimeSeries, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(series.rows.len() * 200 + 128);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &series.rows {
        let cols = [
            r.t,
            r.r1,
            r.f1_mean,
            r.x2_mean,
            r.w_mean,
            r.p2_mean,
            r.energy,
            r.norm2,
            r.diff_r1_f1,
            r.diff_r1_x2,
        ];
        let mut first = true;
        for c in cols {
            if !first {
                out.push(',');
            }
            out.push_str(&fmt_f64(c));
            first = false;
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Ehrenfest residual report: position relations from the series columns,
/// momentum relations against the recorded force means (both ∂₂V
/// conventions side by side).
pub fn write_ehrenfest_report(res: &EhrenfestResiduals, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("t,res_r1,res_w,res_x2,res_p2_slot,res_p2_stored\n");
    for i in 0..res.t.len() {
        let w = res.w.get(i).copied().unwrap_or(f64::NAN);
        let p2s = res.p2_slot.get(i).copied().unwrap_or(f64::NAN);
        let p2f = res.p2_stored.get(i).copied().unwrap_or(f64::NAN);
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(res.t[i]),
            fmt_f64(res.r1[i]),
            fmt_f64(w),
            fmt_f64(res.x2[i]),
            fmt_f64(p2s),
            fmt_f64(p2f),
        ));
    }
    write_atomic(path, out.as_bytes())
}

/// Field snapshot CSV: x, Re Φ, Im Φ, f₁, w.
pub fn write_snapshot(snap: &FieldSnapshot, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("x,phi_re,phi_im,f1,w\n");
    for j in 0..snap.x.len() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(snap.x[j]),
            fmt_f64(snap.phi_re[j]),
            fmt_f64(snap.phi_im[j]),
            fmt_f64(snap.f1[j]),
            fmt_f64(snap.w[j]),
        ));
    }
    write_atomic(path, out.as_bytes())
}

/// Sampler histogram CSV: bin center, count, model density.
pub fn write_histogram(rows: &[(f64, usize, f64)], path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("center,count,model_density\n");
    for (c, n, rho) in rows {
        out.push_str(&format!("{},{n},{}\n", fmt_f64(*c), fmt_f64(*rho)));
    }
    write_atomic(path, out.as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("creating output directory {}", parent.display()))?;
    }
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(bytes)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Aggregated warnings of one run directory.
#[derive(Debug, Default, Clone, Serialize)]
pub struct Warnings {
    pub boundary_contact: Vec<String>,
    pub cfl_flagged_steps: usize,
    pub max_cfl: f64,
    pub sampler_resamples: u64,
}

/// Run metadata written once per run directory.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub config: ScenarioConfig,
    pub wall_time_s: f64,
    pub warnings: Warnings,
    pub outputs: Vec<String>,
    pub truncated: bool,
    /// KS distance of the sampler engine against its model CDF, when run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampler_ks: Option<f64>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, config: &ScenarioConfig) -> Self {
        RunManifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            wall_time_s: 0.0,
            warnings: Warnings::default(),
            outputs: Vec::new(),
            truncated: false,
            sampler_ks: None,
        }
    }

    pub fn absorb_series_stats(&mut self, label: &str, series: &TimeSeries) {
        if series.stats.boundary_contact {
            self.warnings.boundary_contact.push(label.to_string());
        }
        self.warnings.cfl_flagged_steps += series.stats.cfl_flags;
        self.warnings.max_cfl = self.warnings.max_cfl.max(series.stats.max_cfl);
        self.truncated |= series.truncated;
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("manifest.json");
        let json = serde_json::to_string_pretty(self).context("serializing manifest")?;
        write_atomic(&path, json.as_bytes())?;
        Ok(path)
    }
}
