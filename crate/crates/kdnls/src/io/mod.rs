//! Experiment artifacts: configuration parsing, CSV and binary snapshot
//! emission, the JSON run summary, and the end-to-end experiment runner.

pub mod config;
pub mod csv;
pub mod snapshot;
pub mod summary;

use std::path::{Path, PathBuf};

use crate::diagnostics::{apriori_report, record_snapshot};
use crate::error::Result;
use crate::gauge::gauged_residual;
use crate::scattering::{analyze_trajectory, band_envelope, mass_limit};
use crate::solver::{self, Trajectory};
use crate::spectral::{PsiBump, Sign};

pub use config::{load_config, parse_config, ExperimentConfig};
pub use snapshot::{read_snapshot, write_snapshot};
pub use summary::{GaugeResidualEntry, Summary};

/// Environment variable overriding the root that relative output
/// directories are resolved against.
pub const OUTPUT_ROOT_ENV: &str = "KDNLS_OUTPUT_ROOT";

pub fn resolve_output_dir(cfg: &ExperimentConfig, root: Option<&Path>) -> PathBuf {
    match root {
        Some(r) if cfg.output_dir.is_relative() => r.join(&cfg.output_dir),
        _ => cfg.output_dir.clone(),
    }
}

fn snapshot_filename(t: f64) -> String {
    format!("snapshot_{t:014.6}.bin")
}

/// Run the configured experiment and write `diagnostics.csv`,
/// `summary.json`, and `snapshots/*.bin` under the output directory.
/// Solver aborts still produce a partial summary before propagating.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    root: Option<&Path>,
) -> Result<(PathBuf, Summary, Trajectory)> {
    let out_dir = resolve_output_dir(cfg, root);
    std::fs::create_dir_all(out_dir.join("snapshots"))?;
    let hash = cfg.sha256();
    let mut summary = Summary::skeleton(hash.clone(), cfg.echo.clone());

    let mut solver_cfg = cfg.solver.clone();
    solver_cfg.snapshot_times = cfg.assemble_snapshot_times();
    let traj = match solver::run(&solver_cfg) {
        Ok(t) => t,
        Err(e) => {
            summary.status = format!("aborted: {e}");
            summary.write(&out_dir.join("summary.json"))?;
            return Err(e);
        }
    };

    let mut records = Vec::with_capacity(traj.snapshots.len());
    for snap in &traj.snapshots {
        records.push(record_snapshot(snap.t, &snap.f_hat, traj.beta, traj.dealias)?);
        write_snapshot(&out_dir.join("snapshots").join(snapshot_filename(snap.t)), snap)?;
    }
    std::fs::write(
        out_dir.join("diagnostics.csv"),
        csv::diagnostics_csv(&records, &hash),
    )?;

    summary.measured_eps = Some(traj.measured_eps);
    summary.initial_l2 = Some(traj.initial_l2);
    summary.final_l2 = Some(traj.final_state.f_hat.l2_norm());
    summary.final_t = Some(traj.final_state.t);

    let t_end = cfg.solver.t_end;
    if t_end >= 100.0 {
        summary.mass_limit = mass_limit(&traj.mass_series(), traj.beta, 1e-10).ok();
    }
    if t_end > 20.0 {
        let w1inf_series: Vec<(f64, f64)> = records.iter().map(|r| (r.t, r.w1inf)).collect();
        summary.w1inf_decay =
            crate::diagnostics::decay_fit(&w1inf_series, (10.0, t_end)).ok();
        summary.apriori = apriori_report(&traj, 0.05, (1.0, t_end)).ok();
    }
    if cfg.solver.phase_accumulation && !cfg.scattering_times.is_empty() {
        summary.scattering = analyze_trajectory(&traj, &cfg.scattering_times, 0.05).ok();
    }
    if cfg.gauge_checks {
        let psi = PsiBump::default_for(&traj.grid);
        for &t in &cfg.scattering_times {
            if t - cfg.gauge_probe_dt <= 0.0 || t + cfg.gauge_probe_dt > t_end {
                continue;
            }
            for sign in [Sign::Plus, Sign::Minus] {
                if let Ok((residual, v_h1, rhs_l2)) =
                    gauged_residual(&traj, t, cfg.gauge_probe_dt, sign, &psi)
                {
                    summary.gauge_residuals.push(GaugeResidualEntry {
                        t,
                        sign: match sign {
                            Sign::Plus => "+".to_string(),
                            Sign::Minus => "-".to_string(),
                        },
                        probe_dt: cfg.gauge_probe_dt,
                        residual,
                        v_h1,
                        rhs_l2,
                    });
                }
            }
        }
    }
    if let Some(last) = traj.snapshots.last() {
        summary.band_envelope = band_envelope(&last.f_hat);
    }

    summary.write(&out_dir.join("summary.json"))?;
    Ok((out_dir, summary, traj))
}
