//! The run summary: every scalar outcome of an experiment, serialized as
//! JSON next to the CSV and snapshot artifacts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagnostics::AprioriReport;
use crate::error::Result;
use crate::scattering::{MassLimit, RateFit, ScatteringResult};

pub const SUMMARY_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaugeResidualEntry {
    pub t: f64,
    /// "+" or "-".
    pub sign: String,
    pub probe_dt: f64,
    pub residual: f64,
    pub v_h1: f64,
    /// Size of the nonlinear right-hand side the derivative is checked
    /// against; `residual / rhs_l2` is the relative defect of the identity.
    pub rhs_l2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub format_version: u32,
    pub tool_version: String,
    pub git_describe: String,
    pub config_sha256: String,
    pub config: BTreeMap<String, String>,
    /// "ok" or "aborted: <reason>".
    pub status: String,
    pub measured_eps: Option<f64>,
    pub initial_l2: Option<f64>,
    pub final_l2: Option<f64>,
    pub final_t: Option<f64>,
    pub mass_limit: Option<MassLimit>,
    pub scattering: Option<ScatteringResult>,
    pub apriori: Option<AprioriReport>,
    #[serde(default)]
    pub gauge_residuals: Vec<GaugeResidualEntry>,
    /// Fitted slope of `log ||u||_{W^{1,inf}}` against `log t`.
    pub w1inf_decay: Option<RateFit>,
    /// `(N, sup over the N-band of (1+|xi|)^{1/2} |f_hat|)` at the final time.
    #[serde(default)]
    pub band_envelope: Vec<(f64, f64)>,
}

impl Summary {
    pub fn skeleton(config_sha256: String, config: BTreeMap<String, String>) -> Summary {
        Summary {
            format_version: SUMMARY_FORMAT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            git_describe: option_env!("KDNLS_GIT_DESCRIBE").unwrap_or("unknown").to_string(),
            config_sha256,
            config,
            status: "ok".to_string(),
            measured_eps: None,
            initial_l2: None,
            final_l2: None,
            final_t: None,
            mass_limit: None,
            scattering: None,
            apriori: None,
            gauge_residuals: Vec::new(),
            w1inf_decay: None,
            band_envelope: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Summary> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Human-oriented rendering for the `describe` verb.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kdnls run summary (format v{})", self.format_version);
        let _ = writeln!(
            out,
            "tool {} ({}), config sha256 {}",
            self.tool_version, self.git_describe, self.config_sha256
        );
        let _ = writeln!(out, "status: {}", self.status);
        if let (Some(a), Some(b)) = (self.config.get("alpha"), self.config.get("beta")) {
            let _ = writeln!(out, "alpha = {a}, beta = {b}");
        }
        if let Some(e) = self.measured_eps {
            let _ = writeln!(out, "measured data size = {e:.6e}");
        }
        if let (Some(t), Some(l2), Some(l20)) = (self.final_t, self.final_l2, self.initial_l2) {
            let _ = writeln!(out, "t = {t}: l2 = {l2:.10e} (initial {l20:.10e})");
        }
        if let Some(m) = &self.mass_limit {
            let _ = writeln!(
                out,
                "mass limit D_inf = {:.10e}, monotone = {}",
                m.d_infty, m.monotone_matches_beta
            );
            if let Some(r) = &m.rate {
                let _ = writeln!(out, "  approach rate exponent = {:.3}", r.exponent);
            }
        }
        if let Some(r) = &self.w1inf_decay {
            let _ = writeln!(
                out,
                "w1inf decay exponent = {:.4} over t in [{}, {}]",
                r.exponent, r.window.0, r.window.1
            );
        }
        if let Some(s) = &self.scattering {
            if let Some(r) = &s.corrected_difference_rate {
                let _ = writeln!(out, "corrected-difference decay exponent = {:.3}", r.exponent);
            }
            if let Some(r) = &s.remainder_rate {
                let _ = writeln!(out, "resonant-remainder decay exponent = {:.3}", r.exponent);
            }
            if let Some(f) = s.correction_necessity_factor {
                let _ = writeln!(out, "phase-correction necessity factor = {f:.2}");
            }
        }
        if let Some(a) = &self.apriori {
            let _ = writeln!(
                out,
                "a priori sups: <t>^-d h2 = {:.4e}, <t>^-2d xf_h1 = {:.4e} (d = {})",
                a.weighted_h2_sup, a.weighted_xf_sup, a.delta
            );
        }
        for g in &self.gauge_residuals {
            let _ = writeln!(
                out,
                "gauge residual v{} at t = {} (probe {}): {:.4e} ({:.2e} x ||v||_H1)",
                g.sign,
                g.t,
                g.probe_dt,
                g.residual,
                if g.v_h1 > 0.0 { g.residual / g.v_h1 } else { f64::NAN }
            );
        }
        if !self.band_envelope.is_empty() {
            let _ = writeln!(out, "dyadic band envelope at final time:");
            for (n, sup) in &self.band_envelope {
                let _ = writeln!(out, "  N = {n:>8}: {sup:.6e}");
            }
        }
        out
    }
}
