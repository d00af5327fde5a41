//! Flat key = value experiment configuration.
//!
//! Grammar: one `key = value` per line; `#` starts a comment; blank lines
//! ignored. Keys are fixed (unknown or duplicate keys are errors, with the
//! offending line reported). Lists are comma-separated. Booleans accept
//! on/off and true/false.

use std::collections::BTreeMap;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::solver::{InitialData, InitialFamily, SolverConfig};
use crate::spectral::DealiasPolicy;

pub const CONFIG_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub solver: SolverConfig,
    pub gauge_checks: bool,
    pub gauge_probe_dt: f64,
    pub scattering_times: Vec<f64>,
    pub diagnostics_cadence: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub format_version: u32,
    /// Verbatim source text, hashed into every output.
    pub raw_text: String,
    /// Parsed key/value pairs, echoed into the summary.
    pub echo: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn sha256(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.raw_text.as_bytes());
        format!("{:x}", h.finalize())
    }

    pub fn short_hash(&self) -> String {
        self.sha256()[..12].to_string()
    }

    /// Snapshot times the solver must hit: explicit requests, the cadence
    /// ticks, the scattering checkpoints, and (when gauge checks are on) the
    /// probe triples around each scattering checkpoint.
    pub fn assemble_snapshot_times(&self) -> Vec<f64> {
        let t_end = self.solver.t_end;
        let mut times: Vec<f64> = self.solver.snapshot_times.clone();
        times.push(0.0);
        times.push(t_end);
        if self.diagnostics_cadence > 0.0 {
            let mut t = 0.0;
            while t < t_end - 1e-9 {
                times.push(t);
                t += self.diagnostics_cadence;
            }
        }
        for &t in &self.scattering_times {
            times.push(t);
            if self.gauge_checks {
                for p in [t - self.gauge_probe_dt, t + self.gauge_probe_dt] {
                    if p >= 0.0 && p <= t_end {
                        times.push(p);
                    }
                }
            }
        }
        times.retain(|&t| t >= 0.0 && t <= t_end);
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        times.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        times
    }
}

fn parse_f64(key: &str, v: &str, line: usize) -> Result<f64> {
    v.parse::<f64>().map_err(|_| Error::Config {
        line,
        msg: format!("key \"{key}\": expected a number, got \"{v}\""),
    })
}

fn parse_usize(key: &str, v: &str, line: usize) -> Result<usize> {
    v.parse::<usize>().map_err(|_| Error::Config {
        line,
        msg: format!("key \"{key}\": expected a nonnegative integer, got \"{v}\""),
    })
}

fn parse_u64(key: &str, v: &str, line: usize) -> Result<u64> {
    v.parse::<u64>().map_err(|_| Error::Config {
        line,
        msg: format!("key \"{key}\": expected a nonnegative integer, got \"{v}\""),
    })
}

fn parse_bool(key: &str, v: &str, line: usize) -> Result<bool> {
    match v {
        "on" | "true" | "1" => Ok(true),
        "off" | "false" | "0" => Ok(false),
        _ => Err(Error::Config {
            line,
            msg: format!("key \"{key}\": expected on/off, got \"{v}\""),
        }),
    }
}

fn parse_list(key: &str, v: &str, line: usize) -> Result<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|s| parse_f64(key, s.trim(), line))
        .collect()
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut kv: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(Error::Config {
            line: line_no,
            msg: format!("expected \"key = value\", got \"{line}\""),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if kv.insert(key.clone(), (value, line_no)).is_some() {
            return Err(Error::Config {
                line: line_no,
                msg: format!("duplicate key \"{key}\""),
            });
        }
    }

    const KNOWN: &[&str] = &[
        "format_version",
        "alpha",
        "beta",
        "grid_n",
        "grid_length",
        "dt",
        "t_end",
        "dealias",
        "initial_family",
        "initial_amplitude",
        "initial_width",
        "initial_chirp",
        "snapshot_times",
        "phase_accumulation",
        "gauge_checks",
        "gauge_probe_dt",
        "scattering_times",
        "diagnostics_cadence",
        "output_dir",
        "seed",
        "cfl",
        "boundary_tol",
        "blowup_factor",
    ];
    for (key, (_, line)) in &kv {
        if !KNOWN.contains(&key.as_str()) {
            return Err(Error::Config {
                line: *line,
                msg: format!("unknown key \"{key}\""),
            });
        }
    }

    let get = |key: &str| kv.get(key).map(|(v, l)| (v.as_str(), *l));
    let require = |key: &str| -> Result<(&str, usize)> {
        get(key).ok_or_else(|| Error::ConfigGeneral(format!("missing required key \"{key}\"")))
    };

    let (v, l) = require("alpha")?;
    let alpha = parse_f64("alpha", v, l)?;
    let (v, l) = require("beta")?;
    let beta = parse_f64("beta", v, l)?;

    let mut grid_n = 4096usize;
    let mut grid_length = 1800.0;
    let mut dt = 0.05;
    let mut t_end = 200.0;
    if let Some((v, l)) = get("grid_n") {
        grid_n = parse_usize("grid_n", v, l)?;
    }
    if let Some((v, l)) = get("grid_length") {
        grid_length = parse_f64("grid_length", v, l)?;
    }
    if let Some((v, l)) = get("dt") {
        dt = parse_f64("dt", v, l)?;
    }
    if let Some((v, l)) = get("t_end") {
        t_end = parse_f64("t_end", v, l)?;
    }

    let mut solver = SolverConfig::new(alpha, beta, grid_n, grid_length, dt, t_end);

    if let Some((v, l)) = get("dealias") {
        solver.dealias = match v {
            "pad" => DealiasPolicy::Pad,
            "two_thirds" => DealiasPolicy::TwoThirds,
            "none" => DealiasPolicy::None,
            _ => {
                return Err(Error::Config {
                    line: l,
                    msg: format!("key \"dealias\": expected pad|two_thirds|none, got \"{v}\""),
                })
            }
        };
    }
    let mut initial = InitialData::gaussian(0.1, 2.5);
    if let Some((v, l)) = get("initial_family") {
        initial.family = match v {
            "gaussian" => InitialFamily::Gaussian,
            "sech" => InitialFamily::Sech,
            _ => {
                return Err(Error::Config {
                    line: l,
                    msg: format!("key \"initial_family\": expected gaussian|sech, got \"{v}\""),
                })
            }
        };
    }
    if let Some((v, l)) = get("initial_amplitude") {
        initial.amplitude = parse_f64("initial_amplitude", v, l)?;
    }
    if let Some((v, l)) = get("initial_width") {
        initial.width = parse_f64("initial_width", v, l)?;
    }
    if let Some((v, l)) = get("initial_chirp") {
        initial.chirp = Some(parse_f64("initial_chirp", v, l)?);
    }
    solver.initial = initial;
    if let Some((v, l)) = get("snapshot_times") {
        solver.snapshot_times = parse_list("snapshot_times", v, l)?;
    }
    if let Some((v, l)) = get("phase_accumulation") {
        solver.phase_accumulation = parse_bool("phase_accumulation", v, l)?;
    }
    if let Some((v, l)) = get("cfl") {
        solver.cfl = parse_f64("cfl", v, l)?;
    }
    if let Some((v, l)) = get("boundary_tol") {
        solver.boundary_tol = parse_f64("boundary_tol", v, l)?;
    }
    if let Some((v, l)) = get("blowup_factor") {
        solver.blowup_factor = parse_f64("blowup_factor", v, l)?;
    }

    let mut cfg = ExperimentConfig {
        solver,
        gauge_checks: false,
        gauge_probe_dt: 0.1,
        scattering_times: Vec::new(),
        diagnostics_cadence: 0.0,
        output_dir: PathBuf::from("out"),
        seed: 0,
        format_version: CONFIG_FORMAT_VERSION,
        raw_text: text.to_string(),
        echo: kv
            .iter()
            .map(|(k, (v, _))| (k.clone(), v.clone()))
            .collect(),
    };
    if let Some((v, l)) = get("format_version") {
        let fv = parse_u64("format_version", v, l)? as u32;
        if fv != CONFIG_FORMAT_VERSION {
            return Err(Error::Config {
                line: l,
                msg: format!(
                    "key \"format_version\": this build reads version {CONFIG_FORMAT_VERSION}, got {fv}"
                ),
            });
        }
        cfg.format_version = fv;
    }
    if let Some((v, l)) = get("gauge_checks") {
        cfg.gauge_checks = parse_bool("gauge_checks", v, l)?;
    }
    if let Some((v, l)) = get("gauge_probe_dt") {
        cfg.gauge_probe_dt = parse_f64("gauge_probe_dt", v, l)?;
        if !(cfg.gauge_probe_dt > 0.0) {
            return Err(Error::Config {
                line: l,
                msg: "key \"gauge_probe_dt\": must be positive".into(),
            });
        }
    }
    if let Some((v, l)) = get("scattering_times") {
        cfg.scattering_times = parse_list("scattering_times", v, l)?;
    }
    if let Some((v, l)) = get("diagnostics_cadence") {
        cfg.diagnostics_cadence = parse_f64("diagnostics_cadence", v, l)?;
        if cfg.diagnostics_cadence < 0.0 {
            return Err(Error::Config {
                line: l,
                msg: "key \"diagnostics_cadence\": must be nonnegative".into(),
            });
        }
    }
    if let Some((v, _)) = get("output_dir") {
        cfg.output_dir = PathBuf::from(v);
    }
    if let Some((v, l)) = get("seed") {
        cfg.seed = parse_u64("seed", v, l)?;
    }
    Ok(cfg)
}

pub fn load_config(path: &std::path::Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}
