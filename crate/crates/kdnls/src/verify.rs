//! Canned verification suites. Each check measures a quantity with an
//! independent oracle (closed form, Richardson extrapolation, or an exact
//! identity) and compares it against a pinned tolerance. The same checks back
//! the `kdnls verify` verb and the acceptance test target.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::{
    decay_fit, dissipation_residual, j_apply, j_apply_conjugated,
    null_identity_residual, w1inf,
};
use crate::error::{Error, Result};
use crate::gauge::gauged_residual;
use crate::scattering::{analyze_trajectory, band_envelope, extract_profile, mass_limit};
use crate::solver::{self, InitialData, SolverConfig, SolverState, Trajectory};
use crate::spectral::{
    antiderivative_left, antiderivative_psi, d_abs, d_dx, forward,
    free_propagate, from_profile, hilbert, inverse, project, q_pm, to_profile, dyadic_levels,
    Field, Grid, Projection, PsiBump, Sign, Spectrum,
};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

fn check(name: &str, passed: bool, details: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        details,
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

// ---------------------------------------------------------------------------
// Reference runs, shared across checks.

/// Canonical long-run parameters. The box is large enough that dispersive
/// spreading up to t_end stays clear of the 10% boundary band, and the
/// coupling constants are large enough that phase corrections and mass drift
/// are measurable above solver error at the measured data size.
pub const CANON_ALPHA: f64 = 400.0;
pub const CANON_BETA: f64 = -250.0;
pub const CANON_EPS: f64 = 0.1;
pub const CANON_N: usize = 8192;
pub const CANON_L: f64 = 4000.0;
pub const CANON_DT: f64 = 0.1;
pub const CANON_T_END: f64 = 200.0;
pub const CANON_WIDTH: f64 = 2.5;

/// Scattering checkpoints on the canonical run.
pub const CHECKPOINTS: [f64; 4] = [20.0, 50.0, 100.0, 200.0];
/// Probe offsets for centered-difference convergence studies, around t = 50.
pub const DISS_PROBES: [f64; 3] = [0.1, 0.2, 0.4];
pub const GAUGE_PROBES: [f64; 3] = [0.25, 0.5, 1.0];

fn canonical_snapshot_times(t_end: f64) -> Vec<f64> {
    let mut times = vec![1.0];
    let mut t = 10.0;
    while t <= t_end + 1e-9 {
        times.push(t);
        t += 10.0;
    }
    if t_end >= 60.0 {
        for p in DISS_PROBES.iter().chain(GAUGE_PROBES.iter()) {
            times.push(50.0 - p);
            times.push(50.0 + p);
        }
    }
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    times
}

fn canonical_config(eps: f64, beta: f64, t_end: f64) -> SolverConfig {
    let mut cfg = SolverConfig::new(CANON_ALPHA, beta, CANON_N, CANON_L, CANON_DT, t_end);
    cfg.initial = InitialData::gaussian(eps, CANON_WIDTH);
    cfg.snapshot_times = canonical_snapshot_times(t_end);
    cfg
}

fn shared_run(key: &str, build: impl FnOnce() -> SolverConfig) -> Result<Arc<Trajectory>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Trajectory>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    if let Some(t) = map.get(key) {
        return Ok(t.clone());
    }
    let traj = Arc::new(solver::run(&build())?);
    map.insert(key.to_string(), traj.clone());
    Ok(traj)
}

pub fn canonical_run() -> Result<Arc<Trajectory>> {
    shared_run("canonical", || {
        canonical_config(CANON_EPS, CANON_BETA, CANON_T_END)
    })
}

fn mirror_run() -> Result<Arc<Trajectory>> {
    shared_run("mirror", || canonical_config(CANON_EPS, -CANON_BETA, CANON_T_END))
}

fn eps_run(eps: f64) -> Result<Arc<Trajectory>> {
    shared_run(&format!("eps-{eps}"), || {
        canonical_config(eps, CANON_BETA, CANON_T_END)
    })
}

fn beta_zero_run() -> Result<Arc<Trajectory>> {
    shared_run("beta-zero", || {
        let mut cfg = canonical_config(CANON_EPS, 0.0, 100.0);
        cfg.snapshot_times = vec![100.0];
        cfg
    })
}

// ---------------------------------------------------------------------------
// Deterministic test fields.

fn random_spectrum(grid: &Arc<Grid>, seed: u64, xi_cut: f64) -> Spectrum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nyq = grid.nyquist_index();
    let coeffs = grid
        .freqs()
        .iter()
        .enumerate()
        .map(|(j, &xi)| {
            if j != nyq && xi.abs() <= xi_cut {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Spectrum {
        grid: grid.clone(),
        coeffs,
    }
}

fn random_field(grid: &Arc<Grid>, seed: u64, xi_cut: f64) -> Field {
    inverse(&random_spectrum(grid, seed, xi_cut))
}

/// Random band-limited field localized under a Gaussian envelope, so that
/// identities involving the box coordinate hold away from the wrap-around.
fn localized_random_field(grid: &Arc<Grid>, seed: u64, xi_cut: f64, envelope: f64) -> Field {
    let base = random_field(grid, seed, xi_cut);
    let values = grid
        .nodes()
        .zip(&base.values)
        .map(|(x, &v)| v * (-x * x / (2.0 * envelope * envelope)).exp())
        .collect();
    Field {
        grid: grid.clone(),
        values,
    }
}

fn sup_diff(a: &Field, b: &Field) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Operator identity checks.

pub fn check_operator_identities() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let grid = Grid::new(256, 100.0)?;
    let u = random_field(&grid, 7, 6.0);

    let rt = sup_diff(&inverse(&forward(&u)), &u) / u.sup_norm();
    out.push(check(
        "transform round-trip",
        rt < 1e-12,
        format!("relative sup error {rt:.2e} (tol 1e-12)"),
    ));

    let phys = u.l2_norm();
    let spec = forward(&u).l2_norm();
    let pars = (phys - spec).abs() / phys;
    out.push(check(
        "discrete Parseval",
        pars < 1e-12,
        format!("relative defect {pars:.2e} (tol 1e-12)"),
    ));

    let xi1 = grid.freq(5);
    let harmonic = Field::from_fn(grid.clone(), |x| Complex64::new(0.0, xi1 * x).exp());
    let sh = forward(&harmonic);
    let peak = sh.coeffs[5].norm();
    let leak = sh
        .coeffs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != 5)
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    out.push(check(
        "pure harmonic occupies one bin",
        leak < 1e-12 * peak,
        format!("off-bin leakage {:.2e} of peak (tol 1e-12)", leak / peak),
    ));

    {
        let g = Grid::new(2048, 80.0)?;
        let gauss = Field::from_real_fn(g.clone(), |x| (-0.5 * x * x).exp());
        let s = forward(&gauss);
        let err = s
            .coeffs
            .iter()
            .zip(g.freqs())
            .map(|(c, &xi)| (c - Complex64::new((-0.5 * xi * xi).exp(), 0.0)).norm())
            .fold(0.0, f64::max);
        out.push(check(
            "Gaussian is self-dual",
            err < 1e-10,
            format!("max coefficient error {err:.2e} (tol 1e-10)"),
        ));
    }

    {
        // Zero the mean mode, so that H is invertible on the content.
        let mut s = forward(&u);
        s.coeffs[0] = Complex64::new(0.0, 0.0);
        let v = inverse(&s);
        let hh = hilbert(&hilbert(&v));
        let err = sup_diff(&hh, &v.scale(Complex64::new(-1.0, 0.0))) / v.sup_norm();
        out.push(check(
            "H o H = -Id off the mean and Nyquist modes",
            err < 1e-12,
            format!("relative sup error {err:.2e} (tol 1e-12)"),
        ));
    }

    {
        let a = d_abs(&u);
        let b = hilbert(&d_dx(&u));
        let err = sup_diff(&a, &b) / a.sup_norm().max(1e-300);
        out.push(check(
            "|d_x| = H d_x",
            err < 1e-13,
            format!("relative sup error {err:.2e} (tol 1e-13)"),
        ));
    }

    for sign in [Sign::Plus, Sign::Minus] {
        let q = q_pm(&u, sign);
        let hq = hilbert(&q);
        let expected = q.scale(Complex64::new(0.0, -sign.as_f64()));
        let err = sup_diff(&hq, &expected) / u.sup_norm();
        out.push(check(
            &format!("H Q{} = {}i Q{0}", if sign == Sign::Plus { "+" } else { "-" }, if sign == Sign::Plus { "-" } else { "+" }),
            err < 1e-13,
            format!("relative sup error {err:.2e} (tol 1e-13)"),
        ));
    }

    {
        let pp = project(&u, Projection::Half(Sign::Plus));
        let pm = project(&pp, Projection::Half(Sign::Minus));
        let err = pm.sup_norm() / u.sup_norm();
        out.push(check(
            "P+ P- annihilates",
            err < 1e-13,
            format!("relative sup {err:.2e} (tol 1e-13)"),
        ));
    }

    {
        let mut acc = project(&u, Projection::LowPass(1.0));
        for n in dyadic_levels(grid.max_freq()) {
            acc = acc.add(&project(&u, Projection::Band(n)))?;
        }
        let err = sup_diff(&acc, &u) / u.sup_norm();
        out.push(check(
            "dyadic partition of unity",
            err < 1e-12,
            format!("relative sup error {err:.2e} (tol 1e-12)"),
        ));
    }

    {
        // Coordinate commutator with H: exact value is (1/pi) * integral of f.
        // Periodization error scales like (width/L)^2, so the box is huge.
        let g = Grid::new(8192, 16000.0)?;
        let w = 10.0;
        let amp = 1.0 / (w * (2.0 * std::f64::consts::PI).sqrt());
        let f = Field::from_real_fn(g.clone(), |x| amp * (-0.5 * x * x / (w * w)).exp());
        let integral: f64 = f.values.iter().map(|v| v.re).sum::<f64>() * g.dx();
        let target = integral / std::f64::consts::PI;
        let hf = hilbert(&f);
        let xf = crate::diagnostics::x_mul(&f);
        let hxf = hilbert(&xf);
        let err = g
            .nodes()
            .enumerate()
            .filter(|&(_, x)| x.abs() <= w)
            .map(|(j, x)| (x * hf.values[j].re - hxf.values[j].re - target).abs())
            .fold(0.0, f64::max);
        out.push(check(
            "[x, H] f = (1/pi) integral of f",
            err < 1e-6,
            format!("pointwise error {err:.2e} near the support (tol 1e-6)"),
        ));
    }

    {
        // Classical conjugate pair for the box: the periodized Lorentzian is
        // the periodic Poisson kernel, whose Hilbert transform is the
        // conjugate Poisson kernel in closed form. (The free-space pair
        // 1/(1+x^2) -> x/(1+x^2) only holds up to an O(|x|/L^2)
        // periodization defect, so it is checked at truncation accuracy in
        // the unit tests instead.)
        let g = Grid::new(8192, 400.0)?;
        let a = 2.0 * std::f64::consts::PI / g.length();
        let scale = std::f64::consts::PI / g.length();
        let f = Field::from_real_fn(g.clone(), |x| {
            scale * a.sinh() / (a.cosh() - (a * x).cos())
        });
        let hf = hilbert(&f);
        let err = g
            .nodes()
            .enumerate()
            .map(|(j, x)| {
                let exact = scale * (a * x).sin() / (a.cosh() - (a * x).cos());
                (hf.values[j].re - exact).abs()
            })
            .fold(0.0, f64::max);
        out.push(check(
            "Hilbert pair of the periodic Poisson kernel",
            err < 1e-6,
            format!("max error {err:.2e} against the conjugate kernel (tol 1e-6)"),
        ));
    }

    {
        let g = Grid::new(4096, 120.0)?;
        let gauss = Field::from_real_fn(g.clone(), |x| (-0.5 * x * x).exp());
        let t = 1.0;
        let evolved = inverse(&free_propagate(&forward(&gauss), t));
        let denom = Complex64::new(1.0, 2.0 * t);
        let err = g
            .nodes()
            .enumerate()
            .map(|(j, x)| {
                let exact = (Complex64::new(-0.5 * x * x, 0.0) / denom).exp() / denom.sqrt();
                (evolved.values[j] - exact).norm()
            })
            .fold(0.0, f64::max);
        out.push(check(
            "free flow of the unit Gaussian matches the closed form",
            err < 1e-8,
            format!("max error {err:.2e} at t = 1 (tol 1e-8)"),
        ));
    }

    {
        let s = forward(&u);
        let moved = free_propagate(&s, 0.37);
        let uni = (moved.l2_norm() - s.l2_norm()).abs() / s.l2_norm();
        out.push(check(
            "free flow is unitary",
            uni < 1e-13,
            format!("relative norm defect {uni:.2e} (tol 1e-13)"),
        ));
        let back = to_profile(&from_profile(&s, 2.3), 2.3);
        let rt = back
            .coeffs
            .iter()
            .zip(&s.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        out.push(check(
            "profile map round-trips",
            rt < 1e-12 * u.sup_norm(),
            format!("max coefficient error {rt:.2e}"),
        ));
    }

    {
        let g = Grid::new(1024, 100.0)?;
        let a = 1.3;
        let f = Field::from_real_fn(g.clone(), |x| a * a * (-x * x).exp());
        let (cum, warn) = antiderivative_left(&f, 1e-8);
        let right = cum.values[g.n() - 1].re;
        let exact = std::f64::consts::PI.sqrt() * a * a;
        let err = (right - exact).abs();
        out.push(check(
            "left anti-derivative of a squared Gaussian",
            err < 1e-8 && !warn,
            format!("endpoint error {err:.2e} vs sqrt(pi) A^2 (tol 1e-8)"),
        ));
    }

    {
        // d~^{-1} d_x g = g - (psi-average of g), at second order in dx.
        let errs: Vec<f64> = [1024usize, 2048]
            .iter()
            .map(|&n| -> Result<f64> {
                let g = Grid::new(n, 100.0)?;
                let psi = PsiBump::default_for(&g);
                let smooth = Field::from_real_fn(g.clone(), |x| (-0.03 * x * x).exp() * (0.3 * x).sin() + 0.2);
                let dg = d_dx(&smooth);
                let back = antiderivative_psi(&dg, &psi)?;
                let psis = psi.samples(&g)?;
                let avg: f64 = smooth
                    .values
                    .iter()
                    .zip(&psis)
                    .map(|(v, p)| v.re * p)
                    .sum::<f64>()
                    * g.dx();
                let expected = smooth.map(|v| v - avg);
                Ok(sup_diff(&back, &expected))
            })
            .collect::<Result<_>>()?;
        let order = (errs[0] / errs[1]).log2();
        out.push(check(
            "psi anti-derivative inverts d_x at second order",
            errs[1] < 1e-4 && order > 1.5,
            format!(
                "errors {:.2e} -> {:.2e} under grid doubling (order {order:.2})",
                errs[0], errs[1]
            ),
        ));
    }

    Ok(out)
}

// ---------------------------------------------------------------------------
// Solver order.

pub fn check_solver_order() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let run_dt = |dt: f64| -> Result<SolverState> {
        let mut cfg = SolverConfig::new(4.0, -3.0, 1024, 450.0, dt, 2.0);
        cfg.initial = InitialData::gaussian(2.0, CANON_WIDTH);
        cfg.phase_accumulation = false;
        Ok(solver::run(&cfg)?.final_state)
    };
    let f1 = run_dt(0.2)?;
    let f2 = run_dt(0.1)?;
    let f3 = run_dt(0.05)?;
    let e1 = f1.f_hat.sub(&f2.f_hat)?.l2_norm();
    let e2 = f2.f_hat.sub(&f3.f_hat)?.l2_norm();
    let order = (e1 / e2).log2();
    out.push(check(
        "time stepper is fourth order",
        (3.7..=4.3).contains(&order),
        format!("Richardson order {order:.3} from errors {e1:.3e}, {e2:.3e} (accept 3.7..4.3)"),
    ));

    {
        // Zero coupling: the stepped profile must be constant to roundoff.
        let mut cfg = SolverConfig::new(0.0, 0.0, 256, 200.0, 0.1, 3.0);
        cfg.initial = InitialData::gaussian(0.5, CANON_WIDTH);
        cfg.phase_accumulation = false;
        cfg.snapshot_times = vec![0.0, 3.0];
        let traj = solver::run(&cfg)?;
        let first = &traj.snapshots[0].f_hat;
        let last = &traj.snapshots[traj.snapshots.len() - 1].f_hat;
        let drift = first.sub(last)?.l2_norm() / first.l2_norm();
        out.push(check(
            "free flow leaves the profile fixed",
            drift < 1e-13,
            format!("relative profile drift {drift:.2e} (tol 1e-13)"),
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Dissipation identity and the mass limit.

pub fn check_dissipation_identity() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let traj = canonical_run()?;
    let r_solver = dissipation_residual(&traj, 50.0, CANON_DT)?;
    out.push(check(
        "mass balance closes at the solver step",
        r_solver < 1e-4,
        format!("relative residual {r_solver:.2e} at probe dt = {CANON_DT} (tol 1e-4)"),
    ));
    let r: Vec<f64> = DISS_PROBES
        .iter()
        .map(|&p| dissipation_residual(&traj, 50.0, p))
        .collect::<Result<_>>()?;
    let order = (r[2] / r[1]).log2();
    out.push(check(
        "mass-balance residual is second order in the probe",
        (1.5..=2.5).contains(&order),
        format!(
            "residuals {:.2e}/{:.2e}/{:.2e} at probes {:?} (order {order:.2}, accept 1.5..2.5)",
            r[0], r[1], r[2], DISS_PROBES
        ),
    ));

    let traj0 = beta_zero_run()?;
    let m0 = traj0.steps[0].l2;
    let drift = traj0
        .steps
        .iter()
        .map(|s| (s.l2 - m0).abs())
        .fold(0.0, f64::max)
        / m0;
    out.push(check(
        "mass is conserved without the nonlocal coupling",
        drift < 1e-8,
        format!("max relative drift {drift:.2e} over t <= 100 (tol 1e-8)"),
    ));
    Ok(out)
}

pub fn check_mass_limit() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let down = canonical_run()?;
    let up = mirror_run()?;

    let ml_down = mass_limit(&down.mass_series(), down.beta, 1e-10)?;
    let ml_up = mass_limit(&up.mass_series(), up.beta, 1e-10)?;
    out.push(check(
        "mass is monotone with the sign of the coupling",
        ml_down.monotone_matches_beta && ml_up.monotone_matches_beta,
        format!(
            "negative coupling non-increasing: {}; positive coupling non-decreasing: {}",
            ml_down.monotone_matches_beta, ml_up.monotone_matches_beta
        ),
    ));
    out.push(check(
        "mass limit sits on the correct side",
        ml_down.d_infty < down.initial_l2 && ml_up.d_infty > up.initial_l2,
        format!(
            "limits {:.8e} (initial {:.8e}) and {:.8e} (initial {:.8e})",
            ml_down.d_infty, down.initial_l2, ml_up.d_infty, up.initial_l2
        ),
    ));
    let rate = ml_down
        .rate
        .as_ref()
        .map(|r| r.exponent)
        .unwrap_or(f64::NAN);
    out.push(check(
        "approach to the mass limit decays fast",
        rate <= -0.8,
        format!("fitted approach exponent {rate:.3} (accept <= -0.8)"),
    ));

    let mut defects = Vec::new();
    for eps in [0.05, CANON_EPS, 0.2] {
        let traj = if (eps - CANON_EPS).abs() < 1e-12 {
            canonical_run()?
        } else {
            eps_run(eps)?
        };
        let ml = mass_limit(&traj.mass_series(), traj.beta, 1e-10)?;
        defects.push((traj.measured_eps, (ml.d_infty - traj.initial_l2).abs() / traj.initial_l2));
    }
    let r1 = defects[1].1 / defects[0].1;
    let r2 = defects[2].1 / defects[1].1;
    let ok = (2.5..=6.0).contains(&r1) && (2.5..=6.0).contains(&r2);
    out.push(check(
        "mass defect scales quadratically in the data size",
        ok,
        format!(
            "relative defects {:.3e}/{:.3e}/{:.3e} at sizes 0.05/0.1/0.2; ratios {r1:.2}, {r2:.2} (accept 2.5..6)",
            defects[0].1, defects[1].1, defects[2].1
        ),
    ));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Long-time behavior.

pub fn check_dispersive_decay() -> Result<Vec<Check>> {
    let traj = canonical_run()?;
    let series: Vec<(f64, f64)> = traj
        .snapshots
        .iter()
        .filter(|s| s.t >= 10.0)
        .map(|s| (s.t, w1inf(&s.field())))
        .collect();
    let fit = decay_fit(&series, (10.0, CANON_T_END))?;
    let ok = (fit.exponent + 0.5).abs() <= 0.05;
    Ok(vec![check(
        "amplitude decays at the free rate",
        ok,
        format!(
            "fitted decay exponent {:.4} +- {:.4} over t in [10, 200] (accept -0.5 +- 0.05)",
            fit.exponent, fit.stderr
        ),
    )])
}

pub fn check_modified_scattering() -> Result<Vec<Check>> {
    let traj = canonical_run()?;
    let res = analyze_trajectory(&traj, &CHECKPOINTS, 0.05)?;
    let mut out = Vec::new();
    let rate = res
        .corrected_difference_rate
        .as_ref()
        .map(|r| r.exponent)
        .unwrap_or(f64::NAN);
    out.push(check(
        "phase-corrected profiles converge",
        rate < 0.0,
        format!("corrected-difference decay exponent {rate:.3} (accept < 0)"),
    ));
    let factor = res.correction_necessity_factor.unwrap_or(f64::NAN);
    out.push(check(
        "the logarithmic phase correction is necessary",
        factor >= 3.0,
        format!("uncorrected/corrected endpoint-difference ratio {factor:.2} (accept >= 3)"),
    ));
    Ok(out)
}

pub fn check_resonant_remainder() -> Result<Vec<Check>> {
    let traj = canonical_run()?;
    let res = analyze_trajectory(&traj, &CHECKPOINTS, 0.05)?;
    let rate = res
        .remainder_rate
        .as_ref()
        .map(|r| r.exponent)
        .unwrap_or(f64::NAN);
    Ok(vec![check(
        "non-resonant remainder is integrable in time",
        rate <= -1.05,
        format!("central-band weighted remainder decay exponent {rate:.3} (accept <= -1.05)"),
    )])
}

pub fn check_asymptotic_profile() -> Result<Vec<Check>> {
    let traj = canonical_run()?;
    let t_ref = CANON_T_END;
    let snap_ref = traj.snapshot_at(t_ref, 1e-6)?;
    let b = snap_ref
        .phase_b
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("no accumulated phase at the final time".into()))?;
    let (w, phi) = extract_profile(&snap_ref.f_hat, b, t_ref, traj.alpha, traj.beta, 0.05)?;
    let mut mismatches = Vec::new();
    let mut rel_final = f64::NAN;
    for &t in &[50.0, 100.0, 200.0] {
        let snap = traj.snapshot_at(t, 1e-6)?;
        let u_sim = snap.field();
        let (u_pred, _excluded) = crate::scattering::asymptotic_profile(
            t,
            &w,
            &phi,
            &traj.grid,
            &traj.grid,
            traj.alpha,
            traj.beta,
        )?;
        let diff = sup_diff(&u_sim, &u_pred);
        mismatches.push((t, t.sqrt() * diff));
        if (t - t_ref).abs() < 1e-9 {
            rel_final = diff / u_sim.sup_norm();
        }
    }
    let monotone = mismatches.windows(2).all(|w| w[1].1 < w[0].1);
    let mut out = Vec::new();
    out.push(check(
        "scaled profile mismatch shrinks along the checkpoints",
        monotone,
        format!(
            "sqrt(t) * sup mismatch at t = 50/100/200: {:.3e}/{:.3e}/{:.3e}",
            mismatches[0].1, mismatches[1].1, mismatches[2].1
        ),
    ));
    out.push(check(
        "asymptotic formula matches the field at the final time",
        rel_final < 0.1,
        format!("relative sup mismatch {rel_final:.3e} at t = 200 (tol 0.1)"),
    ));
    Ok(out)
}

pub fn check_weighted_fourier() -> Result<Vec<Check>> {
    let traj = canonical_run()?;
    let mut out = Vec::new();
    let initial = traj.steps[0].weighted_sup;
    let max = traj
        .steps
        .iter()
        .map(|s| s.weighted_sup)
        .fold(0.0, f64::max);
    out.push(check(
        "weighted spectrum sup stays bounded",
        max <= 2.0 * initial,
        format!("max over time {max:.4e} vs initial {initial:.4e} (accept ratio <= 2)"),
    ));

    let last = traj.snapshots.last().unwrap();
    let env = band_envelope(&last.f_hat);
    let peak = env.iter().map(|&(_, s)| s).fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = env
        .iter()
        .filter(|&&(_, s)| s > 1e-13 * peak && s > 0.0)
        .map(|&(n, s)| (n, s))
        .collect();
    let fit = decay_fit(&pts, (0.0, f64::INFINITY))?;
    out.push(check(
        "dyadic band envelope decays in frequency",
        fit.exponent < 0.0,
        format!(
            "envelope slope {:.2} over {} usable bands (accept < 0)",
            fit.exponent,
            pts.len()
        ),
    ));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Exact-identity checks (coordinate weight, gauge, a priori trends).

pub fn check_transform_identities() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let grid = Grid::new(2048, 400.0)?;
    let u = localized_random_field(&grid, 11, 1.0, 12.0);
    let v = localized_random_field(&grid, 12, 1.0, 12.0);
    let t = 2.0;

    let direct = j_apply(&u, t);
    let conj_route = j_apply_conjugated(&u, t);
    let err = sup_diff(&direct, &conj_route) / direct.sup_norm();
    out.push(check(
        "coordinate weight commutes through the free flow",
        err < 1e-8,
        format!("two routes differ by {err:.2e} relative (tol 1e-8)"),
    ));

    let lhs_scale = d_dx(&u.pointwise_mul(&v.conj())?).sup_norm();
    let resid = null_identity_residual(&u, &v, t)? / lhs_scale;
    out.push(check(
        "bilinear derivative identity",
        resid < 1e-8,
        format!("relative sup residual {resid:.2e} (tol 1e-8)"),
    ));
    Ok(out)
}

pub fn check_gauge_residual() -> Result<Vec<Check>> {
    let traj = canonical_run()?;
    let psi = PsiBump::default_for(&traj.grid);
    let mut out = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let mut r = Vec::new();
        let mut v_h1 = 0.0;
        let mut rhs_l2 = 0.0;
        for &p in &GAUGE_PROBES {
            let (resid, h1, rhs) = gauged_residual(&traj, 50.0, p, sign, &psi)?;
            r.push(resid);
            v_h1 = h1;
            rhs_l2 = rhs;
        }
        let order = (r[2] / r[1]).log2();
        let tag = if sign == Sign::Plus { "+" } else { "-" };
        out.push(check(
            &format!("gauged equation residual v{tag} converges in the probe"),
            (1.5..=2.5).contains(&order),
            format!(
                "residuals {:.3e}/{:.3e}/{:.3e} at probes {:?} (order {order:.2}, accept 1.5..2.5)",
                r[0], r[1], r[2], GAUGE_PROBES
            ),
        ));
        out.push(check(
            &format!("gauged equation residual v{tag} is small"),
            r[0] < 1e-3 * v_h1,
            format!(
                "converged residual {:.3e} vs 1e-3 * ||v||_H1 = {:.3e} (rhs magnitude {:.3e})",
                r[0],
                1e-3 * v_h1,
                rhs_l2
            ),
        ));
    }
    Ok(out)
}

pub fn check_apriori_trends() -> Result<Vec<Check>> {
    let traj = canonical_run()?;
    let report = crate::diagnostics::apriori_report(&traj, 0.05, (10.0, CANON_T_END))?;
    let h2 = report
        .h2_growth
        .as_ref()
        .map(|r| r.exponent)
        .unwrap_or(f64::NAN);
    let xf = report
        .xf_growth
        .as_ref()
        .map(|r| r.exponent)
        .unwrap_or(f64::NAN);
    Ok(vec![
        check(
            "energy norm grows slowly",
            h2 <= 0.05,
            format!("fitted H2 growth exponent {h2:.4} (accept <= 0.05)"),
        ),
        check(
            "weighted profile norm grows slowly",
            xf <= 0.10,
            format!("fitted weighted-norm growth exponent {xf:.4} (accept <= 0.10)"),
        ),
    ])
}

// ---------------------------------------------------------------------------
// Suites.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Operators,
    SolverOrder,
    Identities,
    Scattering,
    Dissipation,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "operators" => Some(Suite::Operators),
            "solver-order" => Some(Suite::SolverOrder),
            "identities" => Some(Suite::Identities),
            "scattering" => Some(Suite::Scattering),
            "dissipation" => Some(Suite::Dissipation),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Operators => "operators",
            Suite::SolverOrder => "solver-order",
            Suite::Identities => "identities",
            Suite::Scattering => "scattering",
            Suite::Dissipation => "dissipation",
        }
    }

    pub const ALL: [Suite; 5] = [
        Suite::Operators,
        Suite::SolverOrder,
        Suite::Identities,
        Suite::Scattering,
        Suite::Dissipation,
    ];
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Operators => check_operator_identities()?,
        Suite::SolverOrder => check_solver_order()?,
        Suite::Identities => {
            let mut v = check_transform_identities()?;
            v.extend(check_gauge_residual()?);
            v.extend(check_apriori_trends()?);
            v
        }
        Suite::Scattering => {
            let mut v = check_dispersive_decay()?;
            v.extend(check_modified_scattering()?);
            v.extend(check_resonant_remainder()?);
            v.extend(check_asymptotic_profile()?);
            v.extend(check_weighted_fourier()?);
            v
        }
        Suite::Dissipation => {
            let mut v = check_dissipation_identity()?;
            v.extend(check_mass_limit()?);
            v
        }
    };
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        checks,
    })
}
