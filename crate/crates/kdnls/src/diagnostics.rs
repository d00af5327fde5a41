//! Norms, exact-identity residuals, and decay-rate monitors.
//!
//! Sobolev norms use the spectral definition with the Japanese bracket
//! `(1+xi^2)^{1/2}`; the weighted Fourier-sup diagnostics use the
//! `(1+|xi|)^{1/2}` bracket. Each emitted diagnostic is tagged with its
//! convention in the CSV header.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scattering::RateFit;
use crate::solver::Trajectory;
use crate::spectral::{
    abs2_dealiased, d_dx, forward, free_propagate, from_profile, half_bracket, hilbert, inverse,
    jbracket, to_profile, DealiasPolicy, Field, Spectrum,
};

/// Spectral Sobolev norm `( sum (1+xi^2)^s |u_hat|^2 dxi )^{1/2}`.
pub fn h_sobolev(u: &Field, s: f64) -> f64 {
    let sp = forward(u);
    (sp.coeffs
        .iter()
        .zip(sp.grid.freqs())
        .map(|(c, &xi)| jbracket(xi).powf(2.0 * s) * c.norm_sqr())
        .sum::<f64>()
        * sp.grid.dxi())
    .sqrt()
}

/// `||u||_inf + ||u_x||_inf`.
pub fn w1inf(u: &Field) -> f64 {
    u.sup_norm() + d_dx(u).sup_norm()
}

/// Multiplication by the box coordinate `x` (sawtooth on the torus; callers
/// keep mass away from the boundary).
pub fn x_mul(u: &Field) -> Field {
    let values = u
        .grid
        .nodes()
        .zip(&u.values)
        .map(|(x, &v)| v * x)
        .collect();
    Field {
        grid: u.grid.clone(),
        values,
    }
}

/// `||x g||_{H^1}` computed directly from the samples of `g`.
pub fn xf_h1_direct(g: &Field) -> f64 {
    let xg = x_mul(g);
    (xg.l2_norm().powi(2) + d_dx(&xg).l2_norm().powi(2)).sqrt()
}

/// `J(t) u = x u + 2 i t u_x` (direct route).
pub fn j_apply(u: &Field, t: f64) -> Field {
    let xu = x_mul(u);
    let ux = d_dx(u);
    Field {
        grid: u.grid.clone(),
        values: xu
            .values
            .iter()
            .zip(&ux.values)
            .map(|(&a, &b)| a + Complex64::new(0.0, 2.0 * t) * b)
            .collect(),
    }
}

/// `J(t) u` via the conjugated route `e^{it dxx} (x e^{-it dxx} u)`.
pub fn j_apply_conjugated(u: &Field, t: f64) -> Field {
    let f = inverse(&to_profile(u, t));
    let xf = x_mul(&f);
    inverse(&free_propagate(&forward(&xf), t))
}

/// `||x f||_{H^1}` with `f` the profile of `u`, computed through `J`:
/// `||J u||_{L2}` and `||d_x J u||_{L2}`.
pub fn xf_h1_via_j(u: &Field, t: f64) -> f64 {
    let ju = j_apply(u, t);
    (ju.l2_norm().powi(2) + d_dx(&ju).l2_norm().powi(2)).sqrt()
}

/// Sup-norm residual of the null-form identity
/// `d_x(u conj(v)) = (1/2it)( conj(v) e^{it dxx} x f - u conj(e^{it dxx} x g) )`
/// with `f`, `g` the profiles of `u`, `v`.
pub fn null_identity_residual(u: &Field, v: &Field, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::InvalidArgument("null identity needs t > 0".into()));
    }
    u.check_same_grid(v)?;
    let lhs = d_dx(&u.pointwise_mul(&v.conj())?);
    let f = inverse(&to_profile(u, t));
    let g = inverse(&to_profile(v, t));
    let exf = inverse(&free_propagate(&forward(&x_mul(&f)), t));
    let exg = inverse(&free_propagate(&forward(&x_mul(&g)), t));
    let pref = Complex64::new(0.0, 2.0 * t).inv();
    let rhs = Field {
        grid: u.grid.clone(),
        values: (0..u.n())
            .map(|j| pref * (v.values[j].conj() * exf.values[j] - u.values[j] * exg.values[j].conj()))
            .collect(),
    };
    Ok(lhs.sub(&rhs)?.sup_norm())
}

/// `beta || D_x^{1/2}(|u|^2) ||_{L2}^2`, the exact time derivative of
/// `||u||_{L2}^2`.
pub fn dissipation_rate(u: &Field, beta: f64, policy: DealiasPolicy) -> Result<f64> {
    let w = abs2_dealiased(u, policy)?;
    let w_hat = forward(&w);
    let nyq = w_hat.grid.nyquist_index();
    Ok(w_hat
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if j == nyq {
                0.0
            } else {
                w_hat.grid.freq(j).abs() * c.norm_sqr()
            }
        })
        .sum::<f64>()
        * w_hat.grid.dxi()
        * beta)
}

/// Relative residual of `d/dt ||u||^2 = beta ||D^{1/2}(|u|^2)||^2` at a
/// snapshot time `t`, with the time derivative taken by centered difference
/// from the bracketing snapshots.
pub fn dissipation_residual(traj: &Trajectory, t: f64, dt_probe: f64) -> Result<f64> {
    let tol = 1e-9 * (1.0 + t);
    let before = traj.snapshot_at(t - dt_probe, tol)?;
    let center = traj.snapshot_at(t, tol)?;
    let after = traj.snapshot_at(t + dt_probe, tol)?;
    let h = 0.5 * (after.t - before.t);
    let m_after = after.f_hat.l2_norm().powi(2);
    let m_before = before.f_hat.l2_norm().powi(2);
    let ddt = (m_after - m_before) / (2.0 * h);
    let rate = dissipation_rate(&center.field(), traj.beta, traj.dealias)?;
    Ok((ddt - rate).abs() / f64::max(rate.abs(), 1e-30))
}

/// Least-squares slope of `log(value)` against `log(t)` over the window.
pub fn decay_fit(series: &[(f64, f64)], window: (f64, f64)) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|&&(t, v)| t >= window.0 && t <= window.1 && t > 0.0 && v > 0.0)
        .map(|&(t, v)| (t.ln(), v.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "degenerate fit window [{}, {}]: {} usable points",
            window.0,
            window.1,
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::InvalidArgument("degenerate fit abscissae".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let ss_res: f64 = pts
        .iter()
        .map(|&(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let stderr = if pts.len() > 2 {
        (ss_res / (n - 2.0) / (sxx - sx * sx / n)).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(RateFit {
        exponent: slope,
        stderr,
        window,
    })
}

/// Per-snapshot norms and residuals; one CSV row each.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub l2: f64,
    pub h1: f64,
    pub h2: f64,
    pub w1inf: f64,
    pub xf_h1: f64,
    pub hilbert_sup: f64,
    pub weighted_fourier_sup: f64,
    pub null_residual: f64,
    pub dissipation_rate: f64,
    pub boundary_mass: f64,
    pub guard_band_fraction: f64,
}

pub fn record_snapshot(
    t: f64,
    f_hat: &Spectrum,
    beta: f64,
    policy: DealiasPolicy,
) -> Result<DiagnosticsRecord> {
    let u = from_profile(f_hat, t);
    let w = abs2_dealiased(&u, policy)?;
    let hw = hilbert(&w);
    let weighted_fourier_sup = f_hat
        .coeffs
        .iter()
        .zip(f_hat.grid.freqs())
        .map(|(c, &xi)| half_bracket(xi) * c.norm())
        .fold(0.0, f64::max);
    let null_residual = if t > 0.0 {
        null_identity_residual(&u, &u, t)?
    } else {
        0.0
    };
    Ok(DiagnosticsRecord {
        t,
        l2: u.l2_norm(),
        h1: h_sobolev(&u, 1.0),
        h2: h_sobolev(&u, 2.0),
        w1inf: w1inf(&u),
        xf_h1: xf_h1_via_j(&u, t),
        hilbert_sup: hw.sup_norm(),
        weighted_fourier_sup,
        null_residual,
        dissipation_rate: dissipation_rate(&u, beta, policy)?,
        boundary_mass: u.boundary_mass_fraction(0.1),
        guard_band_fraction: crate::spectral::guard_band_fraction(&u),
    })
}

/// `||H(|u|^2)||_inf` per snapshot.
pub fn hilbert_sup_series(traj: &Trajectory) -> Result<Vec<(f64, f64)>> {
    traj.snapshots
        .iter()
        .map(|s| {
            let u = s.field();
            let w = abs2_dealiased(&u, traj.dealias)?;
            Ok((s.t, hilbert(&w).sup_norm()))
        })
        .collect()
}

/// A priori norm report: the weighted sups of eq-(3.1) style quantities plus
/// fitted growth exponents of the two components.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AprioriReport {
    pub delta: f64,
    /// `sup_t <t>^{-delta} ||u||_{H^2}`.
    pub weighted_h2_sup: f64,
    /// `sup_t <t>^{-2 delta} ||x f||_{H^1}`.
    pub weighted_xf_sup: f64,
    pub h2_growth: Option<RateFit>,
    pub xf_growth: Option<RateFit>,
    pub h2_series: Vec<(f64, f64)>,
    pub xf_series: Vec<(f64, f64)>,
}

pub fn apriori_report(traj: &Trajectory, delta: f64, fit_window: (f64, f64)) -> Result<AprioriReport> {
    let mut h2_series = Vec::new();
    let mut xf_series = Vec::new();
    for s in &traj.snapshots {
        let u = s.field();
        h2_series.push((s.t, h_sobolev(&u, 2.0)));
        xf_series.push((s.t, xf_h1_via_j(&u, s.t)));
    }
    let bracket = |t: f64| (1.0 + t * t).sqrt();
    let weighted_h2_sup = h2_series
        .iter()
        .map(|&(t, v)| bracket(t).powf(-delta) * v)
        .fold(0.0, f64::max);
    let weighted_xf_sup = xf_series
        .iter()
        .map(|&(t, v)| bracket(t).powf(-2.0 * delta) * v)
        .fold(0.0, f64::max);
    let h2_growth = decay_fit(&h2_series, fit_window).ok();
    let xf_growth = decay_fit(&xf_series, fit_window).ok();
    Ok(AprioriReport {
        delta,
        weighted_h2_sup,
        weighted_xf_sup,
        h2_growth,
        xf_growth,
        h2_series,
        xf_series,
    })
}
