//! Frequency-localized gauge machinery: the multipliers `P+-_{alpha,beta}`,
//! the gauge phases `rho+-`, the transformed unknowns `v+- = e^{rho+-} Q+- u`,
//! the remainder fields `R5+-` and `G+-`, and a residual checker for the
//! evolution equation satisfied by `v+-`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solver::Trajectory;
use crate::spectral::{
    antiderivative_left, antiderivative_psi, d_dx, from_profile, hilbert, product, q_pm, to_profile,
    DealiasPolicy, Field, PsiBump, Sign,
};
use crate::spectral::antideriv::LEFT_DECAY_TOL;

#[derive(Debug, Clone)]
pub struct GaugeContext {
    pub alpha: f64,
    pub beta: f64,
    pub psi: PsiBump,
    pub policy: DealiasPolicy,
}

/// All fields produced by the gauge transformation of one `u`.
#[derive(Debug, Clone)]
pub struct GaugeFields {
    pub rho_plus: Field,
    pub rho_minus: Field,
    pub v_plus: Field,
    pub v_minus: Field,
    /// Left-boundary decay warning from the anti-derivative.
    pub boundary_warning: bool,
}

impl GaugeFields {
    pub fn rho(&self, sign: Sign) -> &Field {
        match sign {
            Sign::Plus => &self.rho_plus,
            Sign::Minus => &self.rho_minus,
        }
    }

    pub fn v(&self, sign: Sign) -> &Field {
        match sign {
            Sign::Plus => &self.v_plus,
            Sign::Minus => &self.v_minus,
        }
    }

    /// `rho0+- = Re rho+-`, the modulus part of the gauge weight.
    pub fn rho0(&self, sign: Sign) -> Field {
        self.rho(sign).map(|v| Complex64::new(v.re, 0.0))
    }
}

/// `P+-_{alpha,beta}(w) = (-i alpha -+ beta/2) w - i (beta/2) H(w)` for real `w`.
pub fn p_ab(w: &Field, sign: Sign, alpha: f64, beta: f64) -> Field {
    let c = Complex64::new(-sign.as_f64() * 0.5 * beta, -alpha);
    let hw = hilbert(w);
    Field {
        grid: w.grid.clone(),
        values: w
            .values
            .iter()
            .zip(&hw.values)
            .map(|(&wv, &hv)| c * wv + Complex64::new(0.0, -0.5 * beta) * hv)
            .collect(),
    }
}

/// Gauge phases
/// `rho+-[u] = (-i alpha -+ beta/2) dx^{-1}[|u|^2] - i (beta/2) dx~^{-1}[H(|u|^2)]`.
/// Returns `(rho_plus, rho_minus, boundary_warning)`.
pub fn rho(u: &Field, ctx: &GaugeContext) -> Result<(Field, Field, bool)> {
    let w = crate::spectral::abs2_dealiased(u, ctx.policy)?;
    let (ad, warn) = antiderivative_left(&w, LEFT_DECAY_TOL);
    let tilde = antiderivative_psi(&hilbert(&w), &ctx.psi)?;
    let mk = |sign: Sign| -> Field {
        let c = Complex64::new(-sign.as_f64() * 0.5 * ctx.beta, -ctx.alpha);
        Field {
            grid: u.grid.clone(),
            values: ad
                .values
                .iter()
                .zip(&tilde.values)
                .map(|(&a, &b)| c * a + Complex64::new(0.0, -0.5 * ctx.beta) * b)
                .collect(),
        }
    };
    Ok((mk(Sign::Plus), mk(Sign::Minus), warn))
}

/// `v+- = e^{rho+-[u]} Q+- u`.
pub fn gauge_transform(u: &Field, ctx: &GaugeContext) -> Result<GaugeFields> {
    let (rho_plus, rho_minus, boundary_warning) = rho(u, ctx)?;
    let mk_v = |r: &Field, sign: Sign| -> Field {
        let qu = q_pm(u, sign);
        Field {
            grid: u.grid.clone(),
            values: r
                .values
                .iter()
                .zip(&qu.values)
                .map(|(&rv, &qv)| rv.exp() * qv)
                .collect(),
        }
    };
    let v_plus = mk_v(&rho_plus, Sign::Plus);
    let v_minus = mk_v(&rho_minus, Sign::Minus);
    Ok(GaugeFields {
        rho_plus,
        rho_minus,
        v_plus,
        v_minus,
        boundary_warning,
    })
}

fn mul(a: &Field, b: &Field, policy: DealiasPolicy) -> Result<Field> {
    product(a, b, policy)
}

/// The remainder field
/// `R5+- = alpha ( Q+-[u^2 d_x conj(u)] - 2 u d_x conj(u) Q+- u )
///  + beta ( Q+-[H(u d_x conj(u)) u] - (Q+- H u)(d_x conj(u)) u - H(u d_x conj(u)) Q+- u )
///  + beta ( Q+-[u H(conj(u) d_x u)] - |u|^2 Q+- H d_x u )
///  + [Q+-, 2 alpha |u|^2 + beta H(|u|^2)] d_x u`,
/// evaluated term by term with dealiased products; the commutator is the
/// direct difference of the two orderings.
pub fn r5(u: &Field, sign: Sign, ctx: &GaugeContext) -> Result<Field> {
    let policy = ctx.policy;
    let alpha = Complex64::new(ctx.alpha, 0.0);
    let beta = Complex64::new(ctx.beta, 0.0);
    let ux = d_dx(u);
    let ubar_ux = mul(&u.conj(), &ux, policy)?; // conj(u) d_x u
    let u_uxbar = mul(u, &d_dx(&u.conj()), policy)?; // u d_x conj(u)
    let w = crate::spectral::abs2_dealiased(u, policy)?;
    let qu = q_pm(u, sign);

    // alpha block
    let t1 = q_pm(&mul(&mul(u, u, policy)?, &d_dx(&u.conj()), policy)?, sign);
    let t2 = mul(&u_uxbar, &qu, policy)?.scale(Complex64::new(2.0, 0.0));
    let block_a = t1.sub(&t2)?.scale(alpha);

    // first beta block
    let h_u_uxbar = hilbert(&u_uxbar);
    let b1 = q_pm(&mul(&h_u_uxbar, u, policy)?, sign);
    let b2 = mul(&mul(&q_pm(&hilbert(u), sign), &d_dx(&u.conj()), policy)?, u, policy)?;
    let b3 = mul(&h_u_uxbar, &qu, policy)?;
    let block_b = b1.sub(&b2)?.sub(&b3)?.scale(beta);

    // second beta block
    let c1 = q_pm(&mul(u, &hilbert(&ubar_ux), policy)?, sign);
    let c2 = mul(&w, &q_pm(&hilbert(&ux), sign), policy)?;
    let block_c = c1.sub(&c2)?.scale(beta);

    // commutator block [Q+-, g] d_x u with g = 2 alpha |u|^2 + beta H(|u|^2)
    let g = w
        .scale(Complex64::new(2.0 * ctx.alpha, 0.0))
        .add(&hilbert(&w).scale(beta))?;
    let comm = q_pm(&mul(&g, &ux, policy)?, sign).sub(&mul(&g, &q_pm(&ux, sign), policy)?)?;

    block_a.add(&block_b)?.add(&block_c)?.add(&comm)
}

/// `G+-[u] = P+-_{ab}[(3/2) alpha |u|^4 + 2 beta H(|u|^2)|u|^2]
///  - i [P+-_{ab}(|u|^2)]^2
///  + beta (i alpha +- beta/2) dx^{-1}[H(|u|^2) d_x(|u|^2)]`.
pub fn g_pm(u: &Field, sign: Sign, ctx: &GaugeContext) -> Result<(Field, bool)> {
    let policy = ctx.policy;
    let w = crate::spectral::abs2_dealiased(u, policy)?;
    let w2 = mul(&w, &w, policy)?;
    let hw = hilbert(&w);
    let quartic = w2
        .scale(Complex64::new(1.5 * ctx.alpha, 0.0))
        .add(&mul(&hw, &w, policy)?.scale(Complex64::new(2.0 * ctx.beta, 0.0)))?;
    let term1 = p_ab(&quartic, sign, ctx.alpha, ctx.beta);

    let pw = p_ab(&w, sign, ctx.alpha, ctx.beta);
    let term2 = mul(&pw, &pw, policy)?.scale(Complex64::new(0.0, -1.0));

    let integrand = mul(&hw, &d_dx(&w), policy)?;
    let (ad, warn) = antiderivative_left(&integrand, LEFT_DECAY_TOL);
    let c = Complex64::new(ctx.beta, 0.0) * Complex64::new(sign.as_f64() * 0.5 * ctx.beta, ctx.alpha);
    let term3 = ad.scale(c);

    Ok((term1.add(&term2)?.add(&term3)?, warn))
}

/// Scalar per-time term of the gauged equation:
/// `(beta/2) sum_z psi(z) H[ 2 Re(i conj(u) u_x) + (3/2) alpha |u|^4
///   + 2 beta H(|u|^2)|u|^2 ](z) dz` (returned without the leading `i`).
pub fn psi_average_term(u: &Field, ctx: &GaugeContext) -> Result<f64> {
    let policy = ctx.policy;
    let ux = d_dx(u);
    let re_part = Field {
        grid: u.grid.clone(),
        values: u
            .values
            .iter()
            .zip(&ux.values)
            .map(|(&uv, &dv)| {
                let z = Complex64::new(0.0, 1.0) * uv.conj() * dv;
                Complex64::new(2.0 * z.re, 0.0)
            })
            .collect(),
    };
    let w = crate::spectral::abs2_dealiased(u, policy)?;
    let w2 = mul(&w, &w, policy)?;
    let hw_w = mul(&hilbert(&w), &w, policy)?;
    let combo = re_part
        .add(&w2.scale(Complex64::new(1.5 * ctx.alpha, 0.0)))?
        .add(&hw_w.scale(Complex64::new(2.0 * ctx.beta, 0.0)))?;
    let h_combo = hilbert(&combo);
    let psi_samples = ctx.psi.samples(&u.grid)?;
    let dx = u.grid.dx();
    Ok(0.5
        * ctx.beta
        * h_combo
            .values
            .iter()
            .zip(&psi_samples)
            .map(|(&h, &p)| h.re * p)
            .sum::<f64>()
        * dx)
}

/// Nonlinear right-hand side of the gauged evolution equation
/// `(d_t - i d_x^2) v = e^{rho} R5 + G v
///  + i (beta^2/2) dx~^{-1} H[H(|u|^2) d_x(|u|^2)] v + i (psi-average) v`
/// (the free part `i d_x^2 v` is excluded; the residual checker removes it
/// exactly by differencing the free-evolution profile of `v`).
fn gauged_rhs_nonlinear(u: &Field, sign: Sign, ctx: &GaugeContext) -> Result<Field> {
    let gf = gauge_transform(u, ctx)?;
    let v = gf.v(sign);
    let rho_field = gf.rho(sign);

    let r5f = r5(u, sign, ctx)?;
    let gauged_r5 = Field {
        grid: u.grid.clone(),
        values: rho_field
            .values
            .iter()
            .zip(&r5f.values)
            .map(|(&r, &x)| r.exp() * x)
            .collect(),
    };

    let (g, _) = g_pm(u, sign, ctx)?;
    let gv = v.pointwise_mul(&g)?;

    let w = crate::spectral::abs2_dealiased(u, ctx.policy)?;
    let integrand = hilbert(&mul(&hilbert(&w), &d_dx(&w), ctx.policy)?);
    let tilde = antiderivative_psi(&integrand, &ctx.psi)?;
    let beta2v = tilde
        .pointwise_mul(v)?
        .scale(Complex64::new(0.0, 0.5 * ctx.beta * ctx.beta));

    let avg = psi_average_term(u, ctx)?;
    let avg_v = v.scale(Complex64::new(0.0, avg));

    gauged_r5.add(&gv)?.add(&beta2v)?.add(&avg_v)
}

/// L2 residual of the gauged equation at time `t`. The time derivative is a
/// centered difference of the free-evolution profile of `v` from snapshots at
/// `t -+ dt_probe`, so the stiff `i d_x^2 v` part cancels exactly and the
/// differencing error is set by the slow nonlinear timescale.
/// Returns `(residual, ||v||_{H^1}, ||rhs||_{L^2})`; the last entry is the
/// size of the nonlinear right-hand side the derivative is checked against.
pub fn gauged_residual(
    traj: &Trajectory,
    t: f64,
    dt_probe: f64,
    sign: Sign,
    psi: &PsiBump,
) -> Result<(f64, f64, f64)> {
    if dt_probe <= 0.0 {
        return Err(Error::InvalidArgument("dt_probe must be positive".into()));
    }
    let tol = 1e-9 * (1.0 + t);
    let before = traj.snapshot_at(t - dt_probe, tol)?;
    let center = traj.snapshot_at(t, tol)?;
    let after = traj.snapshot_at(t + dt_probe, tol)?;
    let ctx = GaugeContext {
        alpha: traj.alpha,
        beta: traj.beta,
        psi: psi.clone(),
        policy: traj.dealias,
    };
    let v_before = gauge_transform(&before.field(), &ctx)?;
    let v_after = gauge_transform(&after.field(), &ctx)?;
    let u_center = center.field();
    let rhs = gauged_rhs_nonlinear(&u_center, sign, &ctx)?;

    let h = 0.5 * (after.t - before.t);
    let prof_before = to_profile(v_before.v(sign), before.t);
    let prof_after = to_profile(v_after.v(sign), after.t);
    let dprof = prof_after
        .sub(&prof_before)?
        .scale(Complex64::new(0.5 / h, 0.0));
    // (d_t - i d_x^2) v = e^{it d_x^2} d_t(profile of v).
    let dvdt_minus_free = from_profile(&dprof, center.t);
    let residual = dvdt_minus_free.sub(&rhs)?.l2_norm();

    let v_center = gauge_transform(&u_center, &ctx)?;
    let v = v_center.v(sign);
    let v_h1 = crate::diagnostics::h_sobolev(v, 1.0);
    Ok((residual, v_h1, rhs.l2_norm()))
}
