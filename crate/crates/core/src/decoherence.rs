//! Decoherence rate Γ(t_f) and decoherence time τ_dec for the two-branch
//! superposition path.
//!
//! Γ splits into three terms that are always reported separately:
//!
//! * `gamma_velocity`: internal bath × mean velocity, `(V·Δv)²` weighted,
//! * `gamma_grav`: the pure graviton double integral `2∫∫ΞΔξ N ΞΔξ`,
//! * `gamma_mixed`: graviton equal-time kernel × white-noise bath.
//!
//! The printed closed forms cover only the last two; the velocity term is
//! kept out of every closed-form comparison.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{n_int_with, noise_equal_time, noise_scalar, BathMode, GravitonState, InternalBath, IntKernel, StateKind};
use crate::quadrature::{integrate_1d, integrate_2d_panel, QuadratureSpec};
use crate::special::{self, KappaKind};
use crate::tensor::{IsotropicRank4, SpatialVector};

/// Branch separation `Δξ(t) = 2v·s(t)` with the triangle profile
/// `s(t) = t` on `(0, t_f/2]` and `t_f − t` afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperpositionPath {
    /// Branch velocity.
    pub v: SpatialVector,
    /// Mean position Ξ.
    pub xi: SpatialVector,
    /// Mean velocity V.
    #[serde(default)]
    pub mean_velocity: SpatialVector,
    pub t_f: f64,
}

impl SuperpositionPath {
    pub fn new(v: SpatialVector, xi: SpatialVector, mean_velocity: SpatialVector, t_f: f64) -> Result<Self> {
        let p = SuperpositionPath { v, xi, mean_velocity, t_f };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.v.ensure_finite("v")?;
        self.xi.ensure_finite("xi")?;
        self.mean_velocity.ensure_finite("mean_velocity")?;
        if !(self.t_f > 0.0 && self.t_f.is_finite()) {
            return Err(Error::arg(format!("t_f must be positive, got {}", self.t_f)));
        }
        Ok(())
    }

    /// Triangle profile `s(t)`; zero outside `[0, t_f]`.
    pub fn profile(&self, t: f64) -> f64 {
        if t <= 0.0 || t >= self.t_f {
            0.0
        } else if t <= 0.5 * self.t_f {
            t
        } else {
            self.t_f - t
        }
    }

    pub fn delta_xi(&self, t: f64) -> SpatialVector {
        self.v.scale(2.0 * self.profile(t))
    }

    /// `Δv(t) = ±2v`; the derivative of `Δξ`, taking the left limit at `t_f/2`.
    pub fn delta_v(&self, t: f64) -> SpatialVector {
        if t <= 0.5 * self.t_f {
            self.v.scale(2.0)
        } else {
            self.v.scale(-2.0)
        }
    }

    /// `𝒦 = P^{ijkl} Ξ_i v_j Ξ_k v_l`.
    pub fn k_contraction(&self) -> f64 {
        IsotropicRank4::GRAVITON.contract_k(self.xi, self.v)
    }

    pub fn with_t_f(mut self, t_f: f64) -> Self {
        self.t_f = t_f;
        self
    }
}

/// A path without a duration; the root finder sets `t_f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathTemplate {
    pub v: SpatialVector,
    pub xi: SpatialVector,
    #[serde(default)]
    pub mean_velocity: SpatialVector,
}

impl PathTemplate {
    pub fn path(&self, t_f: f64) -> SuperpositionPath {
        SuperpositionPath { v: self.v, xi: self.xi, mean_velocity: self.mean_velocity, t_f }
    }

    pub fn k_contraction(&self) -> f64 {
        IsotropicRank4::GRAVITON.contract_k(self.xi, self.v)
    }
}

impl From<SuperpositionPath> for PathTemplate {
    fn from(p: SuperpositionPath) -> Self {
        PathTemplate { v: p.v, xi: p.xi, mean_velocity: p.mean_velocity }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

/// Error estimates of the quadrature terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermErrors {
    pub velocity: f64,
    pub grav: f64,
    pub mixed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceReport {
    pub gamma_velocity: f64,
    pub gamma_grav: f64,
    pub gamma_mixed: f64,
    pub gamma_total: f64,
    pub method: Method,
    pub tau_dec: Option<f64>,
    pub k_contraction: f64,
    pub errors: Option<TermErrors>,
    pub warnings: Vec<String>,
}

impl DecoherenceReport {
    fn new(method: Method, k: f64, velocity: f64, grav: f64, mixed: f64) -> Self {
        let mut warnings = Vec::new();
        if k <= 0.0 {
            let msg = format!("𝒦 = {k:e} ≤ 0: the graviton terms vanish or change sign");
            log::warn!("{msg}");
            warnings.push(msg);
        }
        DecoherenceReport {
            gamma_velocity: velocity,
            gamma_grav: grav,
            gamma_mixed: mixed,
            gamma_total: velocity + grav + mixed,
            method,
            tau_dec: None,
            k_contraction: k,
            errors: None,
            warnings,
        }
    }

    /// Γ without the velocity term, the quantity the closed forms describe.
    pub fn gamma_graviton(&self) -> f64 {
        self.gamma_grav + self.gamma_mixed
    }
}

fn check_inputs(state: &GravitonState, bath: &InternalBath, path: &SuperpositionPath, m0: f64) -> Result<()> {
    if !(m0 > 0.0 && m0.is_finite()) {
        return Err(Error::arg(format!("m0 must be positive, got {m0}")));
    }
    state.validate()?;
    bath.validate()?;
    path.validate()
}

/// White-noise velocity term `4(λ²γπ/β)(V·v)² t_f`.
fn velocity_white(bath: &InternalBath, path: &SuperpositionPath) -> f64 {
    let vv = path.mean_velocity.dot(path.v);
    4.0 * bath.delta_weight() * vv * vv * path.t_f
}

/// Closed-form `(grav, mixed)` for the state.
fn closed_terms(state: &GravitonState, bath: &InternalBath, m0: f64, k: f64, t_f: f64) -> Result<(f64, f64)> {
    let vacuum = GravitonState::vacuum(state.cutoff);
    let (grav_vac, mixed_vac) = own_terms(&vacuum, bath, m0, k, t_f, special::kappa(KappaKind::Vacuum, bath, state, m0)?)?;
    let own = || own_terms(state, bath, m0, k, t_f, special::kappa_constants(bath, state, m0)?);
    Ok(match state.kind {
        StateKind::Vacuum => (grav_vac, mixed_vac),
        StateKind::Thermal { .. } | StateKind::Coherent { .. } => {
            let (g, m) = own()?;
            (grav_vac + g, mixed_vac + m)
        }
        StateKind::Squeezed { r, .. } => {
            let (g, m) = own()?;
            let c = (2.0 * r).cosh();
            (c * grav_vac + g, c * mixed_vac + m)
        }
    })
}

/// The bracket of the rate that belongs to the state itself, with the
/// state's own κ: the whole rate for vacuum, the thermal or coherent
/// addition, or the `sinh 2r` part of the squeezed rate.
fn own_terms(state: &GravitonState, bath: &InternalBath, m0: f64, k: f64, t_f: f64, kappa: f64) -> Result<(f64, f64)> {
    let l2 = bath.lambda * bath.lambda;
    let m2 = m0 * m0;
    Ok(match state.kind {
        StateKind::Vacuum => {
            let lam = state.cutoff;
            let x = lam * t_f;
            let pre = 8.0 * m2 / (5.0 * PI) * lam * lam * k;
            (pre * special::g(x), pre * l2 * kappa * x.powi(3))
        }
        StateKind::Thermal { beta_g } => {
            let y = PI * t_f / beta_g;
            let pre = 16.0 * m2 * PI / (15.0 * beta_g * beta_g) * k;
            (pre * special::g_th(y), pre * l2 * kappa * y.powi(3))
        }
        StateKind::Coherent { alpha, .. } => {
            let lt = state.state_cutoff();
            let y = lt * t_f;
            let pre = 128.0 * m2 * alpha * alpha * lt * lt / (15.0 * PI) * k;
            (pre * special::g_coh_1(y), pre * l2 * kappa * special::g_coh_2(y))
        }
        StateKind::Squeezed { r, phi, .. } => {
            let lb = state.state_cutoff();
            let y = lb * t_f;
            let pre = 2.0 * m2 * lb * lb / (135.0 * PI) * k * (2.0 * r).sinh();
            (-pre * special::g_sq_1(y, phi), -pre * l2 * kappa * special::g_sq_2(y, phi))
        }
    })
}

/// `(grav, mixed)` of the state's own bracket only (closed forms, white
/// noise). These are the curves that compare the graviton function of a
/// state with its κ-weighted partner; for vacuum they equal the full
/// `gamma_grav` and `gamma_mixed`.
pub fn gamma_state_terms(
    state: &GravitonState,
    bath: &InternalBath,
    path: &SuperpositionPath,
    m0: f64,
) -> Result<(f64, f64)> {
    check_inputs(state, bath, path, m0)?;
    if bath.mode != BathMode::WhiteNoise {
        return Err(Error::UnsupportedMode("state terms use the closed forms and need a white-noise bath".into()));
    }
    own_terms(state, bath, m0, path.k_contraction(), path.t_f, special::kappa_constants(bath, state, m0)?)
}

/// Γ(t_f) from the closed forms. The bath must be white noise.
pub fn gamma_closed(
    state: &GravitonState,
    bath: &InternalBath,
    path: &SuperpositionPath,
    m0: f64,
) -> Result<DecoherenceReport> {
    check_inputs(state, bath, path, m0)?;
    if bath.mode != BathMode::WhiteNoise {
        return Err(Error::UnsupportedMode(
            "closed forms assume a white-noise bath; use gamma_quadrature for the full integral".into(),
        ));
    }
    let k = path.k_contraction();
    let (grav, mixed) = closed_terms(state, bath, m0, k, path.t_f)?;
    Ok(DecoherenceReport::new(Method::ClosedForm, k, velocity_white(bath, path), grav, mixed))
}

/// Shortest oscillation period of the graviton kernel, in units of `t_f`.
fn kernel_period(state: &GravitonState, t_f: f64) -> f64 {
    let fastest = state.cutoff.max(state.state_cutoff());
    2.0 * PI / (fastest * t_f)
}

/// Γ(t_f) by direct integration of the defining double-time integrals.
///
/// Time is rescaled to `u = t/t_f` and the profile to `s/(t_f/2)` so the
/// integrands are O(kernel scale) on the unit square, which keeps the
/// absolute tolerance meaningful for any `t_f`.
pub fn gamma_quadrature(
    state: &GravitonState,
    bath: &InternalBath,
    path: &SuperpositionPath,
    m0: f64,
    quad: &QuadratureSpec,
) -> Result<DecoherenceReport> {
    check_inputs(state, bath, path, m0)?;
    quad.validate()?;
    let k = path.k_contraction();
    let tf = path.t_f;
    let half = 0.5 * tf;
    let shat = |u: f64| path.profile(u * tf) / half;
    let spec = quad.with_min_period(kernel_period(state, tf));
    // kernel scale: the equal-time value at the origin is positive for every state
    let scale = noise_equal_time(state, m0, 0.0).abs().max(f64::MIN_POSITIVE);

    // graviton: 8𝒦 ∫∫ s s′ n
    let (grav, grav_err) = if k == 0.0 {
        (0.0, 0.0)
    } else {
        let g = |u: f64, w: f64| shat(u) * shat(w) * noise_scalar(state, m0, u * tf, w * tf) / scale;
        let aa = integrate_2d_panel(g, &[0.0, 0.5], &[0.0, 0.5], &spec)?;
        let bb = integrate_2d_panel(g, &[0.5, 1.0], &[0.5, 1.0], &spec)?;
        let ab = integrate_2d_panel(g, &[0.0, 0.5], &[0.5, 1.0], &spec)?;
        let unit = 8.0 * k * scale * half * half * tf * tf;
        (
            unit * (aa.value + bb.value + 2.0 * ab.value),
            unit.abs() * (aa.error + bb.error + 2.0 * ab.error),
        )
    };

    let int_at = |u: f64, w: f64| -> Result<f64> {
        match n_int_with(bath, u * tf, w * tf, quad)? {
            IntKernel::Value(v) => Ok(v),
            IntKernel::Delta { .. } => unreachable!("full-integral bath"),
        }
    };

    let (mixed, mixed_err, velocity, velocity_err) = match bath.mode {
        BathMode::WhiteNoise => {
            let (mixed, mixed_err) = if k == 0.0 || bath.delta_weight() == 0.0 {
                (0.0, 0.0)
            } else {
                let h = |u: f64| {
                    let s = shat(u);
                    s * s * noise_equal_time(state, m0, u * tf) / scale
                };
                let a = integrate_1d(h, 0.0, 0.5, &spec)?;
                let b = integrate_1d(h, 0.5, 1.0, &spec)?;
                let unit = 16.0 * bath.delta_weight() / (m0 * m0) * k * scale * half * half * tf;
                (unit * (a.value + b.value), unit.abs() * (a.error + b.error))
            };
            (mixed, mixed_err, velocity_white(bath, path), 0.0)
        }
        BathMode::FullIntegral { cutoff_int } => {
            let spec_int = spec.with_min_period(2.0 * PI / (cutoff_int.expect("validated") * tf));
            // the inner bath integral cannot report errors through the 2D
            // closure, so the first failure is stashed and returned afterwards
            let failure = std::cell::RefCell::new(None);
            let nint = |u: f64, w: f64| match int_at(u, w) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            };
            let mixed = if k == 0.0 || bath.lambda == 0.0 || bath.gamma == 0.0 {
                (0.0, 0.0)
            } else {
                let f = |u: f64, w: f64| {
                    shat(u) * shat(w) * nint(u, w) * noise_scalar(state, m0, u * tf, w * tf) / scale
                };
                let aa = integrate_2d_panel(f, &[0.0, 0.5], &[0.0, 0.5], &spec_int)?;
                let bb = integrate_2d_panel(f, &[0.5, 1.0], &[0.5, 1.0], &spec_int)?;
                let ab = integrate_2d_panel(f, &[0.0, 0.5], &[0.5, 1.0], &spec_int)?;
                let unit = 16.0 * k / (m0 * m0) * scale * half * half * tf * tf;
                (
                    unit * (aa.value + bb.value + 2.0 * ab.value),
                    unit.abs() * (aa.error + bb.error + 2.0 * ab.error),
                )
            };
            let vv = path.mean_velocity.dot(path.v);
            let velocity = if vv == 0.0 || bath.lambda == 0.0 || bath.gamma == 0.0 {
                (0.0, 0.0)
            } else {
                // Δv_j Δv_l V_j V_l = 4(V·v)² σσ′ with σ = ±1 on the two halves
                let sign = |u: f64| if u <= 0.5 { 1.0 } else { -1.0 };
                let f = |u: f64, w: f64| sign(u) * sign(w) * nint(u, w);
                let aa = integrate_2d_panel(f, &[0.0, 0.5], &[0.0, 0.5], &spec_int)?;
                let bb = integrate_2d_panel(f, &[0.5, 1.0], &[0.5, 1.0], &spec_int)?;
                let ab = integrate_2d_panel(f, &[0.0, 0.5], &[0.5, 1.0], &spec_int)?;
                let unit = 4.0 * vv * vv * tf * tf;
                (
                    unit * (aa.value + bb.value + 2.0 * ab.value),
                    unit * (aa.error + bb.error + 2.0 * ab.error),
                )
            };
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            (mixed.0, mixed.1, velocity.0, velocity.1)
        }
    };

    let mut report = DecoherenceReport::new(Method::Quadrature, k, velocity, grav, mixed);
    report.errors = Some(TermErrors { velocity: velocity_err, grav: grav_err, mixed: mixed_err });
    Ok(report)
}

/// Printed small-`x` decoherence times, with `M_pl = 1` and the internal
/// coupling kept as `λ²κ`.
pub fn tau_dec_closed(state: &GravitonState, bath: &InternalBath, m0: f64, k: f64) -> Result<f64> {
    if !(m0 > 0.0) {
        return Err(Error::arg("m0 must be positive"));
    }
    bath.validate()?;
    state.validate()?;
    if !(k > 0.0) {
        return Err(Error::Domain(format!("no finite τ_dec for 𝒦 = {k:e} ≤ 0")));
    }
    let l2 = bath.lambda * bath.lambda;
    let lam5 = state.cutoff.powi(5);
    let kappa = special::kappa(KappaKind::Vacuum, bath, state, m0)?;
    let (num, den) = match state.kind {
        StateKind::Vacuum => (5.0 * PI / 8.0, kappa * lam5),
        StateKind::Thermal { beta_g } => {
            let kth = special::kappa(KappaKind::Thermal, bath, state, m0)?;
            (15.0 * PI / 8.0, 3.0 * kappa * lam5 + 2.0 * PI.powi(5) * kth / beta_g.powi(5))
        }
        StateKind::Coherent { alpha, .. } => {
            let kc = special::kappa(KappaKind::Coherent, bath, state, m0)?;
            (45.0 * PI / 8.0, 9.0 * kappa * lam5 + 16.0 * alpha * alpha * kc * state.state_cutoff().powi(5))
        }
        StateKind::Squeezed { r, .. } => {
            let ks = special::kappa(KappaKind::Squeezed, bath, state, m0)?;
            (
                405.0 * PI / 4.0,
                162.0 * kappa * lam5 * (2.0 * r).cosh() - ks * state.state_cutoff().powi(5) * (2.0 * r).sinh(),
            )
        }
    };
    let den = l2 * den;
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::Domain(format!(
            "no finite τ_dec in small-x approximation (denominator {den:e})"
        )));
    }
    Ok((num / k).cbrt() * m0.powf(-2.0 / 3.0) * (1.0 / den).cbrt())
}

/// Solves `Γ_grav + Γ_mixed = 1` (closed forms, velocity term excluded) for
/// `t_f`, with the path duration equal to the trial time.
///
/// The bracket starts at `1/Λ_g`, shrinks geometrically until `Γ < 0.1` and
/// then doubles until `Γ > 1`. Bisection then runs to `|Γ − 1| ≤ tol`.
pub fn tau_dec_root(
    state: &GravitonState,
    bath: &InternalBath,
    template: &PathTemplate,
    m0: f64,
    tol: f64,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::arg("tol must be positive"));
    }
    let gamma = |t: f64| -> Result<f64> { Ok(gamma_closed(state, bath, &template.path(t), m0)?.gamma_graviton()) };
    const MAX_STEPS: usize = 400;

    let mut lo = 1.0 / state.cutoff;
    let mut g_lo = gamma(lo)?;
    let mut steps = 0;
    while g_lo >= 0.1 {
        lo *= 0.5;
        g_lo = gamma(lo)?;
        steps += 1;
        if steps > MAX_STEPS || lo < f64::MIN_POSITIVE {
            return Err(Error::Bracket { t_lo: lo, t_hi: 1.0 / state.cutoff, gamma_lo: g_lo, gamma_hi: f64::NAN });
        }
    }
    let mut hi = lo;
    let mut g_hi = g_lo;
    steps = 0;
    while g_hi <= 1.0 {
        lo = hi;
        g_lo = g_hi;
        hi *= 2.0;
        g_hi = gamma(hi)?;
        steps += 1;
        if steps > MAX_STEPS || !g_hi.is_finite() {
            return Err(Error::Bracket { t_lo: lo, t_hi: hi, gamma_lo: g_lo, gamma_hi: g_hi });
        }
    }
    log::debug!("τ_dec bracket [{lo:e}, {hi:e}], Γ = [{g_lo:e}, {g_hi:e}]");

    for _ in 0..MAX_STEPS {
        let mid = 0.5 * (lo + hi);
        let g = gamma(mid)?;
        if (g - 1.0).abs() <= tol {
            return Ok(mid);
        }
        if mid <= lo || mid >= hi {
            return Err(Error::Tolerance { context: "τ_dec bisection".into(), estimate: mid, residual: (g - 1.0).abs() });
        }
        if g < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    Err(Error::Tolerance { context: "τ_dec bisection".into(), estimate: mid, residual: (gamma(mid)? - 1.0).abs() })
}
