//! Closed-form special functions with removable singularities at `x = 0`.
//!
//! Every function switches to a Maclaurin polynomial for `|x| ≤ switchover_x`
//! because the closed forms cancel catastrophically there (`F` loses all
//! digits below `x ≈ 0.1`). Coefficient tables are frozen copies of the exact
//! rationals from [`crate::quadrature::maclaurin`]; a unit test re-derives and
//! compares them. Large-argument exponentials are rewritten in `e^{-x}` so
//! nothing overflows.
//!
//! All arguments are dimensionless (cutoff·time or π·time/β_g).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{GravitonState, InternalBath, StateKind};

/// Where and how far the series replaces the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeriesPolicy {
    pub switchover_x: f64,
    /// Highest power of `x` kept.
    pub series_order: usize,
    pub target_rel_err: f64,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy::DEFAULT
    }
}

impl SeriesPolicy {
    pub const DEFAULT: SeriesPolicy = SeriesPolicy {
        switchover_x: 0.5,
        series_order: 12,
        target_rel_err: 1e-12,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.switchover_x > 0.0 && self.switchover_x.is_finite()) {
            return Err(Error::arg("switchover_x must be positive"));
        }
        if self.series_order > TABLE_ORDER {
            return Err(Error::arg(format!(
                "series_order {} exceeds the tabulated order {TABLE_ORDER}",
                self.series_order
            )));
        }
        if !(self.target_rel_err > 0.0) {
            return Err(Error::arg("target_rel_err must be positive"));
        }
        for (name, table) in ALL_TABLES {
            let bound = table_truncation_bound(table, self.switchover_x);
            if bound > self.target_rel_err {
                return Err(Error::arg(format!(
                    "{name}: series truncation error {bound:.1e} at x = {} exceeds {:.1e}",
                    self.switchover_x, self.target_rel_err
                )));
            }
        }
        Ok(())
    }
}

/// Highest tabulated power.
pub const TABLE_ORDER: usize = 24;

// Maclaurin coefficients in ascending powers, orders 0..=24.
#[rustfmt::skip]
mod tables {
    pub const F_COEFFS: [f64; 25] = [
        0.16666666666666666, 0.0, -0.0625, 0.0,
        0.004166666666666667, 0.0, -0.00011574074074074075, 0.0,
        1.7715419501133788e-6, 0.0, -1.722332451499118e-8, 0.0,
        1.1598198326593389e-10, 0.0, -5.735372798864862e-13, 0.0,
        2.1724896965397208e-15, 0.0, -6.508002903577594e-18, 0.0,
        1.5808913935816018e-20, 0.0, -3.1774254973037764e-23, 0.0,
        5.372458570320395e-26,
    ];
    pub const F_SIN_COEFFS: [f64; 25] = [
        0.0, 0.14285714285714285, 0.0, -0.018518518518518517,
        0.0, 0.0007575757575757576, 0.0, -1.5262515262515263e-5,
        0.0, 1.8371546149323928e-7, 0.0, -1.4736534344377482e-9,
        0.0, 8.45212833516927e-12, 0.0, -3.6415065389618177e-14,
        0.0, 1.2223727192806612e-16, 0.0, -3.288254098649732e-19,
        0.0, 7.249237430885653e-22, 0.0, -1.333851782976098e-24,
        0.0,
    ];
    pub const F_TH_COEFFS: [f64; 25] = [
        0.0021164021164021165, 0.0, -0.0044444444444444444, 0.0,
        0.0026936026936026937, 0.0, -0.0009999547777325556, 0.0,
        0.0002821869488536155, 0.0, -6.671047019630897e-5, 0.0,
        1.3927855424601405e-5, 0.0, -2.651782982069979e-6, 0.0,
        4.701927969571044e-7, 0.0, -7.877805227802875e-8, 0.0,
        1.2602976544744141e-8, 0.0, -1.9402983498579312e-9, 0.0,
        2.891916300735671e-10,
    ];
    pub const G_COEFFS: [f64; 25] = [
        0.0, 0.0, 0.0, 0.0,
        0.003472222222222222, 0.0, -0.00010850694444444444, 0.0,
        1.6276041666666668e-6, 0.0, -1.5249818580981777e-8, 0.0,
        9.93160453803435e-11, 0.0, -4.778310467804283e-13, 0.0,
        1.7700687467561517e-15, 0.0, -5.206322879467256e-18, 0.0,
        1.2455460435438686e-20, 0.0, -2.4713285855025345e-23, 0.0,
        4.132659453404966e-26,
    ];
    pub const G_TH_COEFFS: [f64; 25] = [
        0.0, 0.0, 0.0, 0.0,
        0.007936507936507936, 0.0, -0.001388888888888889, 0.0,
        0.0001893939393939394, 0.0, -2.371544534242947e-5, 0.0,
        2.8475896531452087e-6, 0.0, -3.3313777952258346e-7, 0.0,
        3.826100366969598e-8, 0.0, -4.332912612864079e-9, 0.0,
        4.852332335541048e-10, 0.0, -5.384687433316719e-11, 0.0,
        5.9302529361755976e-12,
    ];
    pub const G_COH_I_COEFFS: [f64; 25] = [
        0.0, 0.0, 0.0, 0.0,
        0.0006510416666666666, 0.0, -0.00014241536458333334, 0.0,
        1.251220703125e-5, 0.0, -5.750639308276841e-7, 0.0,
        1.6706120189956045e-8, 0.0, -3.410817740799545e-10, 0.0,
        5.220636073966196e-12, 0.0, -6.253550543606191e-14, 0.0,
        6.044519672325837e-16, 0.0, -4.8241747213205655e-18, 0.0,
        3.237013650851539e-20,
    ];
    pub const G_COH_II_COEFFS: [f64; 25] = [
        0.0, 0.0, 0.0, 0.3333333333333333,
        0.0, -0.06875, 0.0, 0.0067857142857142855,
        0.0, -0.00034033289241622576, 0.0, 1.0876193911908197e-5,
        0.0, -2.4588403494653496e-7, 0.0, 4.172547437538619e-9,
        0.0, -5.526116035423925e-11, 0.0, 5.876820038240188e-13,
        0.0, -5.130826304181056e-15, 0.0, 3.744044458025316e-17,
        0.0,
    ];
    pub const G_SQ_I_COS_COEFFS: [f64; 25] = [
        0.0, 0.0, 0.0, 0.0,
        0.375, 0.0, -0.15234375, 0.0,
        0.01423828125, 0.0, -0.0006608266679067461, 0.0,
        1.923472432592829e-5, 0.0, -3.9287459798705527e-7, 0.0,
        6.013981589784408e-9, 0.0, -7.204033997947233e-11, 0.0,
        6.963273210622094e-13, 0.0, -5.557446609926419e-15, 0.0,
        3.729039279453752e-17,
    ];
    pub const G_SQ_I_SIN_COEFFS: [f64; 25] = [
        0.0, 0.0, 0.0, 0.0,
        0.0, 0.32142857142857145, 0.0, -0.052083333333333336,
        0.0, 0.0032848011363636365, 0.0, -0.00011849316048534798,
        0.0, 2.8596100983796297e-6, 0.0, -5.023769465764525e-8,
        0.0, 6.772549534230309e-10, 0.0, -7.263659100775928e-12,
        0.0, 6.363710547744709e-14, 0.0, -4.647591439585608e-16,
        0.0,
    ];
    pub const G_SQ_II_COS_COEFFS: [f64; 25] = [
        0.0, 0.0, 0.0, 0.6666666666666666,
        0.0, -0.275, 0.0, 0.027142857142857142,
        0.0, -0.001361331569664903, 0.0, 4.350477564763279e-5,
        0.0, -9.835361397861399e-7, 0.0, 1.6690189750154477e-8,
        0.0, -2.21044641416957e-10, 0.0, 2.3507280152960753e-12,
        0.0, -2.0523305216724225e-14, 0.0, 1.4976177832101265e-16,
        0.0,
    ];
    pub const G_SQ_II_SIN_COEFFS: [f64; 25] = [
        0.0, 0.0, 0.0, 0.0,
        0.5714285714285714, 0.0, -0.0962962962962963, 0.0,
        0.006493506493506494, 0.0, -0.0002553927553927554, 0.0,
        6.800812356367912e-6, 0.0, -1.3243448117397697e-7, 0.0,
        1.9773150516676e-9, 0.0, -2.3393823429269708e-11, 0.0,
        2.2485996519011708e-13, 0.0, -1.7911419007535876e-15, 0.0,
        1.201795200097401e-17,
    ];
}
use tables::*;

fn horner(coeffs: &[f64], order: usize, x: f64) -> f64 {
    coeffs[..=order.min(TABLE_ORDER)]
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * x + c)
}

/// Size of the first two omitted terms relative to the kept sum.
fn tail_ratio(coeffs: &[f64], order: usize, x: f64) -> f64 {
    let sum = horner(coeffs, order, x).abs();
    let tail: f64 = (order + 1..=(order + 2).min(TABLE_ORDER))
        .map(|k| (coeffs[k] * x.powi(k as i32)).abs())
        .sum();
    if order >= TABLE_ORDER {
        // the tables stop here; the bound is checked in `validate`
        return 0.0;
    }
    if sum == 0.0 {
        if tail == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        tail / sum
    }
}

/// Evaluates a table starting at `policy.series_order` and extends the
/// order until the omitted terms fall below `target_rel_err`. `F_th` needs
/// this: its series has radius π, so order 12 is short at `x = 0.5`.
fn series_adaptive(coeffs: &[f64], x: f64, policy: &SeriesPolicy) -> f64 {
    let mut order = policy.series_order.min(TABLE_ORDER);
    while order < TABLE_ORDER && tail_ratio(coeffs, order, x) > policy.target_rel_err {
        order += 1;
    }
    horner(coeffs, order, x)
}

/// Estimated relative truncation error of the full table at `x`, using the
/// ratio of the last two nonzero terms as a geometric tail.
pub fn table_truncation_bound(coeffs: &[f64], x: f64) -> f64 {
    let nz: Vec<usize> = (0..=TABLE_ORDER).filter(|&k| coeffs[k] != 0.0).collect();
    let (a, b) = match nz.as_slice() {
        [.., a, b] => (*a, *b),
        _ => return 0.0,
    };
    let last = (coeffs[b] * x.powi(b as i32)).abs();
    let prev = (coeffs[a] * x.powi(a as i32)).abs();
    let sum = horner(coeffs, TABLE_ORDER, x).abs();
    if prev == 0.0 || sum == 0.0 {
        return 0.0;
    }
    let r = last / prev;
    if r >= 1.0 {
        return f64::INFINITY;
    }
    last * r / (1.0 - r) / sum
}

/// Frozen tables by name, in the order of `SeriesId::ALL`.
pub const ALL_TABLES: [(&str, &[f64; TABLE_ORDER + 1]); 11] = [
    ("F", &F_COEFFS),
    ("F_sin", &F_SIN_COEFFS),
    ("F_th", &F_TH_COEFFS),
    ("G", &G_COEFFS),
    ("G_th", &G_TH_COEFFS),
    ("G_coh_I", &G_COH_I_COEFFS),
    ("G_coh_II", &G_COH_II_COEFFS),
    ("G_sq_I_cos", &G_SQ_I_COS_COEFFS),
    ("G_sq_I_sin", &G_SQ_I_SIN_COEFFS),
    ("G_sq_II_cos", &G_SQ_II_COS_COEFFS),
    ("G_sq_II_sin", &G_SQ_II_SIN_COEFFS),
];

/// Maclaurin polynomials. The order starts at `policy.series_order` and is
/// raised per function until the omitted terms are below `target_rel_err`.
pub mod series {
    use super::*;

    pub fn f(x: f64, policy: &SeriesPolicy) -> f64 {
        series_adaptive(&F_COEFFS, x, policy)
    }
    pub fn f_sin(x: f64, policy: &SeriesPolicy) -> f64 {
        series_adaptive(&F_SIN_COEFFS, x, policy)
    }
    pub fn f_th(x: f64, policy: &SeriesPolicy) -> f64 {
        series_adaptive(&F_TH_COEFFS, x, policy)
    }
    pub fn f_phase(x: f64, phi: f64, policy: &SeriesPolicy) -> f64 {
        phi.cos() * f(x, policy) + phi.sin() * f_sin(x, policy)
    }
    pub fn g(x: f64, policy: &SeriesPolicy) -> f64 {
        series_adaptive(&G_COEFFS, x, policy)
    }
    pub fn g_th(x: f64, policy: &SeriesPolicy) -> f64 {
        series_adaptive(&G_TH_COEFFS, x, policy)
    }
    pub fn g_coh_1(x: f64, policy: &SeriesPolicy) -> f64 {
        series_adaptive(&G_COH_I_COEFFS, x, policy)
    }
    pub fn g_coh_2(x: f64, policy: &SeriesPolicy) -> f64 {
        series_adaptive(&G_COH_II_COEFFS, x, policy)
    }
    pub fn g_sq_1(x: f64, phi: f64, policy: &SeriesPolicy) -> f64 {
        phi.cos() * series_adaptive(&G_SQ_I_COS_COEFFS, x, policy)
            + phi.sin() * series_adaptive(&G_SQ_I_SIN_COEFFS, x, policy)
    }
    pub fn g_sq_2(x: f64, phi: f64, policy: &SeriesPolicy) -> f64 {
        phi.cos() * series_adaptive(&G_SQ_II_COS_COEFFS, x, policy)
            + phi.sin() * series_adaptive(&G_SQ_II_SIN_COEFFS, x, policy)
    }
}

/// The closed forms, valid away from `x = 0`.
pub mod closed {
    /// `[(5x⁴−60x²+120)cos x + x(x⁴−20x²+120)sin x − 120] / x⁶`
    pub fn f(x: f64) -> f64 {
        f_phase(x, 0.0)
    }

    pub fn f_phase(x: f64, phi: f64) -> f64 {
        let x2 = x * x;
        let (s, c) = (x - phi).sin_cos();
        ((5.0 * x2 * x2 - 60.0 * x2 + 120.0) * c + x * (x2 * x2 - 20.0 * x2 + 120.0) * s
            - 120.0 * phi.cos())
            / (x2 * x2 * x2)
    }

    /// `1/x⁶ − (2cosh⁴x + 11cosh²x + 2) / (15 sinh⁶x)`, evaluated with
    /// `q = e^{−2|x|}` so that no hyperbolic function is formed.
    pub fn f_th(x: f64) -> f64 {
        let x = x.abs();
        let q = (-2.0 * x).exp();
        let one_minus_q = -(-2.0 * x).exp_m1();
        let p = 1.0 + q;
        // (2c⁴ + 11c² + 2)/(15 s⁶) with c = e^x(1+q)/2, s = e^x(1−q)/2
        let num = q * p.powi(4) / 8.0 + 11.0 * q * q * p * p / 4.0 + 2.0 * q * q * q;
        let hyper = 64.0 * num / (15.0 * one_minus_q.powi(6));
        1.0 / x.powi(6) - hyper
    }

    pub fn g(x: f64) -> f64 {
        1.0 + 2.0 / (3.0 * x) * (x.sin() - 8.0 * (0.5 * x).sin())
            + (2.0 / 3.0 * x.cos() - 32.0 / 3.0 * (0.5 * x).cos() + 10.0) / (x * x)
    }

    /// `(1+16eˣ+26e²ˣ+16e³ˣ+e⁴ˣ)/(e²ˣ−1)² − 15/x²`, rewritten in `p = e^{−x}`.
    pub fn g_th(x: f64) -> f64 {
        let p = (-x).exp();
        let den = -(-2.0 * x).exp_m1();
        (1.0 + p * (16.0 + p * (26.0 + p * (16.0 + p)))) / (den * den) - 15.0 / (x * x)
    }

    pub fn g_coh_1(x: f64) -> f64 {
        let h = 0.5 * x;
        (1495.0 + 126.0 * x * x - 1728.0 * h.cos() + 288.0 * x.cos() - 64.0 * (3.0 * h).cos()
            + 9.0 * (2.0 * x).cos()
            + 18.0 * x * (2.0 * x).sin()
            - 96.0 * x * (9.0 * h.sin() - 3.0 * x.sin() + (3.0 * h).sin()))
            / (1152.0 * x * x)
    }

    pub fn g_coh_2(x: f64) -> f64 {
        let x2 = x * x;
        (441.0 + 2.0 * x2 * x2 * x2 + 216.0 * (x2 - 2.0) * x.cos()
            + 9.0 * (2.0 * x2 - 1.0) * (2.0 * x).cos()
            - 36.0 * x * (12.0 - 2.0 * x2 + x.cos()) * x.sin())
            / (12.0 * x2 * x)
    }

    pub fn g_sq_1(x: f64, phi: f64) -> f64 {
        let h = 0.5 * x;
        (-576.0 * (h - phi).cos() + 216.0 * (x - phi).cos() - 64.0 * (3.0 * h - phi).cos()
            + 9.0 * (2.0 * x - phi).cos()
            + (18.0 * x * x + 415.0) * phi.cos()
            - 288.0 * x * (h - phi).sin()
            + 216.0 * x * (x - phi).sin()
            - 96.0 * x * (3.0 * h - phi).sin()
            + 18.0 * x * (2.0 * x - phi).sin())
            / (x * x)
    }

    pub fn g_sq_2(x: f64, phi: f64) -> f64 {
        let x2 = x * x;
        let x3 = x2 * x;
        (72.0 * (x2 - 2.0) * (x - phi).cos() + (6.0 * x2 - 3.0) * (2.0 * x - phi).cos()
            + 147.0 * phi.cos()
            - 144.0 * x * (x - phi).sin()
            + 24.0 * x3 * (x - phi).sin()
            - 6.0 * x * (2.0 * x - phi).sin()
            - 4.0 * x3 * phi.sin())
            / x3
    }
}

macro_rules! switched {
    ($(#[$m:meta])* $name:ident, $with:ident) => {
        $(#[$m])*
        pub fn $name(x: f64) -> f64 {
            $with(x, &SeriesPolicy::DEFAULT)
        }
        pub fn $with(x: f64, policy: &SeriesPolicy) -> f64 {
            if x.abs() <= policy.switchover_x {
                series::$name(x, policy)
            } else {
                closed::$name(x)
            }
        }
    };
}

macro_rules! switched_phase {
    ($(#[$m:meta])* $name:ident, $with:ident) => {
        $(#[$m])*
        pub fn $name(x: f64, phi: f64) -> f64 {
            $with(x, phi, &SeriesPolicy::DEFAULT)
        }
        pub fn $with(x: f64, phi: f64, policy: &SeriesPolicy) -> f64 {
            if x.abs() <= policy.switchover_x {
                series::$name(x, phi, policy)
            } else {
                closed::$name(x, phi)
            }
        }
    };
}

switched!(
    /// `F(x) = x⁻⁶ ∫₀ˣ y⁵ cos y dy`; even, `F(0) = 1/6`.
    f, f_with
);
switched!(
    /// Thermal kernel shape; even, `F_th(0) = 2/945`, `F_th(x) → x⁻⁶`.
    f_th, f_th_with
);
switched_phase!(
    /// `F(x; φ) = x⁻⁶ ∫₀ˣ y⁵ cos(y − φ) dy`.
    f_phase, f_phase_with
);
switched!(
    /// Vacuum rate shape, `G(x) ~ x⁴/288` near 0 and `→ 1` as `x → ∞`.
    g, g_with
);
switched!(g_th, g_th_with);
switched!(g_coh_1, g_coh_1_with);
switched!(
    /// `G_coh^{(II)}(x) ≃ x³/3` for small `x`.
    g_coh_2, g_coh_2_with
);
switched_phase!(g_sq_1, g_sq_1_with);
switched_phase!(
    /// `G_sq^{(II)}(x; 0) ≃ 2x³/3` for small `x`.
    g_sq_2, g_sq_2_with
);

/// Which κ constant to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaKind {
    Vacuum,
    Thermal,
    Coherent,
    Squeezed,
}

impl KappaKind {
    pub fn of(state: &GravitonState) -> KappaKind {
        match state.kind {
            StateKind::Vacuum => KappaKind::Vacuum,
            StateKind::Thermal { .. } => KappaKind::Thermal,
            StateKind::Coherent { .. } => KappaKind::Coherent,
            StateKind::Squeezed { .. } => KappaKind::Squeezed,
        }
    }
}

/// Strength of the graviton × internal-bath term.
///
/// * vacuum `κ = γπΛ_g / (108 m0² β)` (available for every state, since all
///   of them contain the vacuum part)
/// * thermal `κ_th = 4γπ² / (189 m0² β β_g)`
/// * coherent `κ_coh = γπΛ̃_g / (192 m0² β)`
/// * squeezed `κ_sq = 3γπΛ̄_g / (2 β m0²)`
pub fn kappa(kind: KappaKind, bath: &InternalBath, state: &GravitonState, m0: f64) -> Result<f64> {
    if !(m0 > 0.0) {
        return Err(Error::arg("m0 must be positive"));
    }
    if !(bath.beta > 0.0) {
        return Err(Error::arg("bath β must be positive"));
    }
    state.validate()?;
    let base = bath.gamma * PI / (m0 * m0 * bath.beta);
    match (kind, state.kind) {
        (KappaKind::Vacuum, _) => Ok(base * state.cutoff / 108.0),
        (KappaKind::Thermal, StateKind::Thermal { beta_g }) => Ok(base * 4.0 * PI / (189.0 * beta_g)),
        (KappaKind::Coherent, StateKind::Coherent { .. }) => Ok(base * state.state_cutoff() / 192.0),
        (KappaKind::Squeezed, StateKind::Squeezed { .. }) => Ok(base * 1.5 * state.state_cutoff()),
        (k, _) => Err(Error::arg(format!(
            "κ for {k:?} requested but the graviton state is {:?}",
            KappaKind::of(state)
        ))),
    }
}

/// The κ belonging to the state's own variant.
pub fn kappa_constants(bath: &InternalBath, state: &GravitonState, m0: f64) -> Result<f64> {
    kappa(KappaKind::of(state), bath, state, m0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::BathMode;
    use crate::quadrature::maclaurin::{maclaurin_defining_integral, to_f64, SeriesId};

    #[test]
    fn frozen_tables_match_oracle() {
        let tables: [(SeriesId, &[f64]); 11] = [
            (SeriesId::F, &F_COEFFS),
            (SeriesId::FSin, &F_SIN_COEFFS),
            (SeriesId::FTh, &F_TH_COEFFS),
            (SeriesId::G, &G_COEFFS),
            (SeriesId::GTh, &G_TH_COEFFS),
            (SeriesId::GCohI, &G_COH_I_COEFFS),
            (SeriesId::GCohII, &G_COH_II_COEFFS),
            (SeriesId::GSqICos, &G_SQ_I_COS_COEFFS),
            (SeriesId::GSqISin, &G_SQ_I_SIN_COEFFS),
            (SeriesId::GSqIICos, &G_SQ_II_COS_COEFFS),
            (SeriesId::GSqIISin, &G_SQ_II_SIN_COEFFS),
        ];
        for (id, table) in tables {
            let oracle = to_f64(&maclaurin_defining_integral(id, TABLE_ORDER).unwrap());
            assert_eq!(table, &oracle[..], "{id}");
        }
    }

    #[test]
    fn small_x_limits() {
        assert_eq!(f(0.0), 1.0 / 6.0);
        assert_eq!(f_th(0.0), 2.0 / 945.0);
        assert_eq!(g(0.0), 0.0);
        assert_eq!(g_th(0.0), 0.0);
        assert_eq!(g_coh_2(0.0), 0.0);
        let x = 1e-3;
        assert!((g(x) / x.powi(4) - 1.0 / 288.0).abs() < 1e-9);
        assert!((f_phase(0.0, PI / 2.0)).abs() < 1e-16);
        assert!((f_phase(1e-4, PI / 2.0) - 1e-4 / 7.0).abs() < 1e-13);
    }

    #[test]
    fn paper_small_x_approximations() {
        for x in [1e-4, 1e-3, 1e-2] {
            let c = g_coh_2(x) / (x.powi(3) / 3.0);
            assert!((c - 1.0).abs() < 0.01, "{x}: {c}");
            let s = g_sq_2(x, 0.0) / (2.0 * x.powi(3) / 3.0);
            assert!((s - 1.0).abs() < 0.01, "{x}: {s}");
        }
    }

    #[test]
    fn parity_and_phase_reduction() {
        for x in [0.1, 1.0, 7.0] {
            assert!((f(-x) - f(x)).abs() <= 4.0 * f64::EPSILON * f(x).abs());
        }
        for x in [0.5, 3.0, 20.0] {
            assert_eq!(f_phase(x, 0.0), f(x));
        }
    }

    #[test]
    fn g_tends_to_one() {
        // the oscillating part decays only like 6/x
        for i in 0..400 {
            let x = 200.0 + 7.3 * i as f64;
            assert!((g(x) - 1.0).abs() <= 6.0 / x + 22.0 / (x * x), "{x}");
        }
        for x in [1e4, 3e4, 1e5] {
            assert!((g(x) - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn large_arguments_stay_finite() {
        for x in [50.0, 177.0, 178.0, 400.0, 700.0] {
            assert!(f_th(x).is_finite() && g_th(x).is_finite(), "{x}");
        }
        for x in [40.0, 60.0, 100.0] {
            let rel = (f_th(x) - x.powi(-6)).abs() / x.powi(-6);
            assert!(rel <= 1e-12, "{x}: {rel}");
        }
        assert!(f_th(100.0).abs() <= 1e-12);
        assert!((g_th(700.0) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn squeezed_functions_are_2pi_periodic() {
        for x in [0.3, 2.0, 15.0] {
            for phi in [0.0, 0.7, 2.5] {
                let shift = phi + 2.0 * PI;
                assert!((g_sq_1(x, phi) - g_sq_1(x, shift)).abs() <= 1e-12 * g_sq_1(x, phi).abs().max(1.0));
                assert!((g_sq_2(x, phi) - g_sq_2(x, shift)).abs() <= 1e-12 * g_sq_2(x, phi).abs().max(1.0));
            }
        }
    }

    #[test]
    fn policy_validation() {
        assert!(SeriesPolicy::DEFAULT.validate().is_ok());
        let mut p = SeriesPolicy::DEFAULT;
        p.switchover_x = 0.0;
        assert!(p.validate().is_err());
        p = SeriesPolicy::DEFAULT;
        p.series_order = TABLE_ORDER + 1;
        assert!(p.validate().is_err());
    }

    fn bath(gamma: f64, beta: f64) -> InternalBath {
        InternalBath {
            lambda: 1.0,
            gamma,
            beta,
            mode: BathMode::WhiteNoise,
        }
    }

    #[test]
    fn kappa_by_substitution() {
        let vac = GravitonState::vacuum(1.0);
        assert!((kappa_constants(&bath(108.0, 1.0), &vac, 1.0).unwrap() - PI).abs() < 1e-15);
        let sq = GravitonState::squeezed(1.0, 0.3, 0.0);
        assert!((kappa_constants(&bath(1.0, 1.0), &sq, 1.0).unwrap() - 1.5 * PI).abs() < 1e-15);
        let th = GravitonState::thermal(1.0, 1.0);
        let k = kappa_constants(&bath(189.0 / 4.0, 1.0), &th, 1.0).unwrap();
        assert!((k - PI * PI).abs() < 1e-14);
        let coh = GravitonState::coherent(2.0, 1.0);
        assert!((kappa_constants(&bath(192.0, 1.0), &coh, 1.0).unwrap() - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn kappa_mismatch_and_bad_inputs() {
        let vac = GravitonState::vacuum(1.0);
        assert!(kappa(KappaKind::Thermal, &bath(1.0, 1.0), &vac, 1.0).is_err());
        assert!(kappa(KappaKind::Vacuum, &bath(1.0, 1.0), &vac, 0.0).is_err());
        assert!(kappa(KappaKind::Vacuum, &bath(1.0, 0.0), &vac, 1.0).is_err());
        let th = GravitonState::thermal(1.0, 2.0);
        assert!(kappa(KappaKind::Vacuum, &bath(1.0, 1.0), &th, 1.0).is_ok());
    }
}
