//! Exact Maclaurin coefficients of the special functions, computed from
//! their defining integrals by term-wise integration of the integrand's
//! Taylor series in rational arithmetic.
//!
//! Each function is written as an integral of an elementary integrand (see
//! [`SeriesId`]). Thermal functions need `ζ(2k)/π^{2k}`, which is rational
//! and comes from the Bernoulli numbers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 40;

/// Functions with a Maclaurin oracle. Phase-dependent functions are split
/// into their `cos φ` and `sin φ` parts, since `cos(y−φ) = cos y cos φ + sin y sin φ`.
///
/// Defining integrals (`s_x(u)` is the triangle profile `u` on `[0, x/2]`,
/// `x−u` on `[x/2, x]`):
///
/// | id | definition |
/// |----|------------|
/// | `F` | `x⁻⁶ ∫₀ˣ y⁵ cos y dy` |
/// | `F_sin` | `x⁻⁶ ∫₀ˣ y⁵ sin y dy` |
/// | `F_th` | `(60π⁶)⁻¹ ∫₀^∞ ω⁵ cos(ωx/π) / (e^ω − 1) dω` |
/// | `G` | `(16/3) x⁻² ∫₀ˣ u sin⁴(u/4) du` |
/// | `G_th` | `(16/π²) ∫₀^∞ ω sin⁴(ωx/4π) / (e^ω − 1) dω` |
/// | `G_coh_I` | `x⁻² ∫₀ˣ u cos²(u/2) sin⁴(u/4) du` |
/// | `G_coh_II` | `12 ∫₀ˣ s_x(u)² [1/6 + F(2u)] du` |
/// | `G_sq_I_cos`, `G_sq_I_sin` | `576 x⁻² ∫₀ˣ u {cos u, sin u} sin⁴(u/4) du` |
/// | `G_sq_II_cos`, `G_sq_II_sin` | `48 ∫₀ˣ s_x(u)² {F, F_sin}(2u) du` |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesId {
    F,
    FSin,
    FTh,
    G,
    GTh,
    GCohI,
    GCohII,
    GSqICos,
    GSqISin,
    GSqIICos,
    GSqIISin,
}

impl SeriesId {
    pub const ALL: [SeriesId; 11] = [
        SeriesId::F,
        SeriesId::FSin,
        SeriesId::FTh,
        SeriesId::G,
        SeriesId::GTh,
        SeriesId::GCohI,
        SeriesId::GCohII,
        SeriesId::GSqICos,
        SeriesId::GSqISin,
        SeriesId::GSqIICos,
        SeriesId::GSqIISin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesId::F => "F",
            SeriesId::FSin => "F_sin",
            SeriesId::FTh => "F_th",
            SeriesId::G => "G",
            SeriesId::GTh => "G_th",
            SeriesId::GCohI => "G_coh_I",
            SeriesId::GCohII => "G_coh_II",
            SeriesId::GSqICos => "G_sq_I_cos",
            SeriesId::GSqISin => "G_sq_I_sin",
            SeriesId::GSqIICos => "G_sq_II_cos",
            SeriesId::GSqIISin => "G_sq_II_sin",
        }
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeriesId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::arg(format!("unknown function id `{s}`")))
    }
}

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Q::from_integer(acc)
}

/// Truncated power series `Σ c_n x^n`, `n ≤ len-1`.
#[derive(Debug, Clone, PartialEq)]
struct Series(Vec<Q>);

impl Series {
    fn zeros(len: usize) -> Self {
        Series(vec![Q::zero(); len])
    }

    fn len(&self) -> usize {
        self.0.len()
    }

    /// `cos(a x)` or `sin(a x)` with rational `a`.
    fn trig(a: &Q, len: usize, sine: bool) -> Self {
        let mut s = Series::zeros(len);
        let mut pow = Q::one();
        for n in 0..len {
            if (n % 2 == 1) == sine {
                let sign = if (n / 2) % 2 == 0 { q(1) } else { q(-1) };
                s.0[n] = sign * &pow / factorial(n);
            }
            pow *= a;
        }
        s
    }

    fn cos(a: Q, len: usize) -> Self {
        Series::trig(&a, len, false)
    }

    fn sin(a: Q, len: usize) -> Self {
        Series::trig(&a, len, true)
    }

    fn monomial(power: usize, len: usize) -> Self {
        let mut s = Series::zeros(len);
        if power < len {
            s.0[power] = q(1);
        }
        s
    }

    fn constant(c: Q, len: usize) -> Self {
        let mut s = Series::zeros(len);
        s.0[0] = c;
        s
    }

    fn add(&self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn scale(&self, c: &Q) -> Series {
        Series(self.0.iter().map(|a| a * c).collect())
    }

    fn mul(&self, o: &Series) -> Series {
        let len = self.len().min(o.len());
        let mut out = Series::zeros(len);
        for (i, a) in self.0.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out.0[i + j] += a * b;
                }
            }
        }
        out
    }

    /// `∫₀ˣ`, growing the length by one.
    fn integrate(&self) -> Series {
        let mut out = Series::zeros(self.len() + 1);
        for (n, c) in self.0.iter().enumerate() {
            out.0[n + 1] = c / q(n as i64 + 1);
        }
        out
    }

    /// Divide by `x^p`; the dropped low coefficients must vanish.
    fn shift_down(&self, p: usize) -> Series {
        debug_assert!(self.0.iter().take(p).all(Zero::is_zero));
        Series(self.0[p..].to_vec())
    }

    /// `g(x) = f(c x)`.
    fn rescale_arg(&self, c: &Q) -> Series {
        let mut pow = Q::one();
        let mut out = Series::zeros(self.len());
        for (n, a) in self.0.iter().enumerate() {
            out.0[n] = a * &pow;
            pow *= c;
        }
        out
    }

    fn truncate(mut self, len: usize) -> Series {
        self.0.resize(len, Q::zero());
        self
    }
}

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = −1/2`).
fn bernoulli(n: usize) -> Vec<Q> {
    let mut b = vec![Q::one()];
    // Σ_{k=0}^{m} C(m+1, k) B_k = 0
    for m in 1..=n {
        let mut binom = BigInt::one();
        let mut acc = Q::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += Q::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / Q::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `ζ(2k) / π^{2k} = (−1)^{k+1} B_{2k} 2^{2k−1} / (2k)!` for `k ≥ 1`.
fn zeta_even_over_pi(k: usize, bern: &[Q]) -> Q {
    let sign = if (k + 1).is_multiple_of(2) { q(1) } else { q(-1) };
    let two_pow = Q::from_integer(BigInt::from(2).pow((2 * k - 1) as u32));
    sign * &bern[2 * k] * two_pow / factorial(2 * k)
}

/// `sin⁴(u/4) = (3 − 4 cos(u/2) + cos u) / 8`.
fn sin4_quarter(len: usize) -> Series {
    Series::constant(q(3), len)
        .add(&Series::cos(frac(1, 2), len).scale(&q(-4)))
        .add(&Series::cos(q(1), len))
        .scale(&frac(1, 8))
}

/// `T[h](x) = ∫₀^{x/2} u² h(u) du + ∫_{x/2}^{x} (x−u)² h(u) du` for
/// `h = Σ h_m u^m`, which is `Σ h_m c_m x^{m+3}` with rational `c_m`.
fn triangle_functional(h: &Series, len: usize) -> Series {
    let half = frac(1, 2);
    let mut out = Series::zeros(len);
    for (m, hm) in h.0.iter().enumerate() {
        let p = m + 3;
        if p >= len || hm.is_zero() {
            continue;
        }
        let mi = m as i64;
        let hp = |e: usize| -> Q {
            let mut r = Q::one();
            for _ in 0..e {
                r *= &half;
            }
            r
        };
        let first = hp(m + 3) / q(mi + 3);
        // ∫_{1/2}^1 (1−s)² s^m ds
        let second = (q(1) - hp(m + 1)) / q(mi + 1) - q(2) * (q(1) - hp(m + 2)) / q(mi + 2)
            + (q(1) - hp(m + 3)) / q(mi + 3);
        out.0[p] = hm * (first + second);
    }
    out
}

fn f_like(sine: bool, len: usize) -> Series {
    // x⁻⁶ ∫₀ˣ y⁵ trig(y) dy
    let trig = if sine {
        Series::sin(q(1), len)
    } else {
        Series::cos(q(1), len)
    };
    Series::monomial(5, len + 6)
        .mul(&trig.truncate(len + 6))
        .integrate()
        .shift_down(6)
        .truncate(len)
}

/// `x⁻² ∫₀ˣ u w(u) du` for a series `w`.
fn moment_over_x2(w: &Series, len: usize) -> Series {
    Series::monomial(1, len + 2)
        .mul(&w.clone().truncate(len + 2))
        .integrate()
        .shift_down(2)
        .truncate(len)
}

/// Maclaurin coefficients `c_0..=c_order` of the function `which`.
pub fn maclaurin_defining_integral(which: SeriesId, order: usize) -> Result<Vec<BigRational>> {
    if order > MAX_ORDER {
        return Err(Error::arg(format!("series order {order} exceeds {MAX_ORDER}")));
    }
    let len = order + 1;
    let series = match which {
        SeriesId::F => f_like(false, len),
        SeriesId::FSin => f_like(true, len),
        SeriesId::FTh => {
            // c_{2n} = (−1)^n (2n+5)! ζ(2n+6) / ((2n)! 60 π^{2n+6})
            let bern = bernoulli(order + 6);
            let mut s = Series::zeros(len);
            for n in 0..=order / 2 {
                let sign = if n % 2 == 0 { q(1) } else { q(-1) };
                s.0[2 * n] = sign * factorial(2 * n + 5) * zeta_even_over_pi(n + 3, &bern)
                    / (factorial(2 * n) * q(60));
            }
            s
        }
        SeriesId::G => moment_over_x2(&sin4_quarter(len + 2), len).scale(&frac(16, 3)),
        SeriesId::GTh => {
            // c_{2n} = 16 h_{2n} (2n+1)! ζ(2n+2)/π^{2n+2}, h = sin⁴(u/4) coefficients
            let h = sin4_quarter(len);
            let bern = bernoulli(order + 2);
            let mut s = Series::zeros(len);
            for n in 1..=order / 2 {
                s.0[2 * n] =
                    q(16) * &h.0[2 * n] * factorial(2 * n + 1) * zeta_even_over_pi(n + 1, &bern);
            }
            s
        }
        SeriesId::GCohI => {
            let l = len + 2;
            let cos2 = Series::constant(q(1), l).add(&Series::cos(q(1), l)).scale(&frac(1, 2));
            moment_over_x2(&cos2.mul(&sin4_quarter(l)), len)
        }
        SeriesId::GSqICos | SeriesId::GSqISin => {
            let l = len + 2;
            let trig = if which == SeriesId::GSqISin {
                Series::sin(q(1), l)
            } else {
                Series::cos(q(1), l)
            };
            moment_over_x2(&trig.mul(&sin4_quarter(l)), len).scale(&q(576))
        }
        SeriesId::GCohII => {
            let h = Series::constant(frac(1, 6), len).add(&f_like(false, len).rescale_arg(&q(2)));
            triangle_functional(&h, len).scale(&q(12))
        }
        SeriesId::GSqIICos | SeriesId::GSqIISin => {
            let h = f_like(which == SeriesId::GSqIISin, len).rescale_arg(&q(2));
            triangle_functional(&h, len).scale(&q(48))
        }
    };
    Ok(series.0)
}

/// Lowest power with a nonzero coefficient and that coefficient.
pub fn leading_term(coeffs: &[BigRational]) -> Option<(usize, BigRational)> {
    coeffs
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_zero())
        .map(|(n, c)| (n, c.clone()))
}

/// Coefficients rounded to `f64`.
pub fn to_f64(coeffs: &[BigRational]) -> Vec<f64> {
    coeffs
        .iter()
        .map(|c| c.to_f64().unwrap_or(if c.is_negative() { f64::MIN } else { f64::MAX }))
        .collect()
}

/// Horner evaluation of rounded coefficients.
pub fn eval_f64(coeffs: &[BigRational], x: f64) -> f64 {
    to_f64(coeffs).iter().rev().fold(0.0, |acc, c| acc * x + c)
}
