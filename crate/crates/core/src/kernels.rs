//! Noise kernels of the graviton field and of the internal-degrees-of-freedom
//! bath.
//!
//! Every graviton kernel factorizes as `scalar(t, t′) · P^{ijkl}` with the
//! fixed isotropic tensor `P = 3(δδ+δδ) − 2δδ`, so only the scalar is
//! computed here.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, QuadratureSpec};
use crate::special;
use crate::tensor::IsotropicRank4;

/// Initial state of the graviton field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GravitonState {
    /// Vacuum momentum cutoff Λ_g (inverse time).
    pub cutoff: f64,
    pub kind: StateKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateKind {
    Vacuum,
    Thermal {
        beta_g: f64,
    },
    /// Real displacement `α`. `cutoff` is Λ̃_g and defaults to Λ_g.
    Coherent {
        alpha: f64,
        #[serde(default)]
        cutoff: Option<f64>,
    },
    /// Squeeze `ζ = r e^{iφ}`. `cutoff` is Λ̄_g and defaults to Λ_g.
    Squeezed {
        r: f64,
        phi: f64,
        #[serde(default)]
        cutoff: Option<f64>,
    },
}

impl GravitonState {
    pub fn vacuum(cutoff: f64) -> Self {
        GravitonState { cutoff, kind: StateKind::Vacuum }
    }

    pub fn thermal(cutoff: f64, beta_g: f64) -> Self {
        GravitonState { cutoff, kind: StateKind::Thermal { beta_g } }
    }

    pub fn coherent(cutoff: f64, alpha: f64) -> Self {
        GravitonState { cutoff, kind: StateKind::Coherent { alpha, cutoff: None } }
    }

    pub fn squeezed(cutoff: f64, r: f64, phi: f64) -> Self {
        GravitonState { cutoff, kind: StateKind::Squeezed { r, phi, cutoff: None } }
    }

    /// Sets Λ̃_g or Λ̄_g. No effect on vacuum and thermal states.
    pub fn with_state_cutoff(mut self, c: f64) -> Self {
        match &mut self.kind {
            StateKind::Coherent { cutoff, .. } | StateKind::Squeezed { cutoff, .. } => *cutoff = Some(c),
            _ => {}
        }
        self
    }

    /// Λ̃_g / Λ̄_g for coherent and squeezed states, Λ_g otherwise.
    pub fn state_cutoff(&self) -> f64 {
        match self.kind {
            StateKind::Coherent { cutoff, .. } | StateKind::Squeezed { cutoff, .. } => {
                cutoff.unwrap_or(self.cutoff)
            }
            _ => self.cutoff,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            StateKind::Vacuum => "vacuum",
            StateKind::Thermal { .. } => "thermal",
            StateKind::Coherent { .. } => "coherent",
            StateKind::Squeezed { .. } => "squeezed",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::arg(format!("{what} must be positive and finite, got {v}")))
            }
        };
        positive(self.cutoff, "cutoff")?;
        match self.kind {
            StateKind::Vacuum => Ok(()),
            StateKind::Thermal { beta_g } => positive(beta_g, "beta_g"),
            StateKind::Coherent { alpha, cutoff } => {
                if !alpha.is_finite() {
                    return Err(Error::arg("alpha must be finite"));
                }
                cutoff.map_or(Ok(()), |c| positive(c, "coherent cutoff"))
            }
            StateKind::Squeezed { r, phi, cutoff } => {
                if !(r >= 0.0 && r.is_finite()) {
                    return Err(Error::arg(format!("squeeze r must be ≥ 0, got {r}")));
                }
                if !phi.is_finite() {
                    return Err(Error::arg("phi must be finite"));
                }
                cutoff.map_or(Ok(()), |c| positive(c, "squeezed cutoff"))
            }
        }
    }
}

/// How the internal-bath kernel is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum BathMode {
    /// High-temperature limit `N_int = (πλ²γ/β) δ(t−t′)`. The caller asserts
    /// that β is small against every time scale of interest.
    WhiteNoise,
    /// `(λ²γ/2) ∫₀^{Λ_int} dϖ ϖ coth(ϖβ/2) cos ϖ(t−t′)`. The integral diverges
    /// without `cutoff_int`.
    FullIntegral {
        #[serde(default)]
        cutoff_int: Option<f64>,
    },
}

/// Ohmic bath of internal degrees of freedom, `Ω(ϖ) = γϖ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InternalBath {
    pub lambda: f64,
    pub gamma: f64,
    pub beta: f64,
    #[serde(default = "white_noise")]
    pub mode: BathMode,
}

fn white_noise() -> BathMode {
    BathMode::WhiteNoise
}

impl InternalBath {
    pub fn white_noise(lambda: f64, gamma: f64, beta: f64) -> Self {
        InternalBath { lambda, gamma, beta, mode: BathMode::WhiteNoise }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::arg(format!("lambda must be ≥ 0, got {}", self.lambda)));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::arg(format!("gamma must be ≥ 0, got {}", self.gamma)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::arg(format!("beta must be positive, got {}", self.beta)));
        }
        if let BathMode::FullIntegral { cutoff_int } = self.mode {
            match cutoff_int {
                None => {
                    return Err(Error::arg(
                        "full-integral bath needs cutoff_int: the integral diverges at its upper limit",
                    ))
                }
                Some(c) if !(c > 0.0 && c.is_finite()) => {
                    return Err(Error::arg("cutoff_int must be positive"))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Weight of the white-noise delta, `πλ²γ/β`.
    pub fn delta_weight(&self) -> f64 {
        PI * self.lambda * self.lambda * self.gamma / self.beta
    }
}

/// Value of `N_int(t, t′)`: either a delta weight or an ordinary number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntKernel {
    /// `weight · δ(t − t′)`; consumers integrate it analytically.
    Delta { weight: f64 },
    Value(f64),
}

/// A graviton kernel evaluation, `scalar · tensor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSample {
    pub scalar: f64,
    pub tensor: IsotropicRank4,
    pub t: f64,
    pub t_prime: f64,
}

impl KernelSample {
    pub fn new(state: &GravitonState, m0: f64, t: f64, t_prime: f64) -> Self {
        KernelSample {
            scalar: noise_scalar(state, m0, t, t_prime),
            tensor: IsotropicRank4::GRAVITON,
            t,
            t_prime,
        }
    }

    /// Full kernel component `N^{ijkl}`, indices 1..=3.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> Result<f64> {
        Ok(self.scalar * self.tensor.component(i, j, k, l)?)
    }
}

fn vacuum_prefactor(m0: f64, cutoff: f64) -> f64 {
    m0 * m0 * cutoff.powi(6) / (15.0 * PI)
}

fn thermal_prefactor(m0: f64, beta_g: f64) -> f64 {
    8.0 * m0 * m0 * PI.powi(5) / beta_g.powi(6)
}

/// Scalar factor of `N_g^{ijkl}(t, t′)`.
///
/// The coherent term is the printed mode integral reduced with
/// `cos a cos b = ½[cos(a−b) + cos(a+b)]`.
pub fn noise_scalar(state: &GravitonState, m0: f64, t: f64, t_prime: f64) -> f64 {
    let lam = state.cutoff;
    let d = t - t_prime;
    let vac = vacuum_prefactor(m0, lam) * special::f(lam * d);
    match state.kind {
        StateKind::Vacuum => vac,
        StateKind::Thermal { beta_g } => {
            vac + thermal_prefactor(m0, beta_g) * special::f_th(PI * d / beta_g)
        }
        StateKind::Coherent { alpha, .. } => {
            let lt = state.state_cutoff();
            let s = t + t_prime;
            vac + alpha * alpha * vacuum_prefactor(m0, lt)
                * 0.5
                * (special::f(lt * d) + special::f(lt * s))
        }
        StateKind::Squeezed { r, phi, .. } => {
            let lb = state.state_cutoff();
            (2.0 * r).cosh() * vac
                - vacuum_prefactor(m0, lb) * (2.0 * r).sinh() * special::f_phase(lb * (t + t_prime), phi)
        }
    }
}

/// `lim_{t′→t}` of [`noise_scalar`], taken analytically.
pub fn noise_equal_time(state: &GravitonState, m0: f64, t: f64) -> f64 {
    let vac = vacuum_prefactor(m0, state.cutoff) / 6.0;
    match state.kind {
        StateKind::Vacuum => vac,
        StateKind::Thermal { beta_g } => vac + thermal_prefactor(m0, beta_g) * (2.0 / 945.0),
        StateKind::Coherent { alpha, .. } => {
            let lt = state.state_cutoff();
            vac + alpha * alpha * vacuum_prefactor(m0, lt)
                * 0.5
                * (1.0 / 6.0 + special::f(2.0 * lt * t))
        }
        StateKind::Squeezed { r, phi, .. } => {
            let lb = state.state_cutoff();
            (2.0 * r).cosh() * vac
                - vacuum_prefactor(m0, lb) * (2.0 * r).sinh() * special::f_phase(2.0 * lb * t, phi)
        }
    }
}

/// `N_int(t, t′)` with the default quadrature settings.
pub fn n_int(bath: &InternalBath, t: f64, t_prime: f64) -> Result<IntKernel> {
    n_int_with(bath, t, t_prime, &QuadratureSpec::default())
}

pub fn n_int_with(bath: &InternalBath, t: f64, t_prime: f64, spec: &QuadratureSpec) -> Result<IntKernel> {
    bath.validate()?;
    match bath.mode {
        BathMode::WhiteNoise => Ok(IntKernel::Delta { weight: bath.delta_weight() }),
        BathMode::FullIntegral { cutoff_int } => {
            let cut = cutoff_int.expect("validated");
            let pre = 0.5 * bath.lambda * bath.lambda * bath.gamma;
            if pre == 0.0 {
                return Ok(IntKernel::Value(0.0));
            }
            let tau = (t - t_prime).abs();
            let beta = bath.beta;
            let mut spec = *spec;
            if tau > 0.0 {
                spec = spec.with_min_period(2.0 * PI / tau);
            }
            let est = integrate_1d(|w| w_coth(w, beta) * (w * tau).cos(), 0.0, cut, &spec)?;
            Ok(IntKernel::Value(pre * est.value))
        }
    }
}

/// `ϖ coth(ϖβ/2)`, finite (`2/β`) at `ϖ = 0`.
pub(crate) fn w_coth(w: f64, beta: f64) -> f64 {
    let h = 0.5 * w * beta;
    if h.abs() < 1e-4 {
        (2.0 / beta) * (1.0 + h * h / 3.0)
    } else {
        w / h.tanh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, SymmetricEigen};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn states() -> Vec<GravitonState> {
        vec![
            GravitonState::vacuum(1.3),
            GravitonState::thermal(1.3, 0.7),
            GravitonState::coherent(1.3, 0.8).with_state_cutoff(0.9),
            GravitonState::squeezed(1.3, 0.4, 0.6),
        ]
    }

    #[test]
    fn vacuum_equal_time_value() {
        let s = GravitonState::vacuum(2.0);
        let want = 3.0 * 3.0 * 64.0 / (90.0 * PI);
        assert!((noise_scalar(&s, 3.0, 0.0, 0.0) - want).abs() < 1e-14 * want);
        for t in [0.0, 1.0, 10.0] {
            assert_eq!(noise_equal_time(&s, 3.0, t), noise_scalar(&s, 3.0, t, t));
        }
    }

    #[test]
    fn symmetric_in_time_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in states() {
            for _ in 0..50 {
                let t: f64 = rng.random_range(0.0..10.0);
                let u: f64 = rng.random_range(0.0..10.0);
                let a = noise_scalar(&s, 1.0, t, u);
                let b = noise_scalar(&s, 1.0, u, t);
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300), "{}", s.name());
            }
        }
    }

    #[test]
    fn stationarity_only_for_vacuum_and_thermal() {
        for s in states() {
            let a = noise_scalar(&s, 1.0, 1.0, 2.5);
            let b = noise_scalar(&s, 1.0, 4.0, 5.5);
            match s.kind {
                StateKind::Vacuum | StateKind::Thermal { .. } => assert!((a - b).abs() <= 1e-14 * a.abs()),
                _ => assert!((a - b).abs() > 1e-6 * a.abs(), "{}", s.name()),
            }
        }
    }

    #[test]
    fn equal_time_matches_diagonal() {
        for s in states() {
            for t in [0.0, 0.3, 1.0, 7.0] {
                let a = noise_equal_time(&s, 1.1, t);
                let b = noise_scalar(&s, 1.1, t, t);
                assert!((a - b).abs() <= 1e-12 * a.abs(), "{} at {t}: {a} vs {b}", s.name());
            }
        }
    }

    #[test]
    fn squeezed_without_squeezing_is_vacuum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = GravitonState::vacuum(2.0);
        let s = GravitonState::squeezed(2.0, 0.0, 1.2);
        for _ in 0..20 {
            let t: f64 = rng.random_range(0.0..5.0);
            let u: f64 = rng.random_range(0.0..5.0);
            assert_eq!(noise_scalar(&s, 1.0, t, u), noise_scalar(&v, 1.0, t, u));
        }
    }

    #[test]
    fn thermal_tends_to_vacuum() {
        let v = GravitonState::vacuum(1.0);
        let th = GravitonState::thermal(1.0, 1e4);
        for (t, u) in [(0.0, 0.0), (1.0, 2.0), (3.0, 0.5)] {
            let a = noise_scalar(&v, 1.0, t, u);
            let b = noise_scalar(&th, 1.0, t, u);
            assert!((a - b).abs() <= 1e-8 * a.abs());
        }
    }

    #[test]
    fn coherent_matches_mode_integral() {
        let s = GravitonState::coherent(1.0, 1.0);
        let vac = noise_scalar(&GravitonState::vacuum(1.0), 1.0, 1.0, 2.0);
        let est = integrate_1d(
            |w: f64| w.powi(5) * w.cos() * (2.0 * w).cos(),
            0.0,
            1.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        let want = vac + est.value / (15.0 * PI);
        let got = noise_scalar(&s, 1.0, 1.0, 2.0);
        assert!((got - want).abs() <= 1e-9 * want.abs(), "{got} vs {want}");
    }

    #[test]
    fn grid_covariance_is_psd() {
        for s in [GravitonState::vacuum(1.0), GravitonState::thermal(1.0, 2.0)] {
            let n = 64;
            let m = DMatrix::from_fn(n, n, |a, b| {
                noise_scalar(&s, 1.0, a as f64 * 0.2, b as f64 * 0.2)
            });
            let eig = SymmetricEigen::new(m).eigenvalues;
            let max = eig.max();
            assert!(eig.min() >= -1e-8 * max, "{}: {}", s.name(), eig.min());
        }
    }

    #[test]
    fn internal_bath_kernel() {
        let b = InternalBath::white_noise(1.0, 1.0, 1.0);
        assert_eq!(n_int(&b, 0.0, 0.0).unwrap(), IntKernel::Delta { weight: PI });

        let off = InternalBath::white_noise(0.0, 1.0, 1.0);
        assert_eq!(n_int(&off, 0.0, 0.0).unwrap(), IntKernel::Delta { weight: 0.0 });

        let missing = InternalBath { mode: BathMode::FullIntegral { cutoff_int: None }, ..b };
        assert!(n_int(&missing, 0.0, 1.0).is_err());

        // β → ∞: coth → 1 and the integral has a closed form.
        let (cut, tau) = (5.0, 0.7);
        let cold = InternalBath {
            lambda: 1.0,
            gamma: 2.0,
            beta: 1e6,
            mode: BathMode::FullIntegral { cutoff_int: Some(cut) },
        };
        let want = (cut * (cut * tau).sin() / tau + ((cut * tau).cos() - 1.0) / (tau * tau)) * 1.0;
        match n_int(&cold, 1.0, 1.0 + tau).unwrap() {
            IntKernel::Value(v) => assert!((v - want).abs() < 1e-9 * want.abs(), "{v} vs {want}"),
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn validation() {
        assert!(GravitonState::vacuum(0.0).validate().is_err());
        assert!(GravitonState::thermal(1.0, -1.0).validate().is_err());
        assert!(GravitonState::squeezed(1.0, -0.1, 0.0).validate().is_err());
        assert!(GravitonState::coherent(1.0, 0.5).with_state_cutoff(0.0).validate().is_err());
        assert!(InternalBath::white_noise(1.0, 1.0, 0.0).validate().is_err());
        assert!(InternalBath::white_noise(-1.0, 1.0, 1.0).validate().is_err());
    }

    #[test]
    fn kernel_sample_components() {
        let s = GravitonState::vacuum(1.0);
        let k = KernelSample::new(&s, 1.0, 0.0, 0.0);
        let c = k.component(1, 1, 1, 1).unwrap();
        assert!((c - 4.0 / (90.0 * PI)).abs() < 1e-15);
        assert!(k.component(0, 1, 1, 1).is_err());
    }
}
