//! Planck ↔ SI conversion at the input/output boundary.
//!
//! Everything inside the library runs with ħ = c = G = k_B = 1. In SI mode
//! masses are in kg, times in s, cutoffs in 1/s, lengths in m, velocities in
//! m/s and temperatures in K. The Ohmic constant γ has no fixed SI dimension
//! in the restored formulas and is always taken in Planck units.

use serde::{Deserialize, Serialize};

use crate::decoherence::DecoherenceReport;
use crate::error::{Error, Result};
use crate::special::KappaKind;

/// CODATA 2018 exact or recommended values.
pub mod constants {
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const C: f64 = 299_792_458.0;
    pub const G: f64 = 6.674_30e-11;
    pub const K_B: f64 = 1.380_649e-23;

    /// `M_pl = √(ħc/G)` in kg.
    pub fn planck_mass() -> f64 {
        (HBAR * C / G).sqrt()
    }
    /// `t_pl = √(ħG/c⁵)` in s.
    pub fn planck_time() -> f64 {
        (HBAR * G / C.powi(5)).sqrt()
    }
    pub fn planck_length() -> f64 {
        C * planck_time()
    }
    /// `T_pl = M_pl c² / k_B` in K.
    pub fn planck_temperature() -> f64 {
        planck_mass() * C * C / K_B
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitSystem {
    #[default]
    Planck,
    Si,
}

impl UnitSystem {
    fn factor(self, si_per_planck: f64) -> f64 {
        match self {
            UnitSystem::Planck => 1.0,
            UnitSystem::Si => si_per_planck,
        }
    }

    pub fn mass_to_planck(self, m: f64) -> f64 {
        m / self.factor(constants::planck_mass())
    }
    pub fn mass_from_planck(self, m: f64) -> f64 {
        m * self.factor(constants::planck_mass())
    }
    pub fn time_to_planck(self, t: f64) -> f64 {
        t / self.factor(constants::planck_time())
    }
    pub fn time_from_planck(self, t: f64) -> f64 {
        t * self.factor(constants::planck_time())
    }
    /// Cutoffs and other inverse times.
    pub fn rate_to_planck(self, r: f64) -> f64 {
        r * self.factor(constants::planck_time())
    }
    pub fn rate_from_planck(self, r: f64) -> f64 {
        r / self.factor(constants::planck_time())
    }
    pub fn length_to_planck(self, l: f64) -> f64 {
        l / self.factor(constants::planck_length())
    }
    pub fn length_from_planck(self, l: f64) -> f64 {
        l * self.factor(constants::planck_length())
    }
    pub fn velocity_to_planck(self, v: f64) -> f64 {
        v / self.factor(constants::C)
    }
    pub fn velocity_from_planck(self, v: f64) -> f64 {
        v * self.factor(constants::C)
    }
    pub fn temperature_to_planck(self, t: f64) -> f64 {
        t / self.factor(constants::planck_temperature())
    }
    pub fn temperature_from_planck(self, t: f64) -> f64 {
        t * self.factor(constants::planck_temperature())
    }

    /// Inverse temperature `β = 1/k_BT` in Planck units.
    pub fn beta_from_temperature(self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::arg(format!("temperature must be positive, got {t}")));
        }
        Ok(1.0 / self.temperature_to_planck(t))
    }

    /// `(m0/M_pl)²`, the factor the restored rates carry.
    pub fn mass_ratio_squared(self, m0: f64) -> f64 {
        let r = self.mass_to_planck(m0);
        r * r
    }
}

/// Converts a Planck-unit report for output. Rates are dimensionless and
/// unchanged; `tau_dec` is converted to seconds in SI mode.
pub fn restore_units(report: &DecoherenceReport, units: UnitSystem) -> DecoherenceReport {
    let mut out = report.clone();
    out.tau_dec = report.tau_dec.map(|t| units.time_from_planck(t));
    out
}

/// Inputs of the restored κ forms, in the given unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestoredKappaInputs {
    /// Ohmic constant, Planck units.
    pub gamma: f64,
    pub m0: f64,
    /// Bath temperature T.
    pub temperature: f64,
    /// Λ_g, Λ̃_g or Λ̄_g as the κ requires.
    pub cutoff: Option<f64>,
    /// Graviton temperature T_g (thermal κ only).
    pub graviton_temperature: Option<f64>,
}

/// `ϰ ≡ k_Bγπ/ħ³c⁴m0²`, expressed in Planck units.
pub fn varkappa(gamma: f64, m0: f64, units: UnitSystem) -> f64 {
    gamma * std::f64::consts::PI / units.mass_ratio_squared(m0)
}

/// κ = ϰΛ_gT/108, κ_th = (4π/189)ϰk_BT_gT, κ_coh = ϰΛ̃_gT/192,
/// κ_sq = (3/2)ϰΛ̄_gT.
pub fn kappa_restored(kind: KappaKind, inputs: &RestoredKappaInputs, units: UnitSystem) -> Result<f64> {
    if !(inputs.m0 > 0.0) {
        return Err(Error::arg("m0 must be positive"));
    }
    let vk = varkappa(inputs.gamma, inputs.m0, units);
    let t = units.temperature_to_planck(inputs.temperature);
    let cutoff = || {
        inputs
            .cutoff
            .map(|c| units.rate_to_planck(c))
            .ok_or_else(|| Error::arg(format!("{kind:?} κ needs a cutoff")))
    };
    Ok(match kind {
        KappaKind::Vacuum => vk * cutoff()? * t / 108.0,
        KappaKind::Coherent => vk * cutoff()? * t / 192.0,
        KappaKind::Squeezed => 1.5 * vk * cutoff()? * t,
        KappaKind::Thermal => {
            let tg = inputs
                .graviton_temperature
                .ok_or_else(|| Error::arg("thermal κ needs the graviton temperature"))?;
            4.0 * std::f64::consts::PI / 189.0 * vk * units.temperature_to_planck(tg) * t
        }
    })
}
