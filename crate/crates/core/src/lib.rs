//! Noise kernels, decoherence rates and decoherence times for a composite
//! particle held in a spatial superposition while coupled to a weak quantized
//! gravitational field and to an Ohmic bath of internal degrees of freedom.
//!
//! Every closed form is paired with an independent numerical route (sphere
//! quadrature, adaptive quadrature, exact Maclaurin series, Monte-Carlo
//! sampling of the stochastic noise field) so the two can be compared.
//!
//! All physics is evaluated in Planck units (ħ = c = G = k_B = 1); see
//! [`units`] for the SI boundary.

// `!(x > 0.0)` is used on purpose so NaN is rejected with the same branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decoherence;
pub mod error;
pub mod kernels;
pub mod quadrature;
pub mod special;
pub mod stochastic;
pub mod tensor;
pub mod units;

pub use decoherence::{
    gamma_closed, gamma_quadrature, gamma_state_terms, tau_dec_closed, tau_dec_root, DecoherenceReport, Method,
    PathTemplate, SuperpositionPath,
};
pub use error::{Error, Result};
pub use kernels::{
    n_int, noise_equal_time, noise_scalar, BathMode, GravitonState, InternalBath, IntKernel,
    KernelSample, StateKind,
};
pub use quadrature::{Estimate, QuadratureSpec};
pub use special::SeriesPolicy;
pub use tensor::{IsotropicRank4, SpatialVector, UnitVector};
pub use units::UnitSystem;
