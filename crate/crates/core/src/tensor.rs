//! Polarization-tensor algebra for transverse-traceless gravitons.
//!
//! The production path works with [`IsotropicRank4`], the two-coefficient
//! representation `a(δ^{ik}δ^{jl}+δ^{il}δ^{jk}) + b δ^{ij}δ^{kl}`. Dense
//! 81-entry arrays ([`DenseRank4`]) exist for the oracles: the per-direction
//! polarization sum and its numerical integral over the sphere.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{pairwise_sum, GaussLegendre};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpatialVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpatialVector {
    pub const ZERO: SpatialVector = SpatialVector { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        SpatialVector { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        SpatialVector::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: SpatialVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, o: SpatialVector) -> SpatialVector {
        SpatialVector::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> SpatialVector {
        SpatialVector::new(s * self.x, s * self.y, s * self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn ensure_finite(self, what: &str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::arg(format!("{what} has a non-finite component")))
        }
    }
}

/// Direction on the unit sphere. The norm is 1 to within 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector(SpatialVector);

impl UnitVector {
    pub const NORM_TOL: f64 = 1e-12;

    /// Accepts `v` only if it is already normalized.
    pub fn new(v: SpatialVector) -> Result<Self> {
        let n = v.norm();
        if !v.is_finite() || (n - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::arg(format!("direction has norm {n}, expected 1")));
        }
        Ok(UnitVector(v))
    }

    pub fn normalize(v: SpatialVector) -> Result<Self> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::arg("cannot normalize a zero or non-finite vector"));
        }
        Ok(UnitVector(v.scale(1.0 / n)))
    }

    /// Polar angle θ from +z and azimuth φ.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        UnitVector(SpatialVector::new(st * cp, st * sp, ct))
    }

    pub fn vector(self) -> SpatialVector {
        self.0
    }

    /// Two unit vectors that complete `self` to a right-handed orthonormal
    /// triad. The seed axis is the coordinate axis along which `self` has its
    /// smallest component, so the cross product never degenerates.
    pub fn transverse_dyad(self) -> (SpatialVector, SpatialVector) {
        let k = self.0;
        let a = [k.x.abs(), k.y.abs(), k.z.abs()];
        let axis = if a[0] <= a[1] && a[0] <= a[2] {
            SpatialVector::new(1.0, 0.0, 0.0)
        } else if a[1] <= a[2] {
            SpatialVector::new(0.0, 1.0, 0.0)
        } else {
            SpatialVector::new(0.0, 0.0, 1.0)
        };
        let e1 = k.cross(axis);
        let e1 = e1.scale(1.0 / e1.norm());
        let e2 = k.cross(e1);
        (e1, e2)
    }
}

/// `a(δ^{ik}δ^{jl}+δ^{il}δ^{jk}) + b δ^{ij}δ^{kl}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsotropicRank4 {
    pub a: f64,
    pub b: f64,
}

#[inline]
fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

impl IsotropicRank4 {
    /// The tensor obtained from the solid-angle integral of the graviton
    /// polarization sum, up to the factor 8π/15.
    pub const GRAVITON: IsotropicRank4 = IsotropicRank4 { a: 3.0, b: -2.0 };

    pub const fn new(a: f64, b: f64) -> Self {
        IsotropicRank4 { a, b }
    }

    /// Component with 1-based indices.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> Result<f64> {
        for idx in [i, j, k, l] {
            if !(1..=3).contains(&idx) {
                return Err(Error::arg(format!("tensor index {idx} outside 1..=3")));
            }
        }
        Ok(self.component0(i - 1, j - 1, k - 1, l - 1))
    }

    /// Component with 0-based indices; callers guarantee range.
    #[inline]
    pub(crate) fn component0(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.a * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k))
            + self.b * delta(i, j) * delta(k, l)
    }

    /// `P^{ijkl} a_i b_j c_k d_l`.
    pub fn contract4(
        &self,
        a: SpatialVector,
        b: SpatialVector,
        c: SpatialVector,
        d: SpatialVector,
    ) -> f64 {
        self.a * (a.dot(c) * b.dot(d) + a.dot(d) * b.dot(c)) + self.b * a.dot(b) * c.dot(d)
    }

    /// `𝒦 = P^{ijkl} Ξ_i v_j Ξ_k v_l = a[(Ξ·Ξ)(v·v) + (Ξ·v)²] + b(Ξ·v)²`.
    pub fn contract_k(&self, xi: SpatialVector, v: SpatialVector) -> f64 {
        let xv = xi.dot(v);
        self.a * (xi.dot(xi) * v.dot(v) + xv * xv) + self.b * xv * xv
    }

    pub fn scaled(&self, s: f64) -> IsotropicRank4 {
        IsotropicRank4::new(self.a * s, self.b * s)
    }

    pub fn to_dense(&self) -> DenseRank4 {
        let mut out = DenseRank4::zeros();
        for (i, j, k, l) in DenseRank4::indices() {
            out.set(i, j, k, l, self.component0(i, j, k, l));
        }
        out
    }
}

/// Dense 3×3×3×3 array, 0-based indices, row-major in (i, j, k, l).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseRank4(pub [f64; 81]);

impl DenseRank4 {
    pub fn zeros() -> Self {
        DenseRank4([0.0; 81])
    }

    #[inline]
    fn offset(i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * 3 + j) * 3 + k) * 3 + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.0[Self::offset(i, j, k, l)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.0[Self::offset(i, j, k, l)] = v;
    }

    /// All 81 index tuples in storage order.
    pub fn indices() -> impl Iterator<Item = (usize, usize, usize, usize)> {
        (0..81).map(|n| (n / 27, (n / 9) % 3, (n / 3) % 3, n % 3))
    }

    pub fn scale(&self, s: f64) -> DenseRank4 {
        let mut out = self.clone();
        out.0.iter_mut().for_each(|x| *x *= s);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &DenseRank4) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Explicit 81-term sum `T^{ijkl} a_i b_j c_k d_l`.
    pub fn contract4(
        &self,
        a: SpatialVector,
        b: SpatialVector,
        c: SpatialVector,
        d: SpatialVector,
    ) -> f64 {
        let (a, b, c, d) = (a.to_array(), b.to_array(), c.to_array(), d.to_array());
        let terms: Vec<f64> = Self::indices()
            .map(|(i, j, k, l)| self.get(i, j, k, l) * a[i] * b[j] * c[k] * d[l])
            .collect();
        pairwise_sum(&terms)
    }
}

/// `Σ_s ε_s^{ij} ε_s^{kl}` for the plus and cross polarizations built from
/// the transverse dyad of `khat`.
pub fn polarization_sum(khat: UnitVector) -> DenseRank4 {
    let (e1, e2) = khat.transverse_dyad();
    let (e1, e2) = (e1.to_array(), e2.to_array());
    let mut plus = [[0.0; 3]; 3];
    let mut cross = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            plus[i][j] = e1[i] * e1[j] - e2[i] * e2[j];
            cross[i][j] = e1[i] * e2[j] + e2[i] * e1[j];
        }
    }
    let mut out = DenseRank4::zeros();
    for (i, j, k, l) in DenseRank4::indices() {
        out.set(i, j, k, l, plus[i][j] * plus[k][l] + cross[i][j] * cross[k][l]);
    }
    out
}

/// `P^{ik}P^{jl} + P^{il}P^{jk} − P^{ij}P^{kl}` with `P_{ij} = δ_{ij} − k̂_i k̂_j`.
pub fn projector_polarization_sum(khat: UnitVector) -> DenseRank4 {
    let k = khat.vector().to_array();
    let p = |i: usize, j: usize| delta(i, j) - k[i] * k[j];
    let mut out = DenseRank4::zeros();
    for (i, j, k_, l) in DenseRank4::indices() {
        out.set(
            i,
            j,
            k_,
            l,
            p(i, k_) * p(j, l) + p(i, l) * p(j, k_) - p(i, j) * p(k_, l),
        );
    }
    out
}

/// How to integrate the polarization sum over the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereQuadrature {
    /// Gauss–Legendre in cos θ (order `theta_order`) times the uniform rule
    /// in φ with `phi_points` nodes.
    Product { theta_order: usize, phi_points: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for SphereQuadrature {
    fn default() -> Self {
        SphereQuadrature::Product {
            theta_order: 32,
            phi_points: 64,
        }
    }
}

/// Result of [`angular_integral_oracle`]. `residual` is the convergence
/// estimate: the difference to the next coarser product rule, or the largest
/// componentwise standard error for Monte Carlo.
#[derive(Debug, Clone)]
pub struct AngularIntegral {
    pub tensor: DenseRank4,
    pub residual: f64,
}

fn product_sphere(theta_order: usize, phi_points: usize) -> Result<DenseRank4> {
    if phi_points < 1 {
        return Err(Error::arg("phi_points must be positive"));
    }
    let rule = GaussLegendre::new(theta_order)?;
    let dphi = 2.0 * PI / phi_points as f64;
    let mut acc: Vec<Vec<f64>> = (0..81).map(|_| Vec::with_capacity(rule.len() * phi_points)).collect();
    for (&ct, &w) in rule.nodes().iter().zip(rule.weights()) {
        let theta = ct.clamp(-1.0, 1.0).acos();
        for m in 0..phi_points {
            let phi = (m as f64 + 0.5) * dphi;
            let s = polarization_sum(UnitVector::from_angles(theta, phi));
            for (n, slot) in acc.iter_mut().enumerate() {
                slot.push(w * dphi * s.0[n]);
            }
        }
    }
    let mut out = DenseRank4::zeros();
    for (n, terms) in acc.iter().enumerate() {
        out.0[n] = pairwise_sum(terms);
    }
    Ok(out)
}

fn monte_carlo_sphere(samples: usize, seed: u64) -> Result<AngularIntegral> {
    if samples < 2 {
        return Err(Error::arg("Monte-Carlo sphere integration needs at least 2 samples"));
    }
    const CHUNK: usize = 16_384;
    let n_chunks = samples.div_ceil(CHUNK);
    // Per chunk: sums and sums of squares of all 81 components.
    let partial: Vec<([f64; 81], [f64; 81])> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut sum = [0.0; 81];
            let mut sq = [0.0; 81];
            for _ in 0..count {
                let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
                let phi: f64 = 2.0 * PI * rng.random::<f64>();
                let s = polarization_sum(UnitVector::from_angles(z.clamp(-1.0, 1.0).acos(), phi));
                for n in 0..81 {
                    sum[n] += s.0[n];
                    sq[n] += s.0[n] * s.0[n];
                }
            }
            (sum, sq)
        })
        .collect();
    let nf = samples as f64;
    let mut out = DenseRank4::zeros();
    let mut residual = 0.0_f64;
    for n in 0..81 {
        let s: Vec<f64> = partial.iter().map(|p| p.0[n]).collect();
        let q: Vec<f64> = partial.iter().map(|p| p.1[n]).collect();
        let mean = pairwise_sum(&s) / nf;
        let var = (pairwise_sum(&q) / nf - mean * mean).max(0.0);
        out.0[n] = 4.0 * PI * mean;
        residual = residual.max(4.0 * PI * (var / nf).sqrt());
    }
    Ok(AngularIntegral {
        tensor: out,
        residual,
    })
}

/// Numerically integrates [`polarization_sum`] over the unit sphere.
///
/// For the product rule, convergence is checked against the rule with half
/// the θ order (when that order is tabulated) and a residual above `tol` is a
/// [`Error::Tolerance`]. Monte Carlo never fails on tolerance; its residual is
/// the largest standard error.
pub fn angular_integral_oracle(method: SphereQuadrature, tol: f64) -> Result<AngularIntegral> {
    match method {
        SphereQuadrature::Product {
            theta_order,
            phi_points,
        } => {
            let fine = product_sphere(theta_order, phi_points)?;
            let coarse_order = GaussLegendre::supported_orders()
                .iter()
                .copied()
                .filter(|&o| o < theta_order)
                .max();
            let residual = match coarse_order {
                Some(o) => fine.max_abs_diff(&product_sphere(o, phi_points.max(2 * o))?),
                None => 0.0,
            };
            if residual > tol {
                return Err(Error::Tolerance {
                    context: "sphere quadrature of the polarization sum".into(),
                    estimate: fine.max_abs(),
                    residual,
                });
            }
            Ok(AngularIntegral {
                tensor: fine,
                residual,
            })
        }
        SphereQuadrature::MonteCarlo { samples, seed } => monte_carlo_sphere(samples, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: IsotropicRank4 = IsotropicRank4::GRAVITON;

    #[test]
    fn components_by_substitution() {
        assert_eq!(P.component(1, 1, 1, 1).unwrap(), 4.0);
        assert_eq!(P.component(1, 1, 2, 2).unwrap(), -2.0);
        assert_eq!(P.component(1, 2, 1, 2).unwrap(), 3.0);
        assert!(P.component(0, 1, 1, 1).is_err());
        assert!(P.component(1, 1, 1, 4).is_err());
    }

    #[test]
    fn component_symmetries() {
        for (i, j, k, l) in DenseRank4::indices() {
            let v = P.component0(i, j, k, l);
            assert_eq!(v, P.component0(j, i, k, l));
            assert_eq!(v, P.component0(i, j, l, k));
            assert_eq!(v, P.component0(k, l, i, j));
        }
    }

    #[test]
    fn contract_k_examples() {
        let x = SpatialVector::new(1.0, 0.0, 0.0);
        let y = SpatialVector::new(0.0, 1.0, 0.0);
        assert_eq!(P.contract_k(x, x), 4.0);
        assert_eq!(P.contract_k(x, y), 3.0);
    }

    #[test]
    fn contract_k_matches_81_term_sum_for_tilted_pair() {
        // Brute-force oracle: explicit componentwise sum.
        let xi = SpatialVector::new(1.0, 1.0, 0.0);
        let v = SpatialVector::new(1.0, -1.0, 0.0);
        let (a, b) = (xi.to_array(), v.to_array());
        let mut brute = 0.0;
        for (i, j, k, l) in DenseRank4::indices() {
            brute += P.component0(i, j, k, l) * a[i] * b[j] * a[k] * b[l];
        }
        assert_eq!(brute, 12.0);
        assert_eq!(P.contract_k(xi, v), brute);
    }

    #[test]
    fn dyad_is_orthonormal_at_poles_and_generic_points() {
        for k in [
            SpatialVector::new(0.0, 0.0, 1.0),
            SpatialVector::new(0.0, 0.0, -1.0),
            SpatialVector::new(1.0, 0.0, 0.0),
            SpatialVector::new(0.3, -0.4, 0.5),
        ] {
            let k = UnitVector::normalize(k).unwrap();
            let (e1, e2) = k.transverse_dyad();
            assert!((e1.norm() - 1.0).abs() < 1e-14);
            assert!((e2.norm() - 1.0).abs() < 1e-14);
            assert!(e1.dot(e2).abs() < 1e-14);
            assert!(e1.dot(k.vector()).abs() < 1e-14);
            assert!(e2.dot(k.vector()).abs() < 1e-14);
        }
    }

    #[test]
    fn polarization_sum_along_z() {
        let k = UnitVector::new(SpatialVector::new(0.0, 0.0, 1.0)).unwrap();
        let s = polarization_sum(k);
        assert!((s.get(0, 0, 0, 0) - 1.0).abs() < 1e-15);
        assert_eq!(s.get(0, 0, 2, 2), 0.0);
        assert!(s.max_abs_diff(&projector_polarization_sum(k)) < 1e-14);
    }

    #[test]
    fn rejects_non_unit_direction() {
        assert!(UnitVector::new(SpatialVector::new(1.0, 1.0, 0.0)).is_err());
        assert!(UnitVector::normalize(SpatialVector::ZERO).is_err());
    }

    #[test]
    fn product_rule_reproduces_closed_form() {
        let got = angular_integral_oracle(SphereQuadrature::default(), 1e-10).unwrap();
        let want = P.to_dense().scale(8.0 * PI / 15.0);
        assert!(got.tensor.max_abs_diff(&want) <= 1e-12);
        assert!(got.tensor.get(0, 0, 0, 1).abs() < 1e-14);
    }

    #[test]
    fn unsupported_order_is_an_argument_error() {
        let r = angular_integral_oracle(
            SphereQuadrature::Product {
                theta_order: 17,
                phi_points: 34,
            },
            1e-10,
        );
        assert!(matches!(r, Err(Error::Argument(_))));
    }
}
