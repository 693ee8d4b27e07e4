//! Monte-Carlo check of the influence-functional exponent.
//!
//! The graviton noise is replaced by a Gaussian symmetric tensor field
//! `𝒩_ij(t)` with covariance `N_g^{ijkl}(t, t′)`. For the path phase
//! `Φ = ∫ dt 𝒩^{ij}(Ξ_iΔξ_j + Δξ_iΞ_j)` the Gaussian identity gives
//! `⟨cos Φ⟩ = e^{−⟨Φ²⟩/2} = e^{−Γ_grav}`, so `−ln mean(cos Φ)` estimates
//! the graviton term.
//!
//! Since `N = scalar(t, t′)·P`, the covariance is the Kronecker product of an
//! n×n time matrix and a 6×6 tensor matrix in an orthonormal basis of
//! symmetric 3×3 tensors. Each factor is diagonalized separately.

use nalgebra::{DMatrix, Matrix3, Matrix6, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoherence::SuperpositionPath;
use crate::error::{Error, Result};
use crate::kernels::{noise_scalar, GravitonState};
use crate::quadrature::pairwise_sum;
use crate::tensor::IsotropicRank4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MCConfig {
    /// Number of time intervals; the grid has `n_steps + 1` points.
    pub n_steps: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// Negative eigenvalues down to `−psd_jitter · max` are clamped to zero.
    pub psd_jitter: f64,
}

impl Default for MCConfig {
    fn default() -> Self {
        MCConfig { n_steps: 64, n_samples: 10_000, seed: 0, psd_jitter: 1e-10 }
    }
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_steps < 8 {
            return Err(Error::arg("n_steps must be at least 8"));
        }
        if self.n_samples < 100 {
            return Err(Error::arg("n_samples must be at least 100"));
        }
        if !(self.psd_jitter >= 0.0) {
            return Err(Error::arg("psd_jitter must be ≥ 0"));
        }
        Ok(())
    }
}

/// Uniform grid `t_a = a·t_f/n_steps`, `a = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_f: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_f: f64, n_steps: usize) -> Result<Self> {
        if !(t_f > 0.0 && t_f.is_finite()) {
            return Err(Error::arg("t_f must be positive"));
        }
        if n_steps == 0 {
            return Err(Error::arg("n_steps must be positive"));
        }
        Ok(TimeGrid { t_f, n_steps })
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        self.t_f / self.n_steps as f64
    }

    pub fn point(&self, a: usize) -> f64 {
        if a == self.n_steps {
            self.t_f
        } else {
            a as f64 * self.dt()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|a| self.point(a)).collect()
    }

    /// Trapezoid weights.
    pub fn weights(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..self.len())
            .map(|a| if a == 0 || a == self.n_steps { 0.5 * dt } else { dt })
            .collect()
    }
}

/// Orthonormal (Frobenius) basis of symmetric 3×3 tensors: the three
/// diagonal units, then `(e_ie_j + e_je_i)/√2` for (12), (13), (23).
pub fn symmetric_basis() -> [Matrix3<f64>; 6] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let unit = |i: usize, j: usize, v: f64| {
        let mut m = Matrix3::zeros();
        m[(i, j)] = v;
        m[(j, i)] = v;
        m
    };
    [unit(0, 0, 1.0), unit(1, 1, 1.0), unit(2, 2, 1.0), unit(0, 1, r), unit(0, 2, r), unit(1, 2, r)]
}

/// `M_αβ = E_α^{ij} P^{ijkl} E_β^{kl}`.
pub fn tensor_block(p: &IsotropicRank4) -> Matrix6<f64> {
    let basis = symmetric_basis();
    let dense = p.to_dense();
    Matrix6::from_fn(|a, b| {
        let mut terms = Vec::with_capacity(81);
        for (i, j, k, l) in crate::tensor::DenseRank4::indices() {
            terms.push(basis[a][(i, j)] * dense.get(i, j, k, l) * basis[b][(k, l)]);
        }
        pairwise_sum(&terms)
    })
}

/// Covariance of the 6 tensor components over the time grid, stored as
/// `time ⊗ tensor`.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariance {
    pub grid: TimeGrid,
    pub time: DMatrix<f64>,
    pub tensor: Matrix6<f64>,
}

impl Covariance {
    /// Dense `6n × 6n` matrix, index `6a + α`.
    pub fn dense(&self) -> DMatrix<f64> {
        self.time.kronecker(&self.tensor)
    }

    /// Entry for time points `a, b` and basis components `α, β`.
    pub fn entry(&self, a: usize, alpha: usize, b: usize, beta: usize) -> f64 {
        self.time[(a, b)] * self.tensor[(alpha, beta)]
    }
}

pub fn build_covariance(state: &GravitonState, m0: f64, grid: &TimeGrid) -> Result<Covariance> {
    state.validate()?;
    if !(m0 > 0.0) {
        return Err(Error::arg("m0 must be positive"));
    }
    let t = grid.points();
    let n = grid.len();
    let mut time = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = noise_scalar(state, m0, t[a], t[b]);
            time[(a, b)] = v;
            time[(b, a)] = v;
        }
    }
    Ok(Covariance { grid: *grid, time, tensor: tensor_block(&IsotropicRank4::GRAVITON) })
}

/// Symmetric square root `U √Λ` with small negative eigenvalues clamped.
struct Root {
    matrix: DMatrix<f64>,
    clamped: usize,
}

fn spectral_root(m: DMatrix<f64>, jitter: f64) -> Result<Root> {
    let eig = SymmetricEigen::new(m);
    let max = eig.eigenvalues.iter().fold(0.0f64, |acc, &e| acc.max(e));
    let mut clamped = 0;
    let mut roots = eig.eigenvalues.clone();
    for e in roots.iter_mut() {
        if *e < 0.0 {
            if *e < -jitter * max {
                return Err(Error::NotPsd { eigenvalue: *e, max_eigenvalue: max });
            }
            clamped += 1;
            *e = 0.0;
        }
        *e = e.sqrt();
    }
    Ok(Root { matrix: eig.eigenvectors * DMatrix::from_diagonal(&roots), clamped })
}

/// An ensemble of sampled fields. `samples[s][a]` holds the 6 basis
/// components at grid point `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseField {
    pub grid: TimeGrid,
    pub samples: Vec<Vec<[f64; 6]>>,
    /// Eigenvalues clamped to zero during factorization.
    pub clamped: usize,
}

impl NoiseField {
    /// The tensor `𝒩_ij` of sample `s` at grid point `a`.
    pub fn tensor(&self, s: usize, a: usize) -> Matrix3<f64> {
        let basis = symmetric_basis();
        let c = self.samples[s][a];
        (0..6).fold(Matrix3::zeros(), |acc, k| acc + basis[k] * c[k])
    }
}

/// Draws `config.n_samples` fields. Sample `s` uses its own ChaCha8 stream
/// (`seed`, stream `s`), so the ensemble does not depend on the thread count.
pub fn sample_field(cov: &Covariance, config: &MCConfig) -> Result<NoiseField> {
    config.validate()?;
    let time = spectral_root(cov.time.clone(), config.psd_jitter)?;
    let tensor = spectral_root(DMatrix::from_iterator(6, 6, cov.tensor.iter().copied()), config.psd_jitter)?;
    let clamped = time.clamped + tensor.clamped;
    if clamped > 0 {
        log::info!("clamped {clamped} slightly negative covariance eigenvalues to zero");
    }
    let n = cov.grid.len();
    let a = &time.matrix;
    let bt = tensor.matrix.transpose();
    let samples = (0..config.n_samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(s as u64);
            let z = DMatrix::<f64>::from_fn(n, 6, |_, _| StandardNormal.sample(&mut rng));
            let c = a * z * &bt;
            (0..n).map(|i| std::array::from_fn(|k| c[(i, k)])).collect()
        })
        .collect();
    Ok(NoiseField { grid: cov.grid, samples, clamped })
}

/// Coefficients `g_α(a) = w_a E_α : (ΞΔξᵀ + ΔξΞᵀ)` so that `Φ = Σ g·c`.
fn phase_weights(grid: &TimeGrid, path: &SuperpositionPath) -> Vec<[f64; 6]> {
    let basis = symmetric_basis();
    let xi = nalgebra::Vector3::from(path.xi.to_array());
    grid.points()
        .iter()
        .zip(grid.weights())
        .map(|(&t, w)| {
            let d = nalgebra::Vector3::from(path.delta_xi(t).to_array());
            let s = xi * d.transpose() + d * xi.transpose();
            std::array::from_fn(|k| w * basis[k].component_mul(&s).sum())
        })
        .collect()
}

fn check_grid(grid: &TimeGrid, path: &SuperpositionPath) -> Result<()> {
    path.validate()?;
    if (grid.t_f - path.t_f).abs() > 1e-12 * path.t_f {
        return Err(Error::arg(format!(
            "ensemble grid ends at {} but the path at {}",
            grid.t_f, path.t_f
        )));
    }
    Ok(())
}

/// Phase Φ of every sample.
pub fn phases(ensemble: &NoiseField, path: &SuperpositionPath) -> Result<Vec<f64>> {
    check_grid(&ensemble.grid, path)?;
    let g = phase_weights(&ensemble.grid, path);
    Ok(ensemble
        .samples
        .iter()
        .map(|field| {
            let terms: Vec<f64> = field
                .iter()
                .zip(&g)
                .flat_map(|(c, w)| (0..6).map(move |k| c[k] * w[k]))
                .collect();
            pairwise_sum(&terms)
        })
        .collect())
}

/// `½⟨Φ²⟩` on the grid, computed exactly from the covariance. The gap to
/// the continuum Γ_grav is the trapezoid discretization error.
pub fn grid_gamma(cov: &Covariance, path: &SuperpositionPath) -> Result<f64> {
    check_grid(&cov.grid, path)?;
    let g = phase_weights(&cov.grid, path);
    let n = cov.grid.len();
    let mut terms = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut inner = 0.0;
            for (k, gk) in g[a].iter().enumerate() {
                for (l, gl) in g[b].iter().enumerate() {
                    inner += gk * cov.tensor[(k, l)] * gl;
                }
            }
            terms.push(cov.time[(a, b)] * inner);
        }
    }
    Ok(0.5 * pairwise_sum(&terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaEstimate {
    pub gamma: f64,
    /// Jackknife standard error of `gamma`.
    pub std_error: f64,
    pub mean_cos: f64,
    pub mean_sin: f64,
    /// Standard error of `mean_sin`.
    pub sin_std_error: f64,
    /// `½ · var(Φ)`, the small-phase approximation of `gamma`.
    pub half_variance: f64,
    /// Standard error of `half_variance`.
    pub half_variance_std_error: f64,
    pub n_samples: usize,
}

fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

fn std_error_of_mean(xs: &[f64], m: f64) -> f64 {
    let n = xs.len() as f64;
    let dev: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    (pairwise_sum(&dev) / (n - 1.0) / n).sqrt()
}

/// `−ln mean(cos Φ)` with a leave-one-out jackknife error.
pub fn estimate_gamma(ensemble: &NoiseField, path: &SuperpositionPath) -> Result<GammaEstimate> {
    let phi = phases(ensemble, path)?;
    let n = phi.len();
    if n < 2 {
        return Err(Error::arg("need at least two samples"));
    }
    let cos: Vec<f64> = phi.iter().map(|p| p.cos()).collect();
    let sin: Vec<f64> = phi.iter().map(|p| p.sin()).collect();
    let total = pairwise_sum(&cos);
    let mean_cos = total / n as f64;
    if mean_cos <= 0.0 {
        return Err(Error::Saturated { mean_cos });
    }
    let nf = n as f64;
    let mut loo = Vec::with_capacity(n);
    for c in &cos {
        let m = (total - c) / (nf - 1.0);
        if m <= 0.0 {
            return Err(Error::Saturated { mean_cos: m });
        }
        loo.push(-m.ln());
    }
    let loo_mean = mean(&loo);
    let dev: Vec<f64> = loo.iter().map(|g| (g - loo_mean) * (g - loo_mean)).collect();
    let std_error = ((nf - 1.0) / nf * pairwise_sum(&dev)).sqrt();

    let mean_sin = mean(&sin);
    let mean_phi = mean(&phi);
    let sq: Vec<f64> = phi.iter().map(|p| (p - mean_phi) * (p - mean_phi)).collect();
    let var = pairwise_sum(&sq) / (nf - 1.0);
    let half_sq: Vec<f64> = sq.iter().map(|s| 0.5 * s).collect();
    Ok(GammaEstimate {
        gamma: -mean_cos.ln(),
        std_error,
        mean_cos,
        mean_sin,
        sin_std_error: std_error_of_mean(&sin, mean_sin),
        half_variance: 0.5 * var,
        half_variance_std_error: std_error_of_mean(&half_sq, mean(&half_sq)),
        n_samples: n,
    })
}

/// Builds, samples and estimates in one go.
pub fn monte_carlo_gamma(
    state: &GravitonState,
    m0: f64,
    path: &SuperpositionPath,
    config: &MCConfig,
) -> Result<GammaEstimate> {
    let grid = TimeGrid::new(path.t_f, config.n_steps)?;
    let cov = build_covariance(state, m0, &grid)?;
    let field = sample_field(&cov, config)?;
    estimate_gamma(&field, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::SpatialVector;

    #[test]
    fn tensor_block_spectrum() {
        let m = tensor_block(&IsotropicRank4::GRAVITON);
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!(ev[0].abs() < 1e-12);
        for e in &ev[1..] {
            assert!((e - 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_is_orthonormal() {
        let b = symmetric_basis();
        for i in 0..6 {
            for j in 0..6 {
                let ip = b[i].component_mul(&b[j]).sum();
                assert!((ip - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn diagonal_blocks_and_toeplitz() {
        let s = GravitonState::vacuum(1.0);
        let grid = TimeGrid::new(2.0, 16).unwrap();
        let cov = build_covariance(&s, 1.0, &grid).unwrap();
        let eq = crate::kernels::noise_equal_time(&s, 1.0, 0.5);
        let m = tensor_block(&IsotropicRank4::GRAVITON);
        for k in 0..6 {
            assert!((cov.entry(4, k, 4, k) - eq * m[(k, k)]).abs() < 1e-14);
        }
        for a in 0..10 {
            assert!((cov.time[(a, a + 3)] - cov.time[(0, 3)]).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_covariance_gives_zero_samples() {
        let grid = TimeGrid::new(1.0, 8).unwrap();
        let cov = Covariance { grid, time: DMatrix::zeros(9, 9), tensor: Matrix6::zeros() };
        let cfg = MCConfig { n_samples: 100, ..MCConfig::default() };
        let f = sample_field(&cov, &cfg).unwrap();
        assert!(f.samples.iter().flatten().flatten().all(|&x| x == 0.0));
    }

    #[test]
    fn indefinite_covariance_is_rejected() {
        let grid = TimeGrid::new(1.0, 8).unwrap();
        let mut time = DMatrix::identity(9, 9);
        time[(3, 3)] = -0.5;
        let cov = Covariance { grid, time, tensor: tensor_block(&IsotropicRank4::GRAVITON) };
        let cfg = MCConfig { n_samples: 100, ..MCConfig::default() };
        assert!(matches!(sample_field(&cov, &cfg), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn zero_velocity_gives_zero_phase() {
        let s = GravitonState::vacuum(1.0);
        let path = SuperpositionPath::new(SpatialVector::ZERO, SpatialVector::new(1.0, 0.0, 0.0), SpatialVector::ZERO, 1.0).unwrap();
        let cfg = MCConfig { n_samples: 200, n_steps: 8, ..MCConfig::default() };
        let est = monte_carlo_gamma(&s, 1.0, &path, &cfg).unwrap();
        assert_eq!(est.gamma, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn symmetric_samples_and_determinism() {
        let s = GravitonState::thermal(1.0, 1.5);
        let grid = TimeGrid::new(1.0, 8).unwrap();
        let cov = build_covariance(&s, 1.0, &grid).unwrap();
        let cfg = MCConfig { n_samples: 100, seed: 9, ..MCConfig::default() };
        let a = sample_field(&cov, &cfg).unwrap();
        let b = sample_field(&cov, &cfg).unwrap();
        assert_eq!(a, b);
        let t = a.tensor(3, 4);
        assert_eq!(t, t.transpose());
    }
}
