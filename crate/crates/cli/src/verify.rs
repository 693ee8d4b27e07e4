//! `gravidec verify`: reruns the oracle suites and reports one verdict per
//! check with the measured residual. The report holds no timings, so two
//! runs with the same seed are byte-identical.

use std::f64::consts::PI;

use gravidec_core::quadrature::maclaurin::{leading_term, maclaurin_defining_integral, to_f64, SeriesId};
use gravidec_core::quadrature::{integrate_1d, integrate_semi_infinite};
use gravidec_core::special::{self, closed, series, ALL_TABLES};
use gravidec_core::stochastic::{build_covariance, monte_carlo_gamma, MCConfig, TimeGrid};
use gravidec_core::tensor::{angular_integral_oracle, DenseRank4, SphereQuadrature};
use gravidec_core::{
    gamma_closed, gamma_quadrature, tau_dec_closed, tau_dec_root, GravitonState, InternalBath, IsotropicRank4,
    PathTemplate, QuadratureSpec, SeriesPolicy, SpatialVector, SuperpositionPath,
};
use nalgebra::SymmetricEigen;
use num_traits::ToPrimitive;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 20240917;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Residual in the units of `threshold`; passing means `measured ≤ threshold`.
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

/// Reported but never a pass or fail.
#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub name: String,
    pub summary: String,
    pub values: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub seed: u64,
    pub n_checks: usize,
    pub n_passed: usize,
    pub all_passed: bool,
    pub checks: Vec<Check>,
    pub informational: Vec<Finding>,
}

struct Suite {
    checks: Vec<Check>,
    findings: Vec<Finding>,
}

impl Suite {
    fn push(&mut self, name: &str, measured: f64, threshold: f64, detail: impl Into<String>) {
        // NaN never passes
        let passed = measured <= threshold;
        if !passed {
            log::warn!("check {name} failed: {measured:e} > {threshold:e}");
        }
        self.checks.push(Check { name: name.into(), passed, measured, threshold, detail: detail.into() });
    }

    fn fail(&mut self, name: &str, threshold: f64, why: impl std::fmt::Display) {
        log::warn!("check {name} could not run: {why}");
        self.checks.push(Check {
            name: name.into(),
            passed: false,
            measured: f64::INFINITY,
            threshold,
            detail: format!("error: {why}"),
        });
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn angular(s: &mut Suite, level: Level, seed: u64) {
    let want = IsotropicRank4::GRAVITON.to_dense().scale(8.0 * PI / 15.0);
    match angular_integral_oracle(SphereQuadrature::Product { theta_order: 32, phi_points: 64 }, 1e-10) {
        Ok(got) => s.push(
            "angular.product_rule",
            got.tensor.max_abs_diff(&want),
            1e-10,
            "max componentwise |∮Σε⊗ε − (8π/15)P|, 32×64 product rule",
        ),
        Err(e) => s.fail("angular.product_rule", 1e-10, e),
    }
    let samples = match level {
        Level::Quick => 1_000_000,
        Level::Full => 4_000_000,
    };
    match angular_integral_oracle(SphereQuadrature::MonteCarlo { samples, seed }, 1.0) {
        Ok(got) => s.push(
            "angular.monte_carlo",
            got.tensor.max_abs_diff(&want) / want.max_abs(),
            1e-2,
            format!("max deviation relative to the largest component, {samples} directions"),
        ),
        Err(e) => s.fail("angular.monte_carlo", 1e-2, e),
    }
    // P contraction against the 81-term sum
    let p = IsotropicRank4::GRAVITON;
    let pairs = [
        (SpatialVector::new(0.3, -1.2, 0.7), SpatialVector::new(2.0, 0.1, -0.4)),
        (SpatialVector::new(1.0, 0.0, 0.0), SpatialVector::new(0.0, 1.0, 0.0)),
        (SpatialVector::new(-5.0, 3.0, 2.5), SpatialVector::new(-5.0, 3.0, 2.5)),
    ];
    let mut worst: f64 = 0.0;
    for (xi, v) in pairs {
        let (a, b) = (xi.to_array(), v.to_array());
        let brute: f64 = DenseRank4::indices()
            .map(|(i, j, k, l)| p.component(i + 1, j + 1, k + 1, l + 1).unwrap_or(f64::NAN) * a[i] * b[j] * a[k] * b[l])
            .sum();
        worst = worst.max(rel(p.contract_k(xi, v), brute));
    }
    s.push("tensor.contract_k", worst, 1e-12, "𝒦 = 3|Ξ|²|v|² + (Ξ·v)² against the componentwise sum");
}

fn f_phase_quadrature(x: f64, phi: f64) -> gravidec_core::Result<f64> {
    let spec = QuadratureSpec::default().with_min_period(2.0 * PI / x);
    Ok(integrate_1d(|u: f64| u.powi(5) * (x * u - phi).cos(), 0.0, 1.0, &spec)?.value)
}

fn special_functions(s: &mut Suite, level: Level) {
    let xs = log_grid(1e-3, 100.0, 50);
    let mut worst: f64 = 0.0;
    let mut failed = None;
    for &x in &xs {
        match f_phase_quadrature(x, 0.0) {
            Ok(q) => worst = worst.max(rel(special::f(x), q)),
            Err(e) => failed = Some(e),
        }
    }
    match failed {
        None => s.push("special.f_vs_quadrature", worst, 1e-10, "max relative error, 50 log-spaced x in [1e-3, 100]"),
        Some(e) => s.fail("special.f_vs_quadrature", 1e-10, e),
    }

    let phis: &[f64] = match level {
        Level::Quick => &[0.4, PI / 2.0],
        Level::Full => &[0.4, 1.0, PI / 2.0, 2.7, 4.0],
    };
    let mut worst: f64 = 0.0;
    let mut failed = None;
    for &phi in phis {
        for &x in &xs {
            match f_phase_quadrature(x, phi) {
                Ok(q) => worst = worst.max((special::f_phase(x, phi) - q).abs() / q.abs().max(1e-3)),
                Err(e) => failed = Some(e),
            }
        }
    }
    match failed {
        None => s.push(
            "special.f_phase_vs_quadrature",
            worst,
            1e-10,
            format!("max error relative to max(|F|, 1e-3) over φ ∈ {phis:?}"),
        ),
        Some(e) => s.fail("special.f_phase_vs_quadrature", 1e-10, e),
    }

    let mut worst: f64 = 0.0;
    let mut failed = None;
    for x in [0.05, 0.3, 1.0, 2.0, 4.0, 8.0] {
        let k = x / PI;
        let spec = QuadratureSpec::default().with_min_period(2.0 * PI / k);
        let bose = |w: f64| if w == 0.0 { 0.0 } else { w.powi(5) * (w * k).cos() / w.exp_m1() };
        match integrate_semi_infinite(bose, 0.0, 1.0, &spec) {
            Ok(i) => worst = worst.max(rel(special::f_th(x), i.value / (60.0 * PI.powi(6)))),
            Err(e) => failed = Some(e),
        }
    }
    match failed {
        None => s.push("special.f_th_vs_bose_integral", worst, 1e-8, "max relative error, x ∈ {0.05 … 8}"),
        Some(e) => s.fail("special.f_th_vs_bose_integral", 1e-8, e),
    }

    // seam continuity of every switched function
    type Pair = (Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>);
    let p = SeriesPolicy::DEFAULT;
    let mut pairs: Vec<Pair> = vec![
        (Box::new(closed::f), Box::new(move |x| series::f(x, &p))),
        (Box::new(closed::f_th), Box::new(move |x| series::f_th(x, &p))),
        (Box::new(closed::g), Box::new(move |x| series::g(x, &p))),
        (Box::new(closed::g_th), Box::new(move |x| series::g_th(x, &p))),
        (Box::new(closed::g_coh_1), Box::new(move |x| series::g_coh_1(x, &p))),
        (Box::new(closed::g_coh_2), Box::new(move |x| series::g_coh_2(x, &p))),
    ];
    for phi in [0.0, 1.1, 2.9] {
        pairs.push((Box::new(move |x| closed::f_phase(x, phi)), Box::new(move |x| series::f_phase(x, phi, &p))));
        pairs.push((Box::new(move |x| closed::g_sq_1(x, phi)), Box::new(move |x| series::g_sq_1(x, phi, &p))));
        pairs.push((Box::new(move |x| closed::g_sq_2(x, phi)), Box::new(move |x| series::g_sq_2(x, phi, &p))));
    }
    let x0 = p.switchover_x;
    let mut worst: f64 = 0.0;
    for (c, ser) in &pairs {
        for i in 0..20 {
            let x = x0 * (0.9 + 0.2 * i as f64 / 19.0);
            worst = worst.max(rel(ser(x), c(x)));
        }
    }
    s.push("special.seam_continuity", worst, 1e-9, "closed form vs series on ±10% around the switchover");

    // frozen tables against the exact rational expansion
    let mut worst: f64 = 0.0;
    let mut failed = None;
    for (id, (_, table)) in SeriesId::ALL.iter().zip(ALL_TABLES.iter()) {
        match maclaurin_defining_integral(*id, special::TABLE_ORDER) {
            Ok(c) => {
                for (a, b) in to_f64(&c).iter().zip(table.iter()) {
                    let d = if *a == 0.0 { b.abs() } else { rel(*b, *a) };
                    worst = worst.max(d);
                }
            }
            Err(e) => failed = Some(e),
        }
    }
    match failed {
        None => s.push("special.frozen_tables", worst, 0.0, "max relative difference of tabulated coefficients"),
        Some(e) => s.fail("special.frozen_tables", 0.0, e),
    }

    let expected = [
        (SeriesId::F, 0, 1.0 / 6.0),
        (SeriesId::G, 4, 1.0 / 288.0),
        (SeriesId::GCohII, 3, 1.0 / 3.0),
        (SeriesId::GSqIICos, 3, 2.0 / 3.0),
    ];
    let mut worst: f64 = 0.0;
    for (id, power, coeff) in expected {
        let got = maclaurin_defining_integral(id, 12)
            .ok()
            .and_then(|c| leading_term(&c))
            .and_then(|(k, c)| Some((k, c.to_f64()?)));
        worst = worst.max(match got {
            Some((k, c)) if k == power => rel(c, coeff),
            _ => f64::INFINITY,
        });
    }
    s.push(
        "special.leading_terms",
        worst,
        1e-15,
        "F(0)=1/6, G≈x⁴/288, G_coh_II≈x³/3, G_sq_II≈2x³/3 from the exact expansion",
    );
}

fn states() -> Vec<GravitonState> {
    vec![
        GravitonState::vacuum(1.0),
        GravitonState::thermal(1.0, 2.0),
        GravitonState::coherent(1.0, 0.7).with_state_cutoff(0.8),
        GravitonState::squeezed(1.0, 0.3, 0.6).with_state_cutoff(1.2),
    ]
}

fn path(t_f: f64) -> SuperpositionPath {
    SuperpositionPath {
        v: SpatialVector::new(0.3, -0.2, 0.5),
        xi: SpatialVector::new(1.0, 0.4, -0.7),
        mean_velocity: SpatialVector::new(0.2, 0.1, 0.3),
        t_f,
    }
}

fn decoherence(s: &mut Suite, level: Level) {
    let bath = InternalBath::white_noise(0.5, 0.2, 0.1);
    let xs: &[f64] = match level {
        Level::Quick => &[1.0, 5.0, 20.0],
        Level::Full => &[0.3, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0],
    };
    let mut ratios = Vec::new();
    for st in states() {
        let name = format!("decoherence.closed_vs_quadrature.{}", st.name());
        let mut worst: f64 = 0.0;
        let mut failed = None;
        for &x in xs {
            let p = path(x);
            let r = gamma_closed(&st, &bath, &p, 1.0)
                .and_then(|c| Ok((c, gamma_quadrature(&st, &bath, &p, 1.0, &QuadratureSpec::default())?)));
            match r {
                Ok((c, q)) => {
                    worst = worst.max(rel(c.gamma_grav, q.gamma_grav)).max(rel(c.gamma_mixed, q.gamma_mixed));
                    if x == 5.0 {
                        ratios.push((format!("{}.grav", st.name()), c.gamma_grav / q.gamma_grav));
                        ratios.push((format!("{}.mixed", st.name()), c.gamma_mixed / q.gamma_mixed));
                    }
                }
                Err(e) => failed = Some(e),
            }
        }
        match failed {
            None => s.push(&name, worst, 1e-5, format!("max relative difference of Γ_grav, Γ_mixed at Λt_f ∈ {xs:?}")),
            Some(e) => s.fail(&name, 1e-5, e),
        }
    }
    let off = ratios.iter().map(|(_, r)| (r - 1.0).abs()).fold(0.0, f64::max);
    let summary = if off <= 1e-5 {
        format!(
            "closed forms and the direct double integral of the rate agree; no constant-factor mismatch \
             (largest |ratio − 1| = {off:.3e} at Λt_f = 5)"
        )
    } else {
        format!("constant-factor mismatch between closed forms and the direct double integral: largest |ratio − 1| = {off:.3e}")
    };
    s.findings.push(Finding { name: "decoherence.constant_factor".into(), summary, values: ratios });

    // limits
    let vac = GravitonState::vacuum(1.3);
    let mut worst: f64 = 0.0;
    let mut lambda_zero: f64 = 0.0;
    let mut failed = None;
    let no_bath = InternalBath::white_noise(0.0, 0.2, 0.1);
    for i in 0..50 {
        let p = path(0.05 * 1.15f64.powi(i));
        let run = || -> gravidec_core::Result<(f64, f64)> {
            let v = gamma_closed(&vac, &bath, &p, 1.0)?;
            let sq = gamma_closed(&GravitonState::squeezed(1.3, 0.0, 0.8), &bath, &p, 1.0)?;
            let coh = gamma_closed(&GravitonState::coherent(1.3, 0.0), &bath, &p, 1.0)?;
            let th = gamma_closed(&GravitonState::thermal(1.3, 1e4 / 1.3), &bath, &p, 1.0)?;
            let w = rel(sq.gamma_total, v.gamma_total)
                .max(rel(coh.gamma_total, v.gamma_total))
                .max(rel(th.gamma_graviton(), v.gamma_graviton()));
            let z = gamma_closed(&GravitonState::thermal(1.3, 2.0), &no_bath, &p, 1.0)?;
            Ok((w, z.gamma_mixed.abs() + z.gamma_velocity.abs()))
        };
        match run() {
            Ok((w, z)) => {
                worst = worst.max(w);
                lambda_zero = lambda_zero.max(z);
            }
            Err(e) => failed = Some(e),
        }
    }
    match failed {
        None => {
            s.push(
                "decoherence.limit_reductions",
                worst,
                1e-8,
                "r = 0, α = 0 and β_gΛ = 10⁴ against vacuum, 50 values of t_f",
            );
            s.push("decoherence.lambda_zero", lambda_zero, 0.0, "|Γ_mixed| + |Γ_velocity| with λ = 0");
        }
        Some(e) => {
            s.fail("decoherence.limit_reductions", 1e-8, &e);
            s.fail("decoherence.lambda_zero", 0.0, e);
        }
    }

    // decoherence times
    let template = PathTemplate::from(path(1.0));
    let k = template.k_contraction();
    let strong = InternalBath::white_noise(1.0, 1e6, 1e-3);
    let cases = [
        GravitonState::vacuum(1.0),
        GravitonState::thermal(1.0, 3.0),
        GravitonState::coherent(1.0, 0.8),
        GravitonState::squeezed(1.0, 0.2, 0.0),
    ];
    let (mut agree, mut resid): (f64, f64) = (0.0, 0.0);
    let mut failed = None;
    for st in cases {
        let run = || -> gravidec_core::Result<(f64, f64)> {
            let root = tau_dec_root(&st, &strong, &template, 1.0, 1e-12)?;
            let printed = tau_dec_closed(&st, &strong, 1.0, k)?;
            let g = gamma_closed(&st, &strong, &template.path(root), 1.0)?.gamma_graviton();
            Ok((rel(root, printed), (g - 1.0).abs()))
        };
        match run() {
            Ok((a, r)) => {
                agree = agree.max(a);
                resid = resid.max(r);
            }
            Err(e) => failed = Some(e),
        }
    }
    match failed {
        None => {
            s.push("decoherence.tau_dec_agreement", agree, 1e-2, "root of Γ = 1 vs the small-x formulas, Λτ ≤ 0.1");
            s.push("decoherence.tau_dec_residual", resid, 1e-9, "|Γ(τ_dec) − 1| at the root");
        }
        Some(e) => {
            s.fail("decoherence.tau_dec_agreement", 1e-2, &e);
            s.fail("decoherence.tau_dec_residual", 1e-9, e);
        }
    }
}

fn kernel_psd(s: &mut Suite) {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut failed = None;
    for st in [GravitonState::vacuum(1.0), GravitonState::thermal(1.0, 2.0)] {
        match TimeGrid::new(10.0, 63).and_then(|g| build_covariance(&st, 1.0, &g)) {
            Ok(cov) => {
                let ev = SymmetricEigen::new(cov.time.clone()).eigenvalues;
                let (lo, hi) = (ev.min(), ev.max());
                worst = worst.max(-lo / hi);
            }
            Err(e) => failed = Some(e),
        }
    }
    match failed {
        None => s.push(
            "kernels.covariance_psd",
            worst,
            1e-8,
            "−λ_min/λ_max of the 64-point time covariance, vacuum and thermal",
        ),
        Some(e) => s.fail("kernels.covariance_psd", 1e-8, e),
    }
}

/// Scales `v` so that the closed-form graviton term equals `target`.
fn tuned_path(st: &GravitonState, t_f: f64, target: f64) -> gravidec_core::Result<SuperpositionPath> {
    let base = SuperpositionPath { mean_velocity: SpatialVector::ZERO, ..path(t_f) };
    let g = gamma_closed(st, &InternalBath::white_noise(0.0, 0.0, 1.0), &base, 1.0)?.gamma_grav;
    Ok(SuperpositionPath { v: base.v.scale((target / g).sqrt()), ..base })
}

fn monte_carlo(s: &mut Suite, level: Level, seed: u64) {
    let (list, n_samples) = match level {
        Level::Quick => (vec![GravitonState::vacuum(1.0)], 2_000),
        Level::Full => (vec![GravitonState::vacuum(1.0), GravitonState::thermal(1.0, 2.0)], 10_000),
    };
    for st in list {
        let name = format!("monte_carlo.{}", st.name());
        let cfg = MCConfig { n_steps: 64, n_samples, seed, psd_jitter: 1e-10 };
        let run = || -> gravidec_core::Result<_> {
            let p = tuned_path(&st, 2.0, 0.5)?;
            let want = gamma_closed(&st, &InternalBath::white_noise(0.0, 0.0, 1.0), &p, 1.0)?.gamma_grav;
            Ok((want, monte_carlo_gamma(&st, 1.0, &p, &cfg)?))
        };
        match run() {
            Ok((want, est)) => {
                s.push(
                    &name,
                    (est.gamma - want).abs() / est.std_error,
                    3.0,
                    format!(
                        "|−ln⟨cos Φ⟩ − Γ_grav| in standard errors; estimate {:.6} ± {:.6}, Γ_grav {want:.6}, {n_samples} samples",
                        est.gamma, est.std_error
                    ),
                );
                s.push(
                    &format!("{name}.zero_mean_phase"),
                    est.mean_sin.abs() / est.sin_std_error,
                    5.0,
                    "|⟨sin Φ⟩| in standard errors",
                );
            }
            Err(e) => s.fail(&name, 3.0, e),
        }
    }
}

fn asymptotics(s: &mut Suite) {
    // |G − 1| falls off like 6/x rather than reaching 1e-3 by x = 200
    let values: Vec<(String, f64)> =
        [200.0, 1e3, 1e4].iter().map(|&x| (format!("x={x}"), (special::g(x) - 1.0).abs() * x)).collect();
    s.findings.push(Finding {
        name: "special.g_large_x".into(),
        summary: "x·|G(x) − 1| stays near 6, so G approaches 1 only as 1/x".into(),
        values,
    });
}

pub fn run(level: Level, seed: u64) -> VerifyReport {
    let mut s = Suite { checks: Vec::new(), findings: Vec::new() };
    angular(&mut s, level, seed);
    special_functions(&mut s, level);
    kernel_psd(&mut s);
    decoherence(&mut s, level);
    monte_carlo(&mut s, level, seed);
    asymptotics(&mut s);
    let n_passed = s.checks.iter().filter(|c| c.passed).count();
    VerifyReport {
        level,
        seed,
        n_checks: s.checks.len(),
        n_passed,
        all_passed: n_passed == s.checks.len(),
        checks: s.checks,
        informational: s.findings,
    }
}
