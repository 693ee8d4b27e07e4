use std::f64::consts::PI;

use gravidec_core::quadrature::maclaurin::{leading_term, maclaurin_defining_integral, SeriesId};
use gravidec_core::quadrature::{integrate_1d, integrate_semi_infinite, QuadratureSpec};
use gravidec_core::special::{self, closed, series, SeriesPolicy};
use num_traits::ToPrimitive;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `F(x; φ) = ∫₀¹ u⁵ cos(xu − φ) du`, the defining integral with `y = xu`.
fn f_phase_quadrature(x: f64, phi: f64) -> f64 {
    let spec = QuadratureSpec::default().with_min_period(2.0 * PI / x.max(1e-300));
    integrate_1d(|u: f64| u.powi(5) * (x * u - phi).cos(), 0.0, 1.0, &spec)
        .unwrap()
        .value
}

#[test]
fn f_matches_defining_integral_on_log_grid() {
    for x in log_grid(1e-3, 100.0, 50) {
        let q = f_phase_quadrature(x, 0.0);
        assert!(rel(special::f(x), q) <= 1e-10, "x = {x}: {} vs {q}", special::f(x));
    }
}

#[test]
fn f_phase_matches_defining_integral_on_log_grid() {
    for phi in [0.4, 1.0, PI / 2.0, 2.7] {
        for x in log_grid(1e-3, 100.0, 50) {
            let q = f_phase_quadrature(x, phi);
            let v = special::f_phase(x, phi);
            // near a zero of F(x; φ) relative error is meaningless; use the
            // integrand scale 1/6 as the floor
            assert!((v - q).abs() <= 1e-10 * q.abs().max(1e-3), "x = {x}, φ = {phi}: {v} vs {q}");
        }
    }
    let q = f_phase_quadrature(5.0, 1.0);
    assert!(rel(special::f_phase(5.0, 1.0), q) <= 1e-10);
}

#[test]
fn f_at_ten_matches_unscaled_integral() {
    let spec = QuadratureSpec::default().with_min_period(2.0 * PI);
    let i = integrate_1d(|y: f64| y.powi(5) * y.cos(), 0.0, 10.0, &spec).unwrap();
    assert!(rel(i.value, 1e6 * special::f(10.0)) <= 1e-10);
}

#[test]
fn f_th_matches_bose_integral() {
    let spec = QuadratureSpec::default();
    for x in [0.05, 0.3, 1.0, 2.0, 4.0, 8.0] {
        let k = x / PI;
        let i = integrate_semi_infinite(
            |w: f64| if w == 0.0 { 0.0 } else { w.powi(5) * (w * k).cos() / w.exp_m1() },
            0.0,
            1.0,
            &spec.with_min_period(2.0 * PI / k),
        )
        .unwrap();
        let want = i.value / (60.0 * PI.powi(6));
        assert!(rel(special::f_th(x), want) <= 1e-8, "x = {x}: {} vs {want}", special::f_th(x));
    }
}

#[test]
fn thermal_kernel_normalization() {
    // ∫₀^∞ ω⁵cos(ωτ)/(e^{ωβ}−1) dω = (β⁶/60π⁶)… written as (8π⁵/β⁶)F_th(πτ/β)·15π/2
    let (beta, tau) = (1.7, 0.9);
    let i = integrate_semi_infinite(
        |w: f64| if w == 0.0 { 0.0 } else { w.powi(5) * (w * tau).cos() / (w * beta).exp_m1() },
        0.0,
        1.0 / beta,
        &QuadratureSpec::default().with_min_period(2.0 * PI / tau),
    )
    .unwrap();
    let want = 8.0 * PI.powi(5) / beta.powi(6) * special::f_th(PI * tau / beta) * 15.0 * PI / 2.0;
    assert!(rel(i.value, want) <= 1e-8);
}

type Pair = (&'static str, Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>);

fn seam_pairs() -> Vec<Pair> {
    let p = SeriesPolicy::DEFAULT;
    let mut v: Vec<Pair> = vec![
        ("F", Box::new(closed::f), Box::new(move |x| series::f(x, &p))),
        ("F_th", Box::new(closed::f_th), Box::new(move |x| series::f_th(x, &p))),
        ("G", Box::new(closed::g), Box::new(move |x| series::g(x, &p))),
        ("G_th", Box::new(closed::g_th), Box::new(move |x| series::g_th(x, &p))),
        ("G_coh_I", Box::new(closed::g_coh_1), Box::new(move |x| series::g_coh_1(x, &p))),
        ("G_coh_II", Box::new(closed::g_coh_2), Box::new(move |x| series::g_coh_2(x, &p))),
    ];
    for phi in [0.0, 1.1, 2.9] {
        v.push(("F_phase", Box::new(move |x| closed::f_phase(x, phi)), Box::new(move |x| series::f_phase(x, phi, &p))));
        v.push(("G_sq_I", Box::new(move |x| closed::g_sq_1(x, phi)), Box::new(move |x| series::g_sq_1(x, phi, &p))));
        v.push(("G_sq_II", Box::new(move |x| closed::g_sq_2(x, phi)), Box::new(move |x| series::g_sq_2(x, phi, &p))));
    }
    v
}

#[test]
fn seam_is_continuous() {
    let x0 = SeriesPolicy::DEFAULT.switchover_x;
    for (name, c, s) in seam_pairs() {
        for i in 0..20 {
            let x = x0 * (0.9 + 0.2 * i as f64 / 19.0);
            let (a, b) = (c(x), s(x));
            assert!(rel(a, b) <= 1e-9, "{name} at {x}: {a} vs {b}");
        }
    }
}

#[test]
fn policy_defaults_meet_target() {
    SeriesPolicy::DEFAULT.validate().unwrap();
    let wide = SeriesPolicy { switchover_x: 3.0, ..SeriesPolicy::DEFAULT };
    assert!(wide.validate().is_err());
}

#[test]
fn leading_terms_confirmed_by_oracle() {
    let lead = |id| {
        let (k, c) = leading_term(&maclaurin_defining_integral(id, 12).unwrap()).unwrap();
        (k, c.to_f64().unwrap())
    };
    assert_eq!(lead(SeriesId::F), (0, 1.0 / 6.0));
    assert_eq!(lead(SeriesId::FTh), (0, 2.0 / 945.0));
    assert_eq!(lead(SeriesId::G), (4, 1.0 / 288.0));
    assert_eq!(lead(SeriesId::GTh), (4, 1.0 / 126.0));
    assert_eq!(lead(SeriesId::GCohI), (4, 1.0 / 1536.0));
    assert_eq!(lead(SeriesId::GCohII), (3, 1.0 / 3.0));
    assert_eq!(lead(SeriesId::GSqIICos), (3, 2.0 / 3.0));
}

#[test]
fn small_x_approximations_hold() {
    for x in [1e-3, 5e-3, 1e-2] {
        assert!(rel(special::g_coh_2(x), x.powi(3) / 3.0) < 0.01);
        assert!(rel(special::g_sq_2(x, 0.0), 2.0 * x.powi(3) / 3.0) < 0.01);
        assert!(rel(special::g(x), x.powi(4) / 288.0) < 0.01);
    }
}

#[test]
fn g_th_and_f_th_finite_to_700() {
    for i in 0..=700 {
        let x = i as f64;
        assert!(special::f_th(x).is_finite() && special::g_th(x).is_finite(), "{x}");
    }
}
