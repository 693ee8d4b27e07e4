//! Independent numerical engines used as ground truth: adaptive
//! Gauss–Legendre quadrature in one and two dimensions, a semi-infinite
//! integrator for exponentially decaying integrands, and exact Maclaurin
//! series of the defining integrals ([`maclaurin`]).
//!
//! Everything here is sequential and accumulates with [`pairwise_sum`] in a
//! fixed order, so identical inputs give bit-identical outputs.

mod gl_tables;
pub mod maclaurin;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const RESUM_EVERY: usize = 256;

/// Tree summation in fixed order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Gauss–Legendre rule on [-1, 1], nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    const ORDERS: [usize; 7] = [8, 16, 20, 24, 32, 48, 64];

    pub fn supported_orders() -> &'static [usize] {
        &Self::ORDERS
    }

    pub fn new(order: usize) -> Result<Self> {
        use gl_tables::*;
        let (half_n, half_w): (&[f64], &[f64]) = match order {
            8 => (&NODES_8, &WEIGHTS_8),
            16 => (&NODES_16, &WEIGHTS_16),
            20 => (&NODES_20, &WEIGHTS_20),
            24 => (&NODES_24, &WEIGHTS_24),
            32 => (&NODES_32, &WEIGHTS_32),
            48 => (&NODES_48, &WEIGHTS_48),
            64 => (&NODES_64, &WEIGHTS_64),
            _ => {
                return Err(Error::arg(format!(
                    "Gauss-Legendre order {order} not tabulated (have {:?})",
                    Self::ORDERS
                )))
            }
        };
        let nodes = half_n
            .iter()
            .rev()
            .map(|x| -x)
            .chain(half_n.iter().copied())
            .collect();
        let weights = half_w
            .iter()
            .rev()
            .chain(half_w.iter())
            .copied()
            .collect();
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .collect();
        half * pairwise_sum(&terms)
    }

    pub fn integrate_2d<F: Fn(f64, f64) -> f64>(&self, f: &F, r: &Rect) -> f64 {
        let hx = 0.5 * (r.x1 - r.x0);
        let mx = 0.5 * (r.x0 + r.x1);
        let hy = 0.5 * (r.y1 - r.y0);
        let my = 0.5 * (r.y0 + r.y1);
        let mut terms = Vec::with_capacity(self.len() * self.len());
        for (xn, xw) in self.nodes.iter().zip(&self.weights) {
            let x = mx + hx * xn;
            for (yn, yw) in self.nodes.iter().zip(&self.weights) {
                terms.push(xw * yw * f(x, my + hy * yn));
            }
        }
        hx * hy * pairwise_sum(&terms)
    }
}

/// Tolerances and limits for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    /// Gauss–Legendre order used on each panel.
    pub panel_rule: usize,
    /// Shortest oscillation period of the integrand, if known. Panels are
    /// never wider than half of it.
    pub min_period: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_panels: 1 << 16,
            panel_rule: 16,
            min_period: None,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::arg("quadrature tolerances must be positive"));
        }
        if self.max_panels < 4 {
            return Err(Error::arg("max_panels must be at least 4"));
        }
        if let Some(p) = self.min_period {
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::arg("min_period must be positive and finite"));
            }
        }
        GaussLegendre::new(self.panel_rule).map(|_| ())
    }

    pub fn with_min_period(mut self, period: f64) -> Self {
        self.min_period = Some(match self.min_period {
            Some(p) => p.min(period),
            None => period,
        });
        self
    }

    fn max_width(&self) -> f64 {
        self.min_period.map_or(f64::INFINITY, |p| 0.5 * p)
    }

    fn target(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: usize,
}

/// Max-heap entry: largest error first, earliest panel on ties.
#[derive(Debug)]
struct ByError<T>(f64, usize, T);

impl<T> PartialEq for ByError<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for ByError<T> {}
impl<T> PartialOrd for ByError<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for ByError<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

fn evaluate_panel<F: Fn(f64) -> f64>(rule: &GaussLegendre, f: &F, a: f64, b: f64, seq: usize) -> Panel {
    let coarse = rule.integrate(f, a, b);
    let m = 0.5 * (a + b);
    let fine = rule.integrate(f, a, m) + rule.integrate(f, m, b);
    Panel {
        a,
        b,
        value: fine,
        error: (fine - coarse).abs(),
        seq,
    }
}

fn split_evenly(a: f64, b: f64, max_width: f64) -> Vec<(f64, f64)> {
    let n = if max_width.is_finite() {
        ((b - a) / max_width).ceil().max(1.0) as usize
    } else {
        1
    };
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == n { b } else { a + h * (i + 1) as f64 };
            (lo, hi)
        })
        .collect()
}

/// Globally adaptive bisection over Gauss–Legendre panels. Each panel's error
/// is the difference between the rule on the panel and on its two halves.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::arg(format!("integration bounds [{a}, {b}] are invalid")));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let rule = GaussLegendre::new(spec.panel_rule)?;
    let mut seq = 0;
    let mut heap = BinaryHeap::new();
    for (lo, hi) in split_evenly(a, b, spec.max_width()) {
        let p = evaluate_panel(&rule, &f, lo, hi, seq);
        seq += 1;
        heap.push(ByError(p.error, p.seq, p));
    }
    let (mut run_value, mut run_error) = summarize(heap.iter().map(|e| &e.2));
    let mut since_exact = 0usize;
    loop {
        // Running totals drift; decide convergence on an exact re-sum.
        let near = run_error <= 1.5 * spec.target(run_value);
        let (value, error) = if near || since_exact >= RESUM_EVERY || !run_value.is_finite() {
            since_exact = 0;
            let exact = summarize(heap.iter().map(|e| &e.2));
            (run_value, run_error) = exact;
            exact
        } else {
            since_exact += 1;
            (run_value, run_error)
        };
        if !value.is_finite() {
            return Err(Error::Tolerance {
                context: "integrand produced a non-finite value".into(),
                estimate: value,
                residual: f64::INFINITY,
            });
        }
        if error <= spec.target(value) {
            return Ok(Estimate { value, error });
        }
        if heap.len() + 1 > spec.max_panels {
            return Err(Error::Tolerance {
                context: format!("adaptive 1D quadrature on [{a}, {b}] exhausted {} panels", spec.max_panels),
                estimate: value,
                residual: error,
            });
        }
        let worst = heap.pop().expect("heap is never empty").2;
        run_value -= worst.value;
        run_error -= worst.error;
        let m = 0.5 * (worst.a + worst.b);
        if !(m > worst.a && m < worst.b) {
            // Panel cannot be split further in f64.
            return Err(Error::Tolerance {
                context: "adaptive 1D quadrature reached f64 resolution".into(),
                estimate: value,
                residual: error,
            });
        }
        for (lo, hi) in [(worst.a, m), (m, worst.b)] {
            let p = evaluate_panel(&rule, &f, lo, hi, seq);
            seq += 1;
            run_value += p.value;
            run_error += p.error;
            heap.push(ByError(p.error, p.seq, p));
        }
    }
}

fn summarize<'a>(panels: impl Iterator<Item = &'a Panel>) -> (f64, f64) {
    let mut ps: Vec<&Panel> = panels.collect();
    ps.sort_by(|x, y| x.a.total_cmp(&y.a));
    let values: Vec<f64> = ps.iter().map(|p| p.value).collect();
    let errors: Vec<f64> = ps.iter().map(|p| p.error).collect();
    (pairwise_sum(&values), pairwise_sum(&errors))
}

/// `∫_a^∞ f` for integrands that decay exponentially beyond `decay_scale`.
///
/// The tail is cut into panels of geometrically growing width
/// `decay_scale·2^k`, each integrated with [`integrate_1d`]; summation stops
/// once two consecutive panels contribute less than the absolute target.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    decay_scale: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if !(a.is_finite() && decay_scale > 0.0 && decay_scale.is_finite()) {
        return Err(Error::arg("semi-infinite integration needs finite a and positive decay_scale"));
    }
    const MAX_PANELS: usize = 64;
    const GROWTH_WINDOW: usize = 8;
    let mut values = Vec::new();
    let mut errors = Vec::new();
    let mut lo = a;
    let mut width = decay_scale;
    let mut small_run = 0;
    let mut growth_run = 0;
    for _ in 0..MAX_PANELS {
        let hi = lo + width;
        let piece = integrate_1d(&f, lo, hi, spec)?;
        let prev = values.last().copied();
        values.push(piece.value);
        errors.push(piece.error);
        let total = pairwise_sum(&values);
        if piece.value.abs() <= spec.target(total) * 1e-2 {
            small_run += 1;
            if small_run >= 2 {
                return Ok(Estimate {
                    value: total,
                    error: pairwise_sum(&errors) + piece.value.abs(),
                });
            }
        } else {
            small_run = 0;
        }
        growth_run = match prev {
            Some(p) if piece.value.abs() >= p.abs() && piece.value != 0.0 => growth_run + 1,
            _ => 0,
        };
        if growth_run >= GROWTH_WINDOW {
            return Err(Error::Divergence(format!(
                "panel contributions kept growing up to x = {hi:e}"
            )));
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::Divergence(format!(
        "no convergence after {MAX_PANELS} geometric panels (reached x = {lo:e})"
    )))
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    fn quarters(&self) -> [Rect; 4] {
        let mx = 0.5 * (self.x0 + self.x1);
        let my = 0.5 * (self.y0 + self.y1);
        [
            Rect::new(self.x0, mx, self.y0, my),
            Rect::new(self.x0, mx, my, self.y1),
            Rect::new(mx, self.x1, self.y0, my),
            Rect::new(mx, self.x1, my, self.y1),
        ]
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    rect: Rect,
    value: f64,
    error: f64,
}

fn evaluate_cell<F: Fn(f64, f64) -> f64>(rule: &GaussLegendre, f: &F, rect: Rect) -> Cell {
    let coarse = rule.integrate_2d(f, &rect);
    let parts: Vec<f64> = rect.quarters().iter().map(|q| rule.integrate_2d(f, q)).collect();
    let fine = pairwise_sum(&parts);
    Cell {
        rect,
        value: fine,
        error: (fine - coarse).abs(),
    }
}

fn summarize_cells(heap: &BinaryHeap<ByError<Cell>>) -> (f64, f64) {
    let mut cells: Vec<(usize, &Cell)> = heap.iter().map(|e| (e.1, &e.2)).collect();
    cells.sort_by_key(|c| c.0);
    let values: Vec<f64> = cells.iter().map(|c| c.1.value).collect();
    let errors: Vec<f64> = cells.iter().map(|c| c.1.error).collect();
    (pairwise_sum(&values), pairwise_sum(&errors))
}

fn check_breaks(breaks: &[f64], axis: &str) -> Result<()> {
    if breaks.len() < 2 {
        return Err(Error::arg(format!("{axis} breakpoints need at least two entries")));
    }
    if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::arg(format!("{axis} breakpoints must be finite and sorted")));
    }
    Ok(())
}

/// `∫∫ f(x, y)` over `[x_breaks[0], x_breaks[last]] × [y_breaks[0], y_breaks[last]]`.
///
/// The domain is first cut at every breakpoint (so integrand kinks can sit
/// on panel edges), then at half the oscillation period if one is given.
/// Cells are refined into quarters, worst error first, until the summed error
/// meets the tolerance.
pub fn integrate_2d_panel<F: Fn(f64, f64) -> f64>(
    f: F,
    x_breaks: &[f64],
    y_breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    check_breaks(x_breaks, "x")?;
    check_breaks(y_breaks, "y")?;
    let rule = GaussLegendre::new(spec.panel_rule)?;
    let w = spec.max_width();
    let xs: Vec<(f64, f64)> = x_breaks
        .windows(2)
        .filter(|p| p[1] > p[0])
        .flat_map(|p| split_evenly(p[0], p[1], w))
        .collect();
    let ys: Vec<(f64, f64)> = y_breaks
        .windows(2)
        .filter(|p| p[1] > p[0])
        .flat_map(|p| split_evenly(p[0], p[1], w))
        .collect();
    if xs.is_empty() || ys.is_empty() {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut seq = 0;
    let mut heap = BinaryHeap::new();
    for &(x0, x1) in &xs {
        for &(y0, y1) in &ys {
            let c = evaluate_cell(&rule, &f, Rect::new(x0, x1, y0, y1));
            heap.push(ByError(c.error, seq, c));
            seq += 1;
        }
    }
    let (mut run_value, mut run_error) = summarize_cells(&heap);
    let mut since_exact = 0usize;
    loop {
        let near = run_error <= 1.5 * spec.target(run_value);
        let (value, error) = if near || since_exact >= RESUM_EVERY || !run_value.is_finite() {
            since_exact = 0;
            let exact = summarize_cells(&heap);
            (run_value, run_error) = exact;
            exact
        } else {
            since_exact += 1;
            (run_value, run_error)
        };
        if !value.is_finite() {
            return Err(Error::Tolerance {
                context: "2D integrand produced a non-finite value".into(),
                estimate: value,
                residual: f64::INFINITY,
            });
        }
        if error <= spec.target(value) {
            return Ok(Estimate { value, error });
        }
        if heap.len() + 3 > spec.max_panels {
            return Err(Error::Tolerance {
                context: format!("adaptive 2D quadrature exhausted {} panels", spec.max_panels),
                estimate: value,
                residual: error,
            });
        }
        let worst = heap.pop().expect("heap is never empty").2;
        run_value -= worst.value;
        run_error -= worst.error;
        for q in worst.rect.quarters() {
            let c = evaluate_cell(&rule, &f, q);
            run_value += c.value;
            run_error += c.error;
            heap.push(ByError(c.error, seq, c));
            seq += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn tables_are_consistent() {
        for &n in GaussLegendre::supported_orders() {
            let r = GaussLegendre::new(n).unwrap();
            assert_eq!(r.len(), n);
            let wsum: f64 = r.weights().iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "order {n}: {wsum}");
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            // exact for x^(2n-2)
            let deg = 2 * n - 2;
            let got = r.integrate(&|x: f64| x.powi(deg as i32), -1.0, 1.0);
            let want = 2.0 / (deg as f64 + 1.0);
            assert!((got - want).abs() < 1e-14, "order {n}");
        }
        assert!(GaussLegendre::new(10).is_err());
    }

    #[test]
    fn analytic_1d_integrals() {
        let s = spec();
        let e = integrate_1d(f64::sin, 0.0, PI, &s).unwrap();
        assert!((e.value - 2.0).abs() < 1e-14);
        let e = integrate_1d(|_| 1.0, 0.0, 1.0, &s).unwrap();
        assert_eq!(e.value, 1.0);
        let e = integrate_1d(|x| x, 2.0, 2.0, &s).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn rejects_bad_bounds_and_specs() {
        assert!(integrate_1d(|x| x, 1.0, 0.0, &spec()).is_err());
        let mut s = spec();
        s.rel_tol = 0.0;
        assert!(integrate_1d(|x| x, 0.0, 1.0, &s).is_err());
        let mut s = spec();
        s.max_panels = 3;
        assert!(s.validate().is_err());
    }

    #[test]
    fn exhausting_panels_returns_best_estimate() {
        let mut s = spec();
        s.max_panels = 4;
        s.rel_tol = 1e-15;
        s.abs_tol = 1e-300;
        match integrate_1d(|x: f64| x.sqrt(), 0.0, 1.0, &s) {
            Err(Error::Tolerance { estimate, residual, .. }) => {
                assert!((estimate - 2.0 / 3.0).abs() < 1e-4);
                assert!(residual > 0.0);
            }
            other => panic!("expected tolerance error, got {other:?}"),
        }
    }

    #[test]
    fn semi_infinite_exponential_and_divergence() {
        let e = integrate_semi_infinite(|x: f64| (-x).exp(), 0.0, 1.0, &spec()).unwrap();
        assert!((e.value - 1.0).abs() < 1e-13);
        assert!(matches!(
            integrate_semi_infinite(|_| 1.0, 0.0, 1.0, &spec()),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn bose_integral_is_120_zeta6() {
        let e = integrate_semi_infinite(|w: f64| w.powi(5) / w.exp_m1(), 1e-300, 1.0, &spec()).unwrap();
        let want = 8.0 * PI.powi(6) / 63.0;
        assert!((e.value - want).abs() / want < 1e-12, "{}", e.value);
    }

    #[test]
    fn analytic_2d_integrals() {
        let s = spec();
        let e = integrate_2d_panel(|t, u| t * u, &[0.0, 1.0], &[0.0, 1.0], &s).unwrap();
        assert!((e.value - 0.25).abs() < 1e-15);
        let e = integrate_2d_panel(|t, u| (t - u).cos(), &[0.0, 0.5, 1.0], &[0.0, 1.0], &s).unwrap();
        assert!((e.value - 2.0 * (1.0 - 1f64.cos())).abs() < 1e-14);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_input() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[1.0, 2.0, 3.0]), 6.0);
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }
}
