//! The `kernel`, `gamma`, `tdec` and `sweep` subcommands. Each returns the
//! full output text; nothing is written until the computation succeeded.

use std::collections::BTreeMap;

use gravidec_core::special::kappa_constants;
use gravidec_core::stochastic::monte_carlo_gamma;
use gravidec_core::tensor::DenseRank4;
use gravidec_core::units::restore_units;
use gravidec_core::{
    gamma_closed, gamma_quadrature, gamma_state_terms, tau_dec_closed, tau_dec_root, DecoherenceReport, Error, KernelSample,
    PathTemplate,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ConfigError, Format, MethodChoice, Resolved, RunConfig, SweepSpec, Terms};
use crate::Failure;

pub const SWEEP_HEADER: &str = "param,gamma_velocity,gamma_grav,gamma_mixed,gamma_total,tau_dec";

/// Core errors: bad inputs are configuration errors, failed numerics are
/// non-convergence.
pub fn core_failure(e: Error) -> Failure {
    match e {
        Error::Argument(_) | Error::UnsupportedMode(_) | Error::Domain(_) => Failure::Config(e.to_string()),
        _ => Failure::Numerical(e.to_string()),
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

/// Fixed-width scientific notation with `precision` significant digits.
/// Rust float formatting ignores the locale.
pub fn fmt_num(x: f64, precision: usize) -> String {
    format!("{:.*e}", precision - 1, x)
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn cmd_kernel(cfg: &RunConfig, format: Format, t: f64, t_prime: f64, expand: bool) -> Result<String, Failure> {
    let r = cfg.resolve()?;
    let u = r.units;
    let ks = KernelSample::new(&r.state, r.m0, u.time_to_planck(t), u.time_to_planck(t_prime));
    let p = cfg.output.precision;
    let components: Vec<(usize, usize, usize, usize, f64)> = if expand {
        DenseRank4::indices()
            .map(|(i, j, k, l)| {
                let v = ks.component(i + 1, j + 1, k + 1, l + 1).map_err(core_failure)?;
                Ok((i + 1, j + 1, k + 1, l + 1, v))
            })
            .collect::<Result<_, Failure>>()?
    } else {
        Vec::new()
    };
    Ok(match format {
        Format::Json => {
            let mut rec = json!({
                "t": t,
                "t_prime": t_prime,
                "scalar": ks.scalar,
                "tensor": { "a": ks.tensor.a, "b": ks.tensor.b },
            });
            if expand {
                rec["components"] = components.iter().map(|&(i, j, k, l, v)| json!([i, j, k, l, v])).collect();
            }
            to_json(&rec)
        }
        Format::Csv if expand => {
            let mut s = String::from("t,t_prime,i,j,k,l,value\n");
            for (i, j, k, l, v) in components {
                s += &format!("{},{},{i},{j},{k},{l},{}\n", fmt_num(t, p), fmt_num(t_prime, p), fmt_num(v, p));
            }
            s
        }
        Format::Csv => format!(
            "t,t_prime,scalar,a,b\n{},{},{},{},{}\n",
            fmt_num(t, p),
            fmt_num(t_prime, p),
            fmt_num(ks.scalar, p),
            fmt_num(ks.tensor.a, p),
            fmt_num(ks.tensor.b, p)
        ),
    })
}

/// Closed-form τ_dec as a record: either a value or the reason there is
/// none. Only the documented domain case becomes a note.
fn tau_record(r: &Resolved) -> Result<Value, Failure> {
    match tau_dec_closed(&r.state, &r.bath, r.m0, r.path.k_contraction()) {
        Ok(t) => Ok(json!({ "value": r.units.time_from_planck(t), "note": null })),
        Err(Error::Domain(msg)) => Ok(json!({ "value": null, "note": msg })),
        Err(e) => Err(core_failure(e)),
    }
}

fn closed(r: &Resolved) -> Result<DecoherenceReport, Failure> {
    gamma_closed(&r.state, &r.bath, &r.path, r.m0).map_err(core_failure)
}

fn quadrature(r: &Resolved, cfg: &RunConfig) -> Result<DecoherenceReport, Failure> {
    gamma_quadrature(&r.state, &r.bath, &r.path, r.m0, &cfg.quadrature).map_err(core_failure)
}

pub fn cmd_gamma(cfg: &RunConfig, format: Format) -> Result<String, Failure> {
    let r = cfg.resolve()?;
    let mut reports: Vec<(&str, DecoherenceReport)> = Vec::new();
    if matches!(cfg.method, MethodChoice::Closed | MethodChoice::Both) {
        reports.push(("closed", closed(&r)?));
    }
    if matches!(cfg.method, MethodChoice::Quadrature | MethodChoice::Both) {
        reports.push(("quadrature", quadrature(&r, cfg)?));
    }
    let tau = if cfg.tau_dec { Some(tau_record(&r)?) } else { None };
    let mc = if cfg.mc.enabled {
        let est = monte_carlo_gamma(&r.state, r.m0, &r.path, &cfg.mc.to_core()).map_err(core_failure)?;
        Some(est)
    } else {
        None
    };
    let p = cfg.output.precision;
    Ok(match format {
        Format::Json => {
            let mut out = BTreeMap::new();
            out.insert("state", json!(r.state.name()));
            out.insert("units", json!(r.units));
            out.insert("kappa", json!(kappa_constants(&r.bath, &r.state, r.m0).map_err(core_failure)?));
            for (name, rep) in &reports {
                out.insert(name, json!(restore_units(rep, r.units)));
            }
            if let [(_, c), (_, q)] = reports.as_slice() {
                out.insert(
                    "discrepancy",
                    json!({
                        "velocity": rel_diff(c.gamma_velocity, q.gamma_velocity),
                        "grav": rel_diff(c.gamma_grav, q.gamma_grav),
                        "mixed": rel_diff(c.gamma_mixed, q.gamma_mixed),
                        "total": rel_diff(c.gamma_total, q.gamma_total),
                    }),
                );
            }
            if let Some(t) = tau {
                out.insert("tau_dec", t);
            }
            if let Some(e) = mc {
                out.insert("monte_carlo", json!(e));
            }
            to_json(&out)
        }
        Format::Csv => {
            let tau_s = tau
                .as_ref()
                .and_then(|t| t["value"].as_f64())
                .map(|v| fmt_num(v, p))
                .unwrap_or_default();
            let mut s = String::from("method,gamma_velocity,gamma_grav,gamma_mixed,gamma_total,tau_dec\n");
            for (name, rep) in &reports {
                s += &format!(
                    "{name},{},{},{},{},{tau_s}\n",
                    fmt_num(rep.gamma_velocity, p),
                    fmt_num(rep.gamma_grav, p),
                    fmt_num(rep.gamma_mixed, p),
                    fmt_num(rep.gamma_total, p)
                );
            }
            if let Some(e) = mc {
                s += &format!("monte_carlo,,{},,,\n", fmt_num(e.gamma, p));
            }
            s
        }
    })
}

pub fn cmd_tdec(cfg: &RunConfig, format: Format) -> Result<String, Failure> {
    let r = cfg.resolve()?;
    let closed = tau_record(&r)?;
    let template = PathTemplate::from(r.path);
    let root = tau_dec_root(&r.state, &r.bath, &template, r.m0, 1e-12).map_err(core_failure)?;
    let at_root = gamma_closed(&r.state, &r.bath, &template.path(root), r.m0).map_err(core_failure)?;
    let residual = (at_root.gamma_graviton() - 1.0).abs();
    let root_out = r.units.time_from_planck(root);
    let rel = closed["value"].as_f64().map(|c| rel_diff(c, root_out));
    let p = cfg.output.precision;
    Ok(match format {
        Format::Json => to_json(&json!({
            "state": r.state.name(),
            "units": r.units,
            "closed": closed,
            "root": root_out,
            "residual": residual,
            "relative_difference": rel,
            "cutoff_times_root": r.state.cutoff.max(r.state.state_cutoff()) * root,
        })),
        Format::Csv => format!(
            "closed,root,residual\n{},{},{}\n",
            closed["value"].as_f64().map(|v| fmt_num(v, p)).unwrap_or_default(),
            fmt_num(root_out, p),
            fmt_num(residual, p)
        ),
    })
}

/// One sweep point, in output order.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub gamma_velocity: f64,
    pub gamma_grav: f64,
    pub gamma_mixed: f64,
    pub gamma_total: f64,
    pub tau_dec: Option<f64>,
}

pub fn sweep_rows(cfg: &RunConfig, spec: &SweepSpec) -> Result<Vec<SweepRow>, Failure> {
    if cfg.method == MethodChoice::Both {
        return Err(Failure::Config("sweep needs method \"closed\" or \"quadrature\"".into()));
    }
    if spec.terms == Terms::State && cfg.method != MethodChoice::Closed {
        return Err(Failure::Config("sweep.terms \"state\" needs method \"closed\"".into()));
    }
    // resolve every point before computing anything
    let points: Vec<(f64, Resolved)> = spec
        .values()
        .into_iter()
        .map(|v| Ok((v, cfg.with_param(spec.param, v)?.resolve()?)))
        .collect::<Result<_, ConfigError>>()?;
    log::info!("sweep over {}: {} points", spec.param.name(), points.len());
    points
        .par_iter()
        .map(|(v, r)| {
            let rep = match cfg.method {
                MethodChoice::Quadrature => quadrature(r, cfg)?,
                _ => closed(r)?,
            };
            let tau_dec = if cfg.tau_dec { tau_record(r)?["value"].as_f64() } else { None };
            let (gamma_grav, gamma_mixed) = match spec.terms {
                Terms::Full => (rep.gamma_grav, rep.gamma_mixed),
                Terms::State => gamma_state_terms(&r.state, &r.bath, &r.path, r.m0).map_err(core_failure)?,
            };
            Ok(SweepRow {
                param: *v,
                gamma_velocity: rep.gamma_velocity,
                gamma_grav,
                gamma_mixed,
                gamma_total: rep.gamma_total,
                tau_dec,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow], precision: usize) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        let tau = r.tau_dec.map(|t| fmt_num(t, precision)).unwrap_or_default();
        s += &format!(
            "{},{},{},{},{},{tau}\n",
            fmt_num(r.param, precision),
            fmt_num(r.gamma_velocity, precision),
            fmt_num(r.gamma_grav, precision),
            fmt_num(r.gamma_mixed, precision),
            fmt_num(r.gamma_total, precision)
        );
    }
    s
}

/// Axis metadata written next to a sweep data file.
pub fn sweep_metadata(cfg: &RunConfig, spec: &SweepSpec) -> Result<String, Failure> {
    let r = cfg.resolve()?;
    Ok(to_json(&json!({
        "x": {
            "column": "param",
            "name": spec.param.name(),
            "scale": spec.scale,
            "min": spec.min,
            "max": spec.max,
            "count": spec.count,
        },
        "y": {
            "columns": ["gamma_velocity", "gamma_grav", "gamma_mixed", "gamma_total", "tau_dec"],
            "scale": "log",
        },
        "state": r.state.name(),
        "terms": spec.terms,
        "method": cfg.method,
        "units": r.units,
    })))
}

pub fn cmd_sweep(cfg: &RunConfig, format: Format) -> Result<String, Failure> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Failure::Config("sweep: config has no `sweep` block".into()))?;
    let rows = sweep_rows(cfg, spec)?;
    Ok(match format {
        Format::Csv => sweep_csv(&rows, cfg.output.precision),
        Format::Json => to_json(&json!({ "param": spec.param.name(), "rows": rows })),
    })
}
