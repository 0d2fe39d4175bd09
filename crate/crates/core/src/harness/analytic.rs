//! Special-function suites, the oscillatory-integral map, the remark
//! inner product and the theta multiplier.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::report::{sci, Check, SuiteReport, Table};
use super::{lin_grid, log_grid, trial_rng};
use crate::error::{domain, Result};
use crate::modforms::{random_gamma0_4, remark_closed_form, remark_inner_product, theta_transform_residual};
use crate::specfun::bessel::{bessel_difference_ratio, bessel_j_imag_order};
use crate::specfun::oscillatory::g_kappa_cumulative;
use crate::specfun::whittaker::whittaker_uniform_sup;
use crate::specfun::{
    mellin_barnes_direct, mellin_barnes_g, whittaker_lower_bound_check, whittaker_norm_closed_form,
    whittaker_norm_quadrature, QuadratureSpec,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormParams {
    pub etas: Vec<f64>,
    pub ts: Vec<f64>,
    pub tol: f64,
}

impl Default for NormParams {
    fn default() -> Self {
        NormParams { etas: vec![1.25, -1.25, 0.25, -0.25], ts: vec![1.0, 2.0, 5.0, 10.0], tol: 1e-6 }
    }
}

/// `∫ W_{η,it}(4πy)² dy/y` by quadrature against its digamma closed form.
pub fn norm_identity(p: &NormParams, spec: &QuadratureSpec) -> Result<SuiteReport> {
    let pts: Vec<(f64, f64)> = p.etas.iter().flat_map(|&e| p.ts.iter().map(move |&t| (e, t))).collect();
    let vals: Vec<(f64, f64, f64, f64)> = pts
        .par_iter()
        .map(|&(e, t)| Ok((e, t, whittaker_norm_quadrature(e, t, spec)?, whittaker_norm_closed_form(e, t)?)))
        .collect::<Result<_>>()?;
    let mut t = Table::new("whittaker-norm", &["eta", "t", "quadrature", "closed_form", "rel_error"]);
    for &(e, tt, q, c) in &vals {
        t.push(vec![e.to_string(), tt.to_string(), sci(q), sci(c), sci(rel(q, c))]);
    }
    let mut rep = SuiteReport::new("whittaker-norm", "Whittaker L² norm identity");
    rep.check(Check::at_most("max relative error", max_of(vals.iter().map(|v| rel(v.2, v.3))), p.tol));
    rep.tables.push(t);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UniformParams {
    pub etas: Vec<f64>,
    pub t_max: f64,
    /// Coarse grid: `t_points + 1` values of t, `y_points` values of y per t.
    pub t_points: usize,
    pub y_points: usize,
    /// Allowed relative change of the sup when both densities double.
    pub stability: f64,
}

impl Default for UniformParams {
    fn default() -> Self {
        UniformParams { etas: vec![1.25, -1.25], t_max: 40.0, t_points: 39, y_points: 200, stability: 0.05 }
    }
}

/// Sup of `|W_{η,it}(y)|/(t^{η−1/2}e^{−πt/2}y^{1/2})` over `1 ≤ t ≤ t_max`,
/// `0 < y ≤ 1.5t`, at the coarse density and at twice that density.
pub fn uniform_bound(p: &UniformParams) -> Result<SuiteReport> {
    if !(p.t_max >= 1.0) || p.t_points == 0 || p.y_points == 0 {
        return domain("uniform grid needs t_max ≥ 1 and positive point counts");
    }
    let mut rep = SuiteReport::new("whittaker-uniform", "uniform Whittaker bound on 0 < y ≤ 3t/2");
    let mut t = Table::new("whittaker-uniform", &["eta", "density", "t", "sup_ratio"]);
    for &eta in &p.etas {
        let mut sups = [0.0; 2];
        for (k, density) in [1usize, 2].into_iter().enumerate() {
            let ts = lin_grid(1.0, p.t_max, p.t_points * density);
            let vals: Vec<f64> =
                ts.par_iter().map(|&tt| whittaker_uniform_sup(eta, tt, p.y_points * density)).collect::<Result<_>>()?;
            for (&tt, &v) in ts.iter().zip(&vals) {
                t.push(vec![eta.to_string(), density.to_string(), tt.to_string(), sci(v)]);
            }
            sups[k] = max_of(vals);
        }
        rep.metric(format!("sup(eta={eta})"), sups[1]);
        rep.check(Check::at_most(format!("sup finite, η = {eta}"), sups[1], f64::MAX));
        rep.check(Check::at_most(format!("sup change on refinement, η = {eta}"), rel(sups[1], sups[0]), p.stability));
    }
    rep.tables.push(t);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LowerBoundParams {
    pub etas: Vec<f64>,
    pub alpha: f64,
    pub t_max: f64,
    pub t_points: usize,
    pub floor: f64,
    /// Allowed `max/min` across the t range.
    pub band: f64,
}

impl Default for LowerBoundParams {
    fn default() -> Self {
        LowerBoundParams {
            etas: vec![1.25, -1.25],
            alpha: 1.0 / (8.0 * PI),
            t_max: 30.0,
            t_points: 29,
            floor: 1e-3,
            band: 10.0,
        }
    }
}

/// The normalized tail integral `∫_{αt}^∞ W² dy/y²` over `1 ≤ t ≤ t_max`.
pub fn lower_bound(p: &LowerBoundParams, spec: &QuadratureSpec) -> Result<SuiteReport> {
    let ts = lin_grid(1.0, p.t_max, p.t_points);
    let mut rep = SuiteReport::new("whittaker-lower", "Whittaker lower bound uniformly in t ≥ 1");
    let mut t = Table::new("whittaker-lower", &["eta", "t", "alpha", "ratio", "ratio_half_alpha"]);
    for &eta in &p.etas {
        let vals: Vec<(f64, f64)> = ts
            .par_iter()
            .map(|&tt| {
                Ok((
                    whittaker_lower_bound_check(eta, tt, p.alpha, spec)?,
                    whittaker_lower_bound_check(eta, tt, 0.5 * p.alpha, spec)?,
                ))
            })
            .collect::<Result<_>>()?;
        for (&tt, &(v, h)) in ts.iter().zip(&vals) {
            t.push(vec![eta.to_string(), tt.to_string(), p.alpha.to_string(), sci(v), sci(h)]);
        }
        let lo = vals.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
        let hi = max_of(vals.iter().map(|v| v.0));
        let shrink = vals.iter().map(|&(v, h)| h - v).fold(f64::INFINITY, f64::min);
        rep.metric(format!("floor(eta={eta})"), lo);
        rep.check(Check::at_least(format!("min ratio, η = {eta}"), lo, p.floor));
        rep.check(Check::at_most(format!("max/min across t, η = {eta}"), hi / lo, p.band));
        rep.check(Check::at_least(format!("halving α never decreases the integral, η = {eta}"), shrink, 0.0));
    }
    rep.tables.push(t);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MellinParams {
    pub points: Vec<(i64, i64, i64)>,
    pub ks: Vec<i64>,
    pub ts: Vec<f64>,
    pub re_w: (f64, f64),
    pub tol: f64,
}

impl Default for MellinParams {
    fn default() -> Self {
        MellinParams {
            points: vec![(1, 1, 2), (2, 1, 3), (1, 3, 4), (3, -1, 2), (5, -2, 3), (4, -3, 1)],
            ks: vec![5, 9],
            ts: vec![1.0, 2.0],
            re_w: (0.5, 1.5),
            tol: 1e-6,
        }
    }
}

/// Mellin–Barnes contour integral against direct quadrature, and under a
/// shift of the contour.
pub fn mellin_barnes_check(p: &MellinParams, spec: &QuadratureSpec) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    for &k in &p.ks {
        for &tt in &p.ts {
            for &pt in &p.points {
                cases.push((pt, k, tt));
            }
        }
    }
    let vals: Vec<(f64, f64, f64)> = cases
        .par_iter()
        .map(|&((n1, n2, m), k, tt)| {
            let t = Complex64::new(tt, 0.0);
            let a = mellin_barnes_g(n1, n2, m, k, t, p.re_w.0, spec)?;
            let b = mellin_barnes_g(n1, n2, m, k, t, p.re_w.1, spec)?;
            Ok((a.re, b.re, mellin_barnes_direct(n1, n2, m, k, tt, spec)?))
        })
        .collect::<Result<_>>()?;
    let mut t =
        Table::new("mellin-barnes", &["n1", "n2", "m", "k", "t", "mb_a", "mb_b", "direct", "rel_direct", "rel_shift"]);
    for (&((n1, n2, m), k, tt), &(a, b, d)) in cases.iter().zip(&vals) {
        t.push(vec![
            n1.to_string(),
            n2.to_string(),
            m.to_string(),
            k.to_string(),
            tt.to_string(),
            sci(a),
            sci(b),
            sci(d),
            sci(rel(a, d)),
            sci(rel(b, a)),
        ]);
    }
    let mut rep = SuiteReport::new("mellin-barnes", "Mellin–Barnes representation of G(n₁,n₂,m)");
    rep.check(Check::at_most("max relative error vs direct", max_of(vals.iter().map(|v| rel(v.0, v.2))), p.tol));
    rep.check(Check::at_most("max relative contour-shift change", max_of(vals.iter().map(|v| rel(v.1, v.0))), p.tol));
    rep.tables.push(t);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BesselCheckParams {
    pub samples: usize,
    pub t_max: f64,
    pub q_max: f64,
}

impl Default for BesselCheckParams {
    fn default() -> Self {
        BesselCheckParams { samples: 1000, t_max: 10.0, q_max: 60.0 }
    }
}

/// `√(8/π)`, the large-`q` sup of the difference ratio.
pub const DIFFERENCE_CONSTANT: f64 = 1.595_769_121_605_730_7;

/// Conjugation symmetry and the difference bound of `J_{2it}` at random points.
pub fn bessel_check(p: &BesselCheckParams, seed: u64) -> Result<SuiteReport> {
    let vals: Vec<(f64, f64, f64, f64)> = (0..p.samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, (2 << 32) + i);
            let t = rng.random_range(0.05..p.t_max);
            let q = rng.random_range(0.01..p.q_max);
            let j = bessel_j_imag_order(t, q)?;
            let jm = bessel_j_imag_order(-t, q)?;
            let conj = (j.conj() - jm).norm() / j.norm().max(1.0);
            Ok((t, q, conj, bessel_difference_ratio(t, q)?))
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new("bessel", &["t", "q", "conj_error", "difference_ratio"]);
    for &(tt, q, c, d) in &vals {
        t.push(vec![sci(tt), sci(q), sci(c), sci(d)]);
    }
    let mut rep = SuiteReport::new("bessel", "J-Bessel conjugation symmetry and difference bound");
    rep.check(Check::at_most("max conjugation error", max_of(vals.iter().map(|v| v.2)), 1e-10));
    let diff = max_of(vals.iter().map(|v| v.3));
    // Hankel asymptotics: the ratio oscillates up to √(8/π) as q → ∞.
    rep.check(Check::at_most("max difference ratio", diff, DIFFERENCE_CONSTANT * 1.01));
    rep.check(Check::at_most("max difference ratio, constant 1", diff, 1.0).informational());
    rep.tables.push(t);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OscillatoryParams {
    pub kappas: Vec<f64>,
    /// Coarse counts of ω intervals on `[1, 100]` and on `[1e−3, 1]`.
    pub omega_points: usize,
    pub small_points: usize,
    pub t_max: f64,
    /// Coarse counts of T intervals on `[1, t_max]` for each regime.
    pub t_points: usize,
    pub small_t_points: usize,
    pub stability: f64,
}

impl Default for OscillatoryParams {
    fn default() -> Self {
        OscillatoryParams {
            kappas: vec![0.5, -0.5],
            omega_points: 10,
            small_points: 9,
            t_max: 50.0,
            t_points: 49,
            small_t_points: 196,
            stability: 0.1,
        }
    }
}

/// Sup of `|G_κ(ω,T)|/ω^{1/2}` for `ω ≥ 1` and of `|G_κ(ω,T)|/(ω(1+|log ω|))`
/// for `ω ≤ 1`, over `T ∈ [1, t_max]`. The fine grid doubles both densities;
/// the coarse grid is every other point of it.
pub fn oscillatory_map(p: &OscillatoryParams, spec: &QuadratureSpec) -> Result<SuiteReport> {
    if !(p.t_max >= 1.0) || [p.t_points, p.small_t_points, p.omega_points, p.small_points].contains(&0) {
        return domain("oscillatory map needs t_max ≥ 1 and positive point counts");
    }
    let mut rep = SuiteReport::new("oscillatory-map", "oscillatory integral bound for G_κ");
    let mut table =
        Table::new("oscillatory", &["kappa", "regime", "omega", "t_at_sup", "sup_ratio", "coarse_sup_ratio"]);
    for &kappa in &p.kappas {
        for regime in ["large", "small"] {
            let (omegas, ts) = if regime == "large" {
                (log_grid(1.0, 100.0, 2 * p.omega_points), lin_grid(1.0, p.t_max, 2 * p.t_points))
            } else {
                (log_grid(1e-3, 1.0, 2 * p.small_points), lin_grid(1.0, p.t_max, 2 * p.small_t_points))
            };
            let mut sups = [0.0f64; 2];
            for (i, &w) in omegas.iter().enumerate() {
                let g = g_kappa_cumulative(kappa, w, &ts, spec)?;
                let norm = if regime == "large" { w.sqrt() } else { w * (1.0 + w.ln().abs()) };
                let r: Vec<f64> = g.iter().map(|v| v.abs() / norm).collect();
                let (j, fine) =
                    r.iter().copied().enumerate().fold(
                        (0, 0.0),
                        |a, (j, v)| {
                            if v > a.1 || v.is_nan() {
                                (j, v)
                            } else {
                                a
                            }
                        },
                    );
                let coarse = if i % 2 == 0 { max_of(r.iter().copied().step_by(2)) } else { f64::NAN };
                sups[1] = max_of([sups[1], fine]);
                if i % 2 == 0 {
                    sups[0] = max_of([sups[0], coarse]);
                }
                let coarse_cell = if coarse.is_nan() { String::new() } else { sci(coarse) };
                table.push(vec![kappa.to_string(), regime.into(), sci(w), ts[j].to_string(), sci(fine), coarse_cell]);
            }
            rep.metric(format!("sup(kappa={kappa},{regime})"), sups[1]);
            rep.metric(format!("coarse_sup(kappa={kappa},{regime})"), sups[0]);
            rep.check(Check::at_most(format!("sup finite, κ = {kappa}, ω {regime}"), sups[1], f64::MAX));
            rep.check(Check::at_most(
                format!("sup change on refinement, κ = {kappa}, ω {regime}"),
                rel(sups[1], sups[0]),
                p.stability,
            ));
        }
    }
    rep.tables.push(table);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RemarkParams {
    pub ks: Vec<i64>,
    pub tol: f64,
}

impl Default for RemarkParams {
    fn default() -> Self {
        RemarkParams { ks: vec![5, 9], tol: 1e-6 }
    }
}

/// The level-576 inner product by quadrature against its closed form.
pub fn remark_check(p: &RemarkParams, spec: &QuadratureSpec) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("remark-check", "theta inner product at level 576");
    let mut t = Table::new("remark", &["k", "quadrature", "closed_form", "rel_error"]);
    for &k in &p.ks {
        let q = remark_inner_product(k, spec)?;
        let c = remark_closed_form(k)?;
        t.push(vec![k.to_string(), sci(q), sci(c), sci(rel(q, c))]);
        rep.metric(format!("quadrature(k={k})"), q);
        rep.metric(format!("closed_form(k={k})"), c);
        rep.check(Check::at_most(format!("relative error, k = {k}"), rel(q, c), p.tol));
    }
    rep.tables.push(t);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ThetaParams {
    pub trials: usize,
    pub bound: i64,
    pub tol: f64,
}

impl Default for ThetaParams {
    fn default() -> Self {
        ThetaParams { trials: 100, bound: 50, tol: 1e-8 }
    }
}

/// `θ(γz)` against the multiplier formula at random `γ ∈ Γ₀(4)` and `z`.
pub fn verify_theta(p: &ThetaParams, seed: u64) -> Result<SuiteReport> {
    let vals: Vec<([[i64; 2]; 2], Complex64, f64)> = (0..p.trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, (3 << 32) + i);
            let g = random_gamma0_4(&mut rng, p.bound);
            let z = Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(0.5..1.5));
            Ok((g, z, theta_transform_residual(g, z, 0)?))
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new("theta", &["a", "b", "c", "d", "z_re", "z_im", "residual"]);
    for &(g, z, r) in &vals {
        t.push(vec![
            g[0][0].to_string(),
            g[0][1].to_string(),
            g[1][0].to_string(),
            g[1][1].to_string(),
            sci(z.re),
            sci(z.im),
            sci(r),
        ]);
    }
    let mut rep = SuiteReport::new("verify-theta", "theta multiplier on Γ₀(4)");
    rep.check(Check::at_most("max residual", max_of(vals.iter().map(|v| v.2)), p.tol));
    rep.tables.push(t);
    Ok(rep)
}
