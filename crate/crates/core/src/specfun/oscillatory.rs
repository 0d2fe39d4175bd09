//! The oscillatory integrals `I_κ(ω,t)` and `G_κ(ω,T) = ∫₀^T t·I_κ(ω,t) dt`.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

use super::bessel::{bessel_k, j_moment_series, BesselJ, SERIES_MAX};
use super::gamma::log_gamma;
use super::quad::{gauss_legendre, integrate, integrate_breaks, wynn_epsilon};
use super::QuadratureSpec;
use crate::error::{domain, Error, Result};

/// `I_κ` is even in `t`; at `|t|` below this it is evaluated here.
pub const T_FLOOR: f64 = 1e-4;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check_kappa(kappa: f64, omega: f64) -> Result<()> {
    if !(kappa > -2.0 && kappa < 2.0) {
        return domain(format!("κ = {kappa} outside (−2, 2)"));
    }
    if !(omega > 0.0) {
        return domain(format!("ω must be positive, got {omega}"));
    }
    Ok(())
}

/// `∫₀^ω J_{2it}(q) q^{κ−1} dq`, analytically continued in κ.
fn bessel_moment(kappa: f64, omega: f64, t: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    let nu = c(0.0, 2.0 * t);
    if omega <= SERIES_MAX {
        return j_moment_series(nu, kappa, omega);
    }
    let head = j_moment_series(nu, kappa, SERIES_MAX)?;
    let j = BesselJ::new(t, omega)?;
    let n = ((omega - SERIES_MAX) / PI).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=n).map(|i| SERIES_MAX + (omega - SERIES_MAX) * i as f64 / n as f64).collect();
    let scale = (PI * t).cosh();
    let local = QuadratureSpec { abs_tol: spec.abs_tol * scale, ..*spec };
    let r = integrate_breaks(&mut |q: f64| j.eval(q) * q.powf(kappa - 1.0), &breaks, &local);
    if !r.converged {
        return Err(Error::Numerical(format!("Bessel moment on [{SERIES_MAX}, {omega}] did not converge")));
    }
    Ok(head + r.value)
}

/// `∫₀^∞ J_ν(q) q^{κ−1} dq = 2^{κ−1} Γ((ν+κ)/2) / Γ((ν−κ)/2 + 1)`.
fn bessel_mellin(nu: Complex64, kappa: f64) -> Result<Complex64> {
    let lg = log_gamma((nu + kappa) * 0.5)? - log_gamma((nu - kappa) * 0.5 + 1.0)?;
    Ok(lg.exp() * 2f64.powf(kappa - 1.0))
}

/// `I_κ(ω,t)` through the J-Bessel representations: a finite q-integral for
/// κ > 0, the tail integral over (ω, ∞) for κ ≤ 0.
pub fn i_kappa(kappa: f64, omega: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_kappa(kappa, omega)?;
    spec.validate()?;
    let t = t.abs().max(T_FLOOR);
    let moment = bessel_moment(kappa, omega, t, spec)?;
    let (sign, part) =
        if kappa > 0.0 { (-1.0, moment) } else { (1.0, bessel_mellin(c(0.0, 2.0 * t), kappa)? - moment) };
    let (s, co) = (FRAC_PI_2 * kappa).sin_cos();
    let bracket = co / (PI * t).cosh() * part.re + s / (PI * t).sinh() * part.im;
    Ok(sign * 2.0 * PI * omega.powf(1.0 - kappa) * bracket)
}

/// `I_κ(ω,t) = 2ω ∫_{−π/2}^{π/2} K_{2it}(ω e^{iθ}) e^{iκθ} dθ`, the contour
/// along the unit circle, with K from I-Bessel series.
pub fn i_kappa_contour(kappa: f64, omega: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_kappa(kappa, omega)?;
    let t = t.abs().max(T_FLOOR);
    let nu = c(0.0, 2.0 * t);
    let mut failure = None;
    let r = integrate(
        |th: f64| {
            let z = Complex64::from_polar(omega, th);
            match bessel_k(nu, z) {
                Ok(k) => k * Complex64::from_polar(1.0, kappa * th),
                Err(e) => {
                    failure.get_or_insert(e);
                    c(0.0, 0.0)
                }
            }
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 * omega * r.value.re)
}

const G_PANEL: f64 = 0.5;
const G_NODES: usize = 20;

/// `G_κ(ω,T)` for every `T` in `t_ends` (ascending) by composite
/// Gauss–Legendre quadrature of `t·I_κ(ω,t)` over panels of width ≤ 1/2.
pub fn g_kappa_cumulative(kappa: f64, omega: f64, t_ends: &[f64], spec: &QuadratureSpec) -> Result<Vec<f64>> {
    check_kappa(kappa, omega)?;
    if t_ends.iter().any(|&t| t < 0.0) || t_ends.windows(2).any(|w| w[1] < w[0]) {
        return domain("T values must be nonnegative and ascending");
    }
    let mut cuts = vec![0.0];
    for &te in t_ends {
        let last = *cuts.last().unwrap();
        let n = ((te - last) / G_PANEL).ceil() as usize;
        for i in 1..=n {
            cuts.push(last + (te - last) * i as f64 / n as f64);
        }
    }
    let (x, w) = gauss_legendre(G_NODES);
    let panels: Vec<f64> = cuts
        .par_windows(2)
        .map(|p| {
            let (a, b) = (p[0], p[1]);
            let h = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let mut acc = 0.0;
            for (xi, wi) in x.iter().zip(&w) {
                let t = mid + h * xi;
                acc += wi * t * i_kappa(kappa, omega, t, spec)?;
            }
            Ok(acc * h)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(t_ends.len());
    let mut acc = 0.0;
    let mut k = 0;
    for &te in t_ends {
        while k < panels.len() && cuts[k + 1] <= te + 1e-12 {
            acc += panels[k];
            k += 1;
        }
        out.push(acc);
    }
    Ok(out)
}

/// `G_κ(ω,T)` by t-quadrature of `I_κ`.
pub fn g_kappa(kappa: f64, omega: f64, t_max: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(g_kappa_cumulative(kappa, omega, &[t_max], spec)?[0])
}

const X_ASYM: f64 = 40.0;

/// `∫_X^∞ u^ρ e^{iu} du` (Abel-regularized) for `X ≥ 40` by its asymptotic
/// expansion; returns the non-oscillating factor `A` with `I = e^{iX}·A`.
fn osc_tail_factor(rho: f64, x: f64) -> Complex64 {
    let mut term = c(0.0, 1.0) * x.powf(rho);
    let mut acc = term;
    let mut prev = term.norm();
    for j in 1..200 {
        term *= c(0.0, (rho - j as f64 + 1.0) / x);
        let m = term.norm();
        if m > prev || m < 1e-18 * acc.norm() {
            if m < prev {
                acc += term;
            }
            break;
        }
        acc += term;
        prev = m;
    }
    acc
}

/// Tabulated `∫_X^∞ u^ρ e^{iu} du` on `[x_min, ∞)`.
struct OscIntegral {
    rho: f64,
    /// Ascending nodes and the integral from each node to ∞.
    nodes: Vec<f64>,
    values: Vec<Complex64>,
    gl: (Vec<f64>, Vec<f64>),
}

impl OscIntegral {
    fn new(rho: f64, x_min: f64) -> Self {
        let gl = gauss_legendre(24);
        let mut nodes = Vec::new();
        let mut x = X_ASYM;
        while x > x_min {
            nodes.push(x);
            x = if x > 1.0 { (x - 0.5).max(1.0) } else { x / 1.25 };
        }
        nodes.push(x_min.min(X_ASYM));
        nodes.reverse();
        let mut values = vec![c(0.0, 0.0); nodes.len()];
        let top = nodes.len() - 1;
        values[top] = Complex64::from_polar(1.0, nodes[top]) * osc_tail_factor(rho, nodes[top]);
        let mut me = OscIntegral { rho, nodes, values, gl };
        for i in (0..top).rev() {
            let v = me.panel(me.nodes[i], me.nodes[i + 1]);
            me.values[i] = me.values[i + 1] + v;
        }
        me
    }

    fn panel(&self, a: f64, b: f64) -> Complex64 {
        let (x, w) = &self.gl;
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        let mut acc = c(0.0, 0.0);
        for (xi, wi) in x.iter().zip(w) {
            let u = m + h * xi;
            acc += Complex64::from_polar(u.powf(self.rho), u) * *wi;
        }
        acc * h
    }

    fn eval(&self, x: f64) -> Complex64 {
        if x >= X_ASYM {
            return Complex64::from_polar(1.0, x) * osc_tail_factor(self.rho, x);
        }
        let i = self.nodes.partition_point(|&n| n < x).min(self.nodes.len() - 1);
        self.values[i] + self.panel(x, self.nodes[i])
    }
}

/// `G_κ(ω,T)` from the ξ double-integral form
/// `−ω^{1−κ} ∫₀^∞ (sinh ξ/ξ)(1 − cos 2Tξ)(cosh ξ)^{−1−κ} Re[e^{−iπκ/2} ∫_{ω cosh ξ}^∞ u^κ e^{iu} du] dξ`.
pub fn g_kappa_xi(kappa: f64, omega: f64, t_max: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_kappa(kappa, omega)?;
    spec.validate()?;
    if t_max == 0.0 {
        return Ok(0.0);
    }
    let tt = t_max;
    let rot = Complex64::from_polar(1.0, -FRAC_PI_2 * kappa);
    let osc = OscIntegral::new(kappa, omega);
    let local = QuadratureSpec { max_subdivisions: spec.max_subdivisions.max(20_000), ..*spec };

    // ξ ∈ [0, 1].
    let xi_rate = 2.0 * tt + omega * 1f64.sinh() + 1.0;
    let n0 = ((xi_rate / PI).ceil() as usize * 2).max(4);
    let breaks: Vec<f64> = (0..=n0).map(|i| i as f64 / n0 as f64).collect();
    let f_xi = |xi: f64| {
        if xi == 0.0 {
            return 0.0;
        }
        let ch = xi.cosh();
        let w = (rot * osc.eval(omega * ch)).re;
        (xi.sinh() / xi) * (1.0 - (2.0 * tt * xi).cos()) * ch.powf(-1.0 - kappa) * w
    };
    let head = integrate_breaks(&mut { f_xi }, &breaks, &local);

    // v = cosh ξ on [cosh 1, v1].
    let v0 = 1f64.cosh();
    let v1 = (4.0 * tt / omega + 2.0).max(X_ASYM / omega + 1.0).max(v0 + 1.0);
    let v_rate = omega + 2.0 * tt / 1f64.sinh();
    let n1 = (((v1 - v0) * v_rate / PI).ceil() as usize).max(4);
    let breaks: Vec<f64> = (0..=n1).map(|i| v0 + (v1 - v0) * i as f64 / n1 as f64).collect();
    let f_v = |v: f64| {
        let xi = v.acosh();
        let w = (rot * osc.eval(omega * v)).re;
        (1.0 - (2.0 * tt * xi).cos()) / xi * v.powf(-1.0 - kappa) * w
    };
    let mid = integrate_breaks(&mut { f_v }, &breaks, &local);

    // [v1, ∞): three single-phase pieces, each summed over half periods of
    // its own phase and extrapolated.
    let mut tail = 0.0;
    for (s, weight) in [(0.0, 1.0), (1.0, -0.5), (-1.0, -0.5)] {
        let phase = |v: f64| omega * v + s * 2.0 * tt * v.acosh();
        let dphase = |v: f64| omega + s * 2.0 * tt / (v * v - 1.0).sqrt();
        let amp =
            |v: f64| -> Complex64 { rot * osc_tail_factor(kappa, omega * v) * (v.powf(-1.0 - kappa) / v.acosh()) };
        let piece = |v: f64| amp(v) * Complex64::from_polar(1.0, phase(v));
        let mut ends = vec![v1];
        let p0 = phase(v1);
        let mut partial_re = Vec::new();
        let mut acc = c(0.0, 0.0);
        for k in 1..=160 {
            let target = p0 + k as f64 * PI;
            let mut v = *ends.last().unwrap() + PI / dphase(*ends.last().unwrap());
            for _ in 0..50 {
                let dv = (phase(v) - target) / dphase(v);
                v -= dv;
                if dv.abs() < 1e-13 * v {
                    break;
                }
            }
            let a = *ends.last().unwrap();
            let r = integrate(&piece, a, v, &local);
            acc += r.value;
            partial_re.push(acc.re * weight);
            ends.push(v);
        }
        tail += wynn_epsilon(&partial_re[partial_re.len() - 60..]);
    }

    let total = head.value + mid.value + tail;
    Ok(-omega.powf(1.0 - kappa) * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn contour_matches_bessel_form() {
        for &(k, w, t) in &[(0.5, 2.0, 1.0), (-0.5, 2.0, 1.0), (1.5, 3.0, 0.7), (-1.5, 0.5, 2.0)] {
            let a = i_kappa(k, w, t, &spec()).unwrap();
            let b = i_kappa_contour(k, w, t, &spec()).unwrap();
            assert!((a - b).abs() < 1e-8 * a.abs().max(1.0), "{k} {w} {t}: {a} vs {b}");
        }
        // Independent high-precision value at (1/2, 2, 1).
        let a = i_kappa(0.5, 2.0, 1.0, &spec()).unwrap();
        assert!((a - 1.353_095_339_946_792).abs() < 1e-9);
    }

    #[test]
    fn kappa_zero_sides_agree() {
        let left = i_kappa(-1e-9, 3.0, 1.5, &spec()).unwrap();
        let right = i_kappa(1e-9, 3.0, 1.5, &spec()).unwrap();
        assert!((left - right).abs() < 1e-6);
    }

    #[test]
    fn large_omega_uses_continuation() {
        let a = i_kappa(0.5, 30.0, 1.0, &spec()).unwrap();
        let b = i_kappa_contour(0.5, 30.0, 1.0, &spec()).unwrap();
        assert!((a - b).abs() < 1e-6 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn domain_errors() {
        assert!(i_kappa(2.0, 1.0, 1.0, &spec()).is_err());
        assert!(i_kappa(0.5, 0.0, 1.0, &spec()).is_err());
        assert_eq!(g_kappa(0.5, 1.0, 0.0, &spec()).unwrap(), 0.0);
    }

    #[test]
    fn g_routes_agree() {
        for &(k, w, t) in &[(0.5, 2.0, 3.0), (1.5, 1.0, 5.0), (-0.5, 4.0, 2.0), (-1.5, 0.3, 4.0), (0.0, 3.0, 6.0)] {
            let a = g_kappa(k, w, t, &spec()).unwrap();
            let b = g_kappa_xi(k, w, t, &spec()).unwrap();
            assert!((a - b).abs() < 1e-4 * a.abs().max(1e-3), "{k} {w} {t}: {a} vs {b}");
        }
    }
}
