//! Whittaker functions `W_{η,μ}(y)` for real or purely imaginary μ, by
//! inward integration of the Whittaker equation from asymptotic data.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::{digamma, log_gamma};
use super::ode::{OdePath, PolyOde};
use super::quad::integrate_breaks;
use super::{QuadratureSpec, WhittakerParams};
use crate::error::{domain, Error, Result};

/// Below this argument the returned value carries an accuracy flag.
pub const DEGRADED_BELOW: f64 = 1e-6;

const ASYMPTOTIC_EPS: f64 = 1e-17;
const MAX_GROWTH: f64 = 1200.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerValue {
    pub value: f64,
    pub degraded: bool,
}

/// Sum of the asymptotic series `Σ c_k y^{-k}` and its y-derivative, or
/// `None` if the terms stop decreasing before reaching double precision.
fn asymptotic_series(eta: f64, mu2: f64, y: f64) -> Option<(f64, f64)> {
    let mut ck = 1.0;
    let mut s = 1.0;
    let mut ds = 0.0;
    let mut prev = f64::INFINITY;
    for k in 1..2000 {
        let kf = k as f64;
        let a = kf - 0.5 - eta;
        ck *= (mu2 - a * a) / kf;
        let term = ck * y.powi(-k);
        if term == 0.0 {
            return Some((s, ds));
        }
        if term.abs() > prev && k > 2 {
            return None;
        }
        prev = term.abs();
        s += term;
        ds -= kf * term / y;
        if term.abs() < ASYMPTOTIC_EPS * s.abs() {
            return Some((s, ds));
        }
    }
    None
}

/// `W_{η,μ}` tabulated on `[y_min, y_max]`.
#[derive(Debug, Clone)]
pub struct WhittakerSolver {
    eta: f64,
    mu2: f64,
    log_scale: f64,
    path: OdePath,
}

impl WhittakerSolver {
    /// Prepares evaluation on `[y_min, y_hi]`.
    pub fn new(eta: f64, mu: Complex64, y_min: f64, y_hi: f64) -> Result<Self> {
        WhittakerParams::new(eta, mu, y_min)?;
        if y_hi < y_min {
            return domain("Whittaker range is empty");
        }
        let mu2 = (mu * mu).re;
        let mut y_max = (4.0 * y_hi).max(40.0 + 2.0 * eta.abs() * y_hi.ln().abs());
        y_max = y_max.min(y_hi + 0.5 * MAX_GROWTH).max(y_hi);
        let (s, ds) = loop {
            if let Some(v) = asymptotic_series(eta, mu2, y_max) {
                break v;
            }
            y_max *= 2.0;
            if y_max > 1e7 {
                return Err(Error::Numerical(format!("asymptotic data for W_{{{eta},{mu}}} did not converge")));
            }
        };
        if y_max - y_min > 2.0 * MAX_GROWTH {
            return Err(Error::Numerical(format!(
                "Whittaker range [{y_min}, {y_max}] exceeds the double-precision growth budget"
            )));
        }
        let log_scale = -0.5 * y_max + eta * y_max.ln();
        let w0 = Complex64::new(s, 0.0);
        let dw0 = Complex64::new(s * (-0.5 + eta / y_max) + ds, 0.0);
        let beta = 0.25 - mu2;
        let ode = PolyOde {
            p2: vec![0.0.into(), 0.0.into(), 1.0.into()],
            p1: vec![],
            p0: vec![beta.into(), eta.into(), (-0.25).into()],
        };
        let path = OdePath::integrate(ode, y_max, w0, dw0, y_min);
        Ok(WhittakerSolver { eta, mu2, log_scale, path })
    }

    pub fn y_min(&self) -> f64 {
        self.path.y_min()
    }

    pub fn y_max(&self) -> f64 {
        self.path.y_max()
    }

    /// `W(y)`; beyond the tabulated top the asymptotic series is used.
    pub fn eval(&self, y: f64) -> f64 {
        if y >= self.path.y_max() {
            if let Some((s, _)) = asymptotic_series(self.eta, self.mu2, y) {
                return s * (-0.5 * y + self.eta * y.ln()).exp();
            }
        }
        (self.path.eval(y).0 * self.log_scale.exp()).re
    }

    /// `(W, W')` at `y` inside the table.
    pub fn eval_with_derivative(&self, y: f64) -> (f64, f64) {
        let (w, dw) = self.path.eval(y);
        let s = self.log_scale.exp();
        ((w * s).re, (dw * s).re)
    }

    /// Largest imaginary part seen relative to the real part at `y`.
    pub fn imag_ratio(&self, y: f64) -> f64 {
        let (w, _) = self.path.eval(y);
        w.im.abs() / w.re.abs().max(f64::MIN_POSITIVE)
    }

    /// ODE residual at `y`, relative to `|W(y)|`.
    pub fn residual(&self, y: f64) -> f64 {
        let (w, dw, d2w) = self.path.eval_full(y);
        self.path.ode().residual(y, w, dw, d2w) / w.norm()
    }
}

/// `W_{η,μ}(y)` for a single argument.
pub fn whittaker_w(p: WhittakerParams, spec: &QuadratureSpec) -> Result<WhittakerValue> {
    p.validate()?;
    spec.validate()?;
    let solver = WhittakerSolver::new(p.eta, p.mu, p.y, p.y)?;
    Ok(WhittakerValue { value: solver.eval(p.y), degraded: p.y < DEGRADED_BELOW })
}

/// `|W_{η,it}(y)| / (t^{η−1/2} e^{−πt/2} y^{1/2})`.
pub fn whittaker_uniform_ratio(eta: f64, t: f64, y: f64) -> Result<f64> {
    check_uniform(t, y)?;
    let solver = WhittakerSolver::new(eta, Complex64::new(0.0, t), y, y)?;
    Ok(uniform_ratio_with(&solver, eta, t, y))
}

fn check_uniform(t: f64, y: f64) -> Result<()> {
    if t < 1.0 {
        return domain(format!("uniform ratio needs t ≥ 1, got {t}"));
    }
    if !(y > 0.0 && y <= 1.5 * t) {
        return domain(format!("uniform ratio needs 0 < y ≤ 1.5t, got y = {y}"));
    }
    Ok(())
}

/// As [`whittaker_uniform_ratio`] with a prepared solver.
pub fn uniform_ratio_with(solver: &WhittakerSolver, eta: f64, t: f64, y: f64) -> f64 {
    solver.eval(y).abs() / (t.powf(eta - 0.5) * (-0.5 * PI * t).exp() * y.sqrt())
}

/// Sup of the uniform ratio over `y = 1.5t·j/n`, `j = 1..=n`.
pub fn whittaker_uniform_sup(eta: f64, t: f64, n: usize) -> Result<f64> {
    check_uniform(t, 1.5 * t)?;
    let y_lo = 1.5 * t / n as f64;
    let solver = WhittakerSolver::new(eta, Complex64::new(0.0, t), y_lo, 1.5 * t)?;
    Ok((1..=n).map(|j| uniform_ratio_with(&solver, eta, t, 1.5 * t * j as f64 / n as f64)).fold(0.0, f64::max))
}

fn decay_point(eta: f64, t: f64, spec: &QuadratureSpec) -> f64 {
    // W² ~ e^{-u} u^{2η} beyond the turning point near 2t.
    let base = (2.0 * t).max(2.0 * eta.abs()).max(1.0);
    base + 2.0 * spec.decay_length() + 4.0 * eta.abs() * base.ln().max(0.0) + 10.0
}

/// `∫₀^∞ W_{η,it}(4πy)² dy/y`, computed as `∫ W(u)² du/u` in `x = ln u`.
pub fn whittaker_norm_quadrature(eta: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let u_lo = 1e-14;
    let u_hi = decay_point(eta, t, spec);
    let solver = WhittakerSolver::new(eta, Complex64::new(0.0, t), u_lo, u_hi)?;
    let (x0, x1) = (u_lo.ln(), u_hi.ln());
    let pieces = 64;
    let breaks: Vec<f64> = (0..=pieces).map(|i| x0 + (x1 - x0) * i as f64 / pieces as f64).collect();
    let r = integrate_breaks(
        &mut |x: f64| {
            let w = solver.eval(x.exp());
            w * w
        },
        &breaks,
        spec,
    );
    if !r.converged {
        return Err(Error::Numerical("norm quadrature did not converge".into()));
    }
    Ok(r.value)
}

/// `2π·Im ψ(1/2−η+it) / (sinh(2πt)·|Γ(1/2−η+it)|²)`, the closed form of
/// the norm integral.
pub fn whittaker_norm_closed_form(eta: f64, t: f64) -> Result<f64> {
    if t == 0.0 {
        return domain("closed form needs t ≠ 0");
    }
    let z = Complex64::new(0.5 - eta, t);
    let psi = digamma(z)?;
    let lg = log_gamma(z)?;
    Ok(2.0 * PI * psi.im / (2.0 * PI * t).sinh() * (-2.0 * lg.re).exp())
}

/// `∫_{αt}^∞ W_{η,it}(4πy)² dy/y² / (t^{2η−1} e^{−πt})`.
pub fn whittaker_lower_bound_check(eta: f64, t: f64, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    if t < 1.0 {
        return domain(format!("lower-bound ratio needs t ≥ 1, got {t}"));
    }
    if !(alpha > 0.0 && alpha <= 3.0 / (8.0 * PI) + 1e-15) {
        return domain(format!("α = {alpha} outside (0, 3/(8π)]"));
    }
    spec.validate()?;
    let u_lo = 4.0 * PI * alpha * t;
    let u_hi = decay_point(eta, t, spec).max(u_lo + 2.0 * spec.decay_length());
    let solver = WhittakerSolver::new(eta, Complex64::new(0.0, t), u_lo, u_hi)?;
    let pieces = 64;
    let breaks: Vec<f64> = (0..=pieces).map(|i| u_lo + (u_hi - u_lo) * i as f64 / pieces as f64).collect();
    let r = integrate_breaks(
        &mut |u: f64| {
            let w = solver.eval(u);
            w * w / (u * u)
        },
        &breaks,
        spec,
    );
    if !r.converged {
        return Err(Error::Numerical("lower-bound quadrature did not converge".into()));
    }
    Ok(4.0 * PI * r.value / (t.powf(2.0 * eta - 1.0) * (-PI * t).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn closed_form_reductions() {
        for &y in &[0.01, 0.3, 1.0, 7.5, 30.0] {
            let p = WhittakerParams::new(0.0, Complex64::new(0.5, 0.0), y).unwrap();
            let w = whittaker_w(p, &spec()).unwrap().value;
            assert!((w - (-0.5 * y).exp()).abs() <= 1e-10 * (-0.5 * y).exp(), "y = {y}");
            let b = 0.25;
            let p = WhittakerParams::new(b + 0.5, Complex64::new(b, 0.0), y).unwrap();
            let w = whittaker_w(p, &spec()).unwrap().value;
            let exact = (-0.5 * y).exp() * y.powf(b + 0.5);
            assert!((w - exact).abs() <= 1e-10 * exact, "y = {y}");
        }
    }

    #[test]
    fn known_value_imaginary_order() {
        // W_{1/4, 2i}(3) from an independent high-precision evaluation.
        let p = WhittakerParams::imaginary(0.25, 2.0, 3.0).unwrap();
        let w = whittaker_w(p, &spec()).unwrap().value;
        let reference = 0.087_380_691_337_844_204_7;
        assert!((w - reference).abs() < 1e-9 * reference.abs(), "{w}");
    }

    #[test]
    fn flags_and_errors() {
        let p = WhittakerParams::imaginary(0.25, 1.0, 1e-7).unwrap();
        assert!(whittaker_w(p, &spec()).unwrap().degraded);
        assert!(WhittakerParams::new(0.0, Complex64::new(0.1, 0.1), 1.0).is_err());
        assert!(WhittakerParams::imaginary(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn residual_and_reality() {
        let s = WhittakerSolver::new(-1.25, Complex64::new(0.0, 5.0), 0.01, 20.0).unwrap();
        for k in 1..100 {
            let y = 0.01 + 19.99 * k as f64 / 100.0;
            assert!(s.residual(y) < 1e-6, "y = {y}");
            assert!(s.imag_ratio(y) < 1e-10);
        }
    }

    #[test]
    fn norm_identity_spot() {
        let q = whittaker_norm_quadrature(-1.25, 2.0, &spec()).unwrap();
        let c = whittaker_norm_closed_form(-1.25, 2.0).unwrap();
        assert!((q - c).abs() <= 1e-6 * c.abs(), "{q} vs {c}");
    }
}
