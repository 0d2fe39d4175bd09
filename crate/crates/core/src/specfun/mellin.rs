//! The Mellin–Barnes integral `G(n₁,n₂,m)` of the triple-product unfolding.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::log_gamma;
use super::quad::integrate_breaks;
use super::whittaker::WhittakerSolver;
use super::QuadratureSpec;
use crate::error::{domain, Error, Result};

struct MbSetup {
    kappa: f64,
    delta: f64,
    c0: f64,
    ratio: f64,
    prefactor: f64,
}

fn setup(n1: i64, n2: i64, m: i64, k: i64) -> Result<MbSetup> {
    if n1 < 0 || n2 == 0 || m <= 0 {
        return domain(format!("need n1 ≥ 0, n2 ≠ 0, m > 0; got ({n1}, {n2}, {m})"));
    }
    if m != n1 + n2 {
        return domain(format!("need m = n1 + n2; got {m} ≠ {n1} + {n2}"));
    }
    if k < 3 {
        return domain(format!("weight k = {k} must be at least 3"));
    }
    let kappa = k as f64 - 0.5;
    let delta = 0.5 * k as f64 - 0.75;
    let (c0, ratio) =
        if n2 > 0 { (0.5, n2 as f64 / n1 as f64) } else { (k as f64, n2.unsigned_abs() as f64 / m as f64) };
    let prefactor = (4.0 * PI * n2.unsigned_abs() as f64).powf(-delta);
    Ok(MbSetup { kappa, delta, c0, ratio, prefactor })
}

/// `(1/2πi) ∫_{(re_w)} Γ(κ/2+it−w)Γ(κ/2−it−w)Γ(w) / Γ(c₀−w) · X^w dw`
/// scaled by `(4π|n₂|)^{−(k/2−3/4)}`, with `c₀ = 1/2, X = n₂/n₁` for
/// `n₂ > 0` and `c₀ = k, X = |n₂|/m` for `n₂ < 0`.
pub fn mellin_barnes_g(
    n1: i64,
    n2: i64,
    m: i64,
    k: i64,
    t: Complex64,
    re_w: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let s = setup(n1, n2, m, k)?;
    spec.validate()?;
    let strip = 0.5 * s.kappa - t.im.abs();
    if !(re_w > 0.0 && re_w < strip) {
        return domain(format!("re_w = {re_w} outside the strip (0, {strip})"));
    }
    let a = Complex64::new(0.5 * s.kappa, 0.0) + Complex64::i() * t;
    let b = Complex64::new(0.5 * s.kappa, 0.0) - Complex64::i() * t;
    if n1 == 0 {
        // X = ∞: only the residue sum's leading Γ(a)Γ(b)/Γ(1/2) survives.
        let v = (log_gamma(a)? + log_gamma(b)? - log_gamma(0.5.into())?).exp();
        return Ok(v * s.prefactor);
    }
    let ln_x = s.ratio.ln();
    let integrand = |v: f64| -> Result<Complex64> {
        let w = Complex64::new(re_w, v);
        let lg = log_gamma(a - w)? + log_gamma(b - w)? + log_gamma(w)? - log_gamma(Complex64::new(s.c0, 0.0) - w)?;
        Ok((lg + w * ln_x).exp())
    };
    // |integrand| ~ e^{−π|v|} beyond |v| ≈ |Re t|.
    let v_max = t.re.abs() + (spec.decay_length() + 40.0) / PI + 10.0;
    let n = 64;
    let breaks: Vec<f64> = (0..=n).map(|i| -v_max + 2.0 * v_max * i as f64 / n as f64).collect();
    let mut failure = None;
    let r = integrate_breaks(
        &mut |v: f64| match integrand(v) {
            Ok(z) => z,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &breaks,
        spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !r.converged {
        return Err(Error::Numerical("Mellin–Barnes quadrature did not converge".into()));
    }
    Ok(r.value * (s.prefactor / (2.0 * PI)))
}

/// The defining integral
/// `∫₀^∞ y^{k/2−3/4} e^{−2π(n₁+m)y} W_{sgn(n₂)κ/2, it}(4π|n₂|y) dy/y` for real t.
pub fn mellin_barnes_direct(n1: i64, n2: i64, m: i64, k: i64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let s = setup(n1, n2, m, k)?;
    spec.validate()?;
    let eta = if n2 > 0 { 0.5 * s.kappa } else { -0.5 * s.kappa };
    let p = (n1 + m) as f64 / (2.0 * n2.unsigned_abs() as f64);
    // In u = 4π|n₂|y the integrand is u^{δ−1} e^{−pu} W(u) and decays like
    // e^{−(p+1/2)u} u^{δ−1+η}.
    let rate = p + 0.5;
    let u_hi = (2.0 * t.abs() + 1.0 + (spec.decay_length() + 30.0 + (s.delta + eta).abs() * 5.0) / rate).max(10.0);
    let u_lo = 1e-12;
    let solver = WhittakerSolver::new(eta, Complex64::new(0.0, t), u_lo, u_hi)?;
    let f = |x: f64| {
        let u = x.exp();
        u.powf(s.delta) * (-p * u).exp() * solver.eval(u)
    };
    let (x0, x1) = (u_lo.ln(), u_hi.ln());
    let n = 64;
    let breaks: Vec<f64> = (0..=n).map(|i| x0 + (x1 - x0) * i as f64 / n as f64).collect();
    let r = integrate_breaks(&mut { f }, &breaks, spec);
    if !r.converged {
        return Err(Error::Numerical("direct G quadrature did not converge".into()));
    }
    Ok(r.value * s.prefactor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let spec = QuadratureSpec::default();
        // Independent high-precision evaluations of the defining integral.
        for &((n1, n2, m, k, t), want) in &[
            ((1, 1, 2, 5, 1.0), -0.001_078_619_354_202_443_3),
            ((3, -1, 2, 5, 1.0), 0.000_079_462_684_600_106_217),
            ((2, 3, 5, 9, 2.0), 2.159_009_228_553_110_5e-6),
        ] {
            let mb = mellin_barnes_g(n1, n2, m, k, Complex64::new(t, 0.0), 0.7, &spec).unwrap();
            assert!((mb.re - want).abs() < 1e-9 * want.abs(), "MB {n1} {n2}: {mb}");
            assert!(mb.im.abs() < 1e-9 * want.abs());
            let d = mellin_barnes_direct(n1, n2, m, k, t, &spec).unwrap();
            assert!((d - want).abs() < 1e-8 * want.abs(), "direct {n1} {n2}: {d}");
        }
    }

    #[test]
    fn strip_and_shape_checks() {
        let spec = QuadratureSpec::default();
        let t = Complex64::new(1.0, 0.0);
        assert!(mellin_barnes_g(1, 1, 2, 5, t, 0.0, &spec).is_err());
        assert!(mellin_barnes_g(1, 1, 2, 5, t, 2.25, &spec).is_err());
        assert!(mellin_barnes_g(1, 1, 3, 5, t, 1.0, &spec).is_err());
        assert!(mellin_barnes_g(1, 1, 2, 2, t, 0.5, &spec).is_err());
    }
}
