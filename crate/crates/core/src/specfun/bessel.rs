//! Bessel functions of complex (mainly purely imaginary) order.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::log_gamma;
use super::ode::{OdePath, PolyOde};
use crate::error::{domain, Error, Result};

/// Largest argument at which the ascending series is used.
pub const SERIES_MAX: f64 = 12.0;

const SERIES_EPS: f64 = 1e-17;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(J_ν(q), J'_ν(q))` from the ascending series.
pub fn j_series(nu: Complex64, q: f64) -> Result<(Complex64, Complex64)> {
    if q <= 0.0 {
        return domain(format!("Bessel argument must be positive, got {q}"));
    }
    let half = 0.5 * q;
    let mut term = (nu * half.ln() - log_gamma(nu + 1.0)?).exp();
    let x2 = -half * half;
    let mut j = term;
    let mut dj = term * nu / q;
    let mut big = term.norm();
    for k in 1..2000 {
        let kf = k as f64;
        term = term * x2 / (kf * (nu + kf));
        j += term;
        dj += term * (nu + 2.0 * kf) / q;
        big = big.max(term.norm());
        if term.norm() <= SERIES_EPS * big && kf > half {
            break;
        }
    }
    Ok((j, dj))
}

/// Termwise integral `∫₀^ω J_ν(q) q^{κ−1} dq` of the ascending series, valid
/// by analytic continuation whenever `ν + κ` avoids the nonpositive even
/// integers.
pub fn j_moment_series(nu: Complex64, kappa: f64, omega: f64) -> Result<Complex64> {
    let half = 0.5 * omega;
    let mut base = (nu * half.ln() - log_gamma(nu + 1.0)?).exp() * omega.powf(kappa);
    let x2 = -half * half;
    let mut acc = base / (nu + kappa);
    let mut big = acc.norm();
    for k in 1..2000 {
        let kf = k as f64;
        base = base * x2 / (kf * (nu + kf));
        let term = base / (nu + kappa + 2.0 * kf);
        acc += term;
        big = big.max(term.norm());
        if term.norm() <= SERIES_EPS * big && kf > half {
            break;
        }
    }
    Ok(acc)
}

/// Hankel's large-argument expansion, or `None` when its terms stall above
/// double precision.
pub fn j_hankel(nu: Complex64, q: f64) -> Option<Complex64> {
    let mu = 4.0 * nu * nu;
    let mut p = c(1.0, 0.0);
    let mut qq = c(0.0, 0.0);
    let mut a = c(1.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for k in 1..400 {
        let kf = k as f64;
        let odd = (2 * k - 1) as f64;
        a = a * (mu - odd * odd) / (kf * 8.0 * q);
        let mag = a.norm();
        if mag > prev && k > 2 {
            break;
        }
        prev = mag;
        match k % 4 {
            1 => qq += a,
            2 => p -= a,
            3 => qq -= a,
            _ => p += a,
        }
        if mag < 1e-17 * p.norm().max(qq.norm()) {
            converged = true;
            break;
        }
        if a == c(0.0, 0.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let w = c(q - 0.25 * PI, 0.0) - nu * (0.5 * PI);
    Some((p * w.cos() - qq * w.sin()) * (2.0 / (PI * q)).sqrt())
}

pub fn bessel_ode(nu: Complex64) -> PolyOde {
    PolyOde {
        p2: vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        p1: vec![c(0.0, 0.0), c(1.0, 0.0)],
        p0: vec![-nu * nu, c(0.0, 0.0), c(1.0, 0.0)],
    }
}

/// `J_{2it}(q)` for one argument: series up to [`SERIES_MAX`], Hankel's
/// expansion where it reaches double precision, otherwise continuation of
/// the series data by Taylor steps of Bessel's equation.
pub fn bessel_j_imag_order(t: f64, q: f64) -> Result<Complex64> {
    if !(q > 0.0) {
        return domain(format!("Bessel argument must be positive, got {q}"));
    }
    let nu = c(0.0, 2.0 * t);
    if q <= SERIES_MAX {
        return Ok(j_series(nu, q)?.0);
    }
    if let Some(v) = j_hankel(nu, q) {
        return Ok(v);
    }
    Ok(BesselJ::new(t, q)?.eval(q))
}

/// Tabulated `J_{2it}` on `(0, q_max]` for repeated evaluation.
#[derive(Debug, Clone)]
pub struct BesselJ {
    nu: Complex64,
    path: Option<OdePath>,
}

impl BesselJ {
    pub fn new(t: f64, q_max: f64) -> Result<Self> {
        let nu = c(0.0, 2.0 * t);
        let path = if q_max > SERIES_MAX {
            let (j, dj) = j_series(nu, SERIES_MAX)?;
            Some(OdePath::integrate(bessel_ode(nu), SERIES_MAX, j, dj, q_max))
        } else {
            None
        };
        Ok(BesselJ { nu, path })
    }

    pub fn order(&self) -> Complex64 {
        self.nu
    }

    pub fn q_max(&self) -> f64 {
        self.path.as_ref().map_or(SERIES_MAX, |p| p.y_max())
    }

    /// `J_{2it}(q)`; `q` must lie in `(0, q_max]`.
    pub fn eval(&self, q: f64) -> Complex64 {
        match &self.path {
            Some(p) if q > SERIES_MAX => p.eval(q).0,
            _ => j_series(self.nu, q).map(|v| v.0).unwrap_or(c(f64::NAN, f64::NAN)),
        }
    }
}

/// `I_ν(z)` for complex order and argument from the ascending series.
pub fn bessel_i_series(nu: Complex64, z: Complex64) -> Result<Complex64> {
    let half = z * 0.5;
    let mut term = (nu * half.ln() - log_gamma(nu + 1.0)?).exp();
    let x2 = half * half;
    let mut acc = term;
    let mut big = term.norm();
    for k in 1..4000 {
        let kf = k as f64;
        term = term * x2 / (kf * (nu + kf));
        acc += term;
        big = big.max(term.norm());
        if term.norm() <= SERIES_EPS * big && kf > half.norm() {
            break;
        }
    }
    Ok(acc)
}

/// `K_ν(z) = (π/2)(I_{−ν}(z) − I_ν(z)) / sin(νπ)` for non-integer ν.
pub fn bessel_k(nu: Complex64, z: Complex64) -> Result<Complex64> {
    let s = (nu * PI).sin();
    if s.norm() < 1e-300 {
        return Err(Error::Domain("K_ν via I-series needs non-integer ν".into()));
    }
    Ok((bessel_i_series(-nu, z)? - bessel_i_series(nu, z)?) * (0.5 * PI) / s)
}

/// `min(q^{-1/2}, 1 + |log q|)`, the shape of the uniform J-Bessel bounds.
pub fn bessel_envelope(q: f64) -> f64 {
    q.powf(-0.5).min(1.0 + q.ln().abs())
}

/// `|J_{2it}(q)| / (cosh(πt)·envelope(q))`.
pub fn bessel_bound_ratio(t: f64, q: f64) -> Result<f64> {
    Ok(bessel_j_imag_order(t, q)?.norm() / ((PI * t).cosh() * bessel_envelope(q)))
}

/// `|J_{2it}(q) − J_{−2it}(q)| / (|sinh(πt)|·envelope(q))`.
pub fn bessel_difference_ratio(t: f64, q: f64) -> Result<f64> {
    let j = bessel_j_imag_order(t, q)?;
    let jm = bessel_j_imag_order(-t, q)?;
    Ok((j - jm).norm() / ((PI * t).sinh().abs() * bessel_envelope(q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j0_limits() {
        let v = bessel_j_imag_order(0.0, 1e-8).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
        // J_0(1), J_0(20) reference values.
        let v = bessel_j_imag_order(0.0, 1.0).unwrap();
        assert!((v.re - 0.765_197_686_557_966_6).abs() < 1e-14);
        let v = bessel_j_imag_order(0.0, 20.0).unwrap();
        assert!((v.re - 0.167_024_664_340_583_1).abs() < 1e-13);
        assert!(bessel_j_imag_order(1.0, 0.0).is_err());
    }

    #[test]
    fn regimes_agree_in_overlap() {
        for &t in &[0.0, 0.5, 1.0, 2.0] {
            for &q in &[30.0, 45.0, 80.0] {
                let nu = c(0.0, 2.0 * t);
                let Some(h) = j_hankel(nu, q) else { continue };
                let o = BesselJ::new(t, q).unwrap().eval(q);
                assert!((h - o).norm() <= 1e-10 * h.norm().max(1e-300) * (PI * t).cosh(), "t={t} q={q}");
            }
        }
        // Series against continuation just above the switch point.
        let nu = c(0.0, 3.0);
        let s = j_series(nu, 12.5).unwrap().0;
        let o = BesselJ::new(1.5, 12.5).unwrap().eval(12.5);
        assert!((s - o).norm() < 1e-9 * s.norm());
    }

    #[test]
    fn moment_series_matches_quadrature() {
        use crate::specfun::{quad::integrate, QuadratureSpec};
        let spec = QuadratureSpec { abs_tol: 1e-14, rel_tol: 1e-12, max_subdivisions: 400, truncation_decades: 16 };
        let nu = c(0.0, 1.4);
        let kappa = 0.5;
        let m = j_moment_series(nu, kappa, 3.0).unwrap();
        // Substitute q = x² to tame the q^{-1/2} endpoint.
        let r = integrate(
            |x: f64| j_series(nu, x * x).unwrap().0 * (2.0 * x * (x * x).powf(kappa - 1.0)),
            1e-12,
            3f64.sqrt(),
            &spec,
        );
        assert!((m - r.value).norm() < 1e-10);
    }

    #[test]
    fn k_bessel_real_case() {
        // K_{1/2}(x) = sqrt(π/(2x)) e^{-x}.
        let x = 1.7;
        let v = bessel_k(c(0.5, 0.0), c(x, 0.0)).unwrap();
        let exact = (PI / (2.0 * x)).sqrt() * (-x).exp();
        assert!((v.re - exact).abs() < 1e-13 && v.im.abs() < 1e-13);
    }
}
