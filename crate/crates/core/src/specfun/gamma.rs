//! Complex log-gamma and digamma.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
pub const ZETA2: f64 = PI * PI / 6.0;

/// B_{2j} for j = 1..=13.
const BERNOULLI_EVEN: [f64; 13] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
];

const SHIFT_TO: f64 = 10.0;

fn check_pole(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return domain(format!("gamma pole at z = {}", z.re));
    }
    Ok(())
}

/// Principal branch of log Γ(z): analytic away from the nonpositive real
/// axis, with the imaginary part continuous in z.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TO {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

fn stirling(w: Complex64) -> Complex64 {
    let half_ln_tau = 0.5 * (2.0 * PI).ln();
    let mut acc = (w - 0.5) * w.ln() - w + half_ln_tau;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2.0 * (j + 1) as f64;
        let term = pow * (b / (n * (n - 1.0)));
        acc += term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
        pow *= inv2;
    }
    acc
}

/// Γ(z) = exp(log Γ(z)).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// Real Γ(x) for real x off the poles; sign tracked through the shift.
pub fn gamma_real(x: f64) -> Result<f64> {
    Ok(gamma(Complex64::new(x, 0.0))?.re)
}

/// ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TO {
        shift += w.inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut acc = w.ln() - 0.5 * inv;
    let mut pow = inv2;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2.0 * (j + 1) as f64;
        let term = pow * (b / n);
        acc -= term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
        pow *= inv2;
    }
    Ok(acc - shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_gamma_special_values() {
        let v = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((v.re - PI.sqrt().ln()).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
        let v = log_gamma(c(5.0, 0.0)).unwrap();
        assert!((v.re - 24f64.ln()).abs() < 1e-13);
        assert!(log_gamma(c(0.0, 0.0)).is_err());
        assert!(log_gamma(c(-3.0, 0.0)).is_err());
        assert!(log_gamma(c(-3.0, 1e-12)).is_ok());
    }

    #[test]
    fn log_gamma_identities_at_one_plus_ten_i() {
        let z = c(1.0, 10.0);
        // Recurrence: log Γ(z+1) = log Γ(z) + log z (no branch jump here).
        let lhs = log_gamma(z + 1.0).unwrap();
        let rhs = log_gamma(z).unwrap() + z.ln();
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
        // Reflection: Γ(z)Γ(1−z) = π / sin(πz), compared in modulus and phase.
        let prod = (log_gamma(z).unwrap() + log_gamma(1.0 - z).unwrap()).exp();
        let refl = PI / (PI * z).sin();
        assert!((prod - refl).norm() <= 1e-12 * refl.norm());
        // |Γ(1+iy)|² = πy / sinh(πy).
        let y = 10.0;
        let m = (2.0 * log_gamma(z).unwrap().re).exp();
        assert!((m - PI * y / (PI * y).sinh()).abs() <= 1e-12 * m);
    }

    #[test]
    fn log_gamma_against_known_complex_value() {
        // log Γ(3 + 4i) from an independent high-precision evaluation.
        let v = log_gamma(c(3.0, 4.0)).unwrap();
        assert!((v - c(-1.756_626_784_603_784_1, 4.742_664_438_034_658)).norm() < 1e-12);
    }

    #[test]
    fn log_gamma_large_argument() {
        for &x in &[50.0, 300.0, 999.0] {
            let v = log_gamma(c(x, 0.0)).unwrap().re;
            let mut exact = 0.0;
            for k in 1..(x as u64) {
                exact += (k as f64).ln();
            }
            assert!((v - exact).abs() <= 1e-12 * exact);
        }
    }

    #[test]
    fn digamma_special_values() {
        let v = digamma(c(1.0, 0.0)).unwrap();
        assert!((v.re + EULER_GAMMA).abs() < 1e-13);
        let v = digamma(c(0.5, 0.0)).unwrap();
        assert!((v.re + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-13);
        assert!(digamma(c(-2.0, 0.0)).is_err());
        // Im ψ(1/2 + iy) = (π/2) tanh(πy).
        let y = 3.0;
        let v = digamma(c(0.5, y)).unwrap();
        assert!((v.im - 0.5 * PI * (PI * y).tanh()).abs() < 1e-12);
    }

    #[test]
    fn gamma_real_signs() {
        assert!((gamma_real(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-12);
        assert!((gamma_real(4.0).unwrap() - 6.0).abs() < 1e-12);
    }
}
