//! The Jacobi theta function `θ(z) = Σ_{n∈ℤ} e(n²z)` and its multiplier on Γ₀(4).

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

use crate::arith::{epsilon_d, ext_gcd, gcd, kronecker};
use crate::error::{domain, Result};

/// `θ(z)` summed until the terms drop below `1e−17`, or over `terms` terms
/// when `terms > 0`.
pub fn theta(z: Complex64, terms: usize) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return domain(format!("θ needs Im z > 0, got {z}"));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    let auto = terms == 0;
    let n_max = if auto {
        // |q^{n²}| = e^{−2πn² Im z} < 1e−17.
        ((39.2 / (2.0 * PI * z.im)).sqrt().ceil() as usize).max(1)
    } else {
        terms
    };
    for n in 1..=n_max {
        let nf = n as f64;
        let term = (Complex64::new(0.0, 2.0 * PI * nf * nf) * z).exp();
        acc += term * 2.0;
        if auto && term.norm() < 1e-17 {
            break;
        }
    }
    Ok(acc)
}

fn check_gamma0_4(g: [[i64; 2]; 2]) -> Result<()> {
    let [[a, b], [c, d]] = g;
    if a * d - b * c != 1 {
        return domain(format!("det {g:?} ≠ 1"));
    }
    if c % 4 != 0 {
        return domain(format!("{g:?} is not in Γ₀(4): 4 ∤ c"));
    }
    Ok(())
}

/// `|θ(γz) − ε_d^{−1}(c/d)(cz+d)^{1/2}θ(z)|` with the principal square root.
/// `terms = 0` sums each series to full precision.
pub fn theta_transform_residual(g: [[i64; 2]; 2], z: Complex64, terms: usize) -> Result<f64> {
    check_gamma0_4(g)?;
    if !(z.im > 0.0) {
        return domain(format!("need Im z > 0, got {z}"));
    }
    let [[a, b], [c, d]] = g;
    let (af, bf, cf, df) = (a as f64, b as f64, c as f64, d as f64);
    let j = z * cf + df;
    let gz = (z * af + bf) / j;
    let lhs = theta(gz, terms)?;
    let mult = epsilon_d(d)?.inv() * kronecker(c, d) as f64;
    let rhs = mult * j.sqrt() * theta(z, terms)?;
    Ok((lhs - rhs).norm())
}

/// A random element of Γ₀(4) with entries bounded by `bound` (at least 5).
pub fn random_gamma0_4<R: Rng>(rng: &mut R, bound: i64) -> [[i64; 2]; 2] {
    let bound = bound.max(5);
    let cmax = bound / 4;
    loop {
        let c = 4 * rng.random_range(-cmax..=cmax);
        let d = rng.random_range(-bound..=bound);
        if d == 0 || gcd(c, d) != 1 {
            continue;
        }
        // a d − b c = 1.
        let (g, x, y) = ext_gcd(d, c);
        let (mut a, mut b) = if g == 1 { (x, -y) } else { (-x, y) };
        if c != 0 {
            let t = (a as f64 / c as f64).round() as i64;
            a -= t * c;
            b -= t * d;
        }
        debug_assert_eq!(a * d - b * c, 1);
        if a.abs() <= bound && b.abs() <= bound {
            return [[a, b], [c, d]];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_elements() {
        let z = Complex64::new(0.3, 1.1);
        assert!(theta_transform_residual([[1, 0], [0, 1]], z, 0).unwrap() < 1e-14);
        assert!(theta_transform_residual([[1, 1], [0, 1]], z, 0).unwrap() < 1e-14);
        assert!(theta_transform_residual([[1, 1], [1, 2]], z, 0).is_err());
        assert!(theta_transform_residual([[1, 2], [0, 1]], Complex64::new(0.0, -1.0), 0).is_err());
    }

    #[test]
    fn random_multipliers() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let z = Complex64::new(0.3, 1.1);
        for _ in 0..100 {
            let g = random_gamma0_4(&mut rng, 50);
            let r = theta_transform_residual(g, z, 0).unwrap();
            assert!(r <= 1e-8, "{g:?}: {r}");
        }
    }
}
