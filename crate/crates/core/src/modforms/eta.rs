//! Eta products, and the dihedral form `η(z)³η(7z)³` attached to ℚ(√−7).

use num_complex::Complex64;

use super::{CoefficientSource, CuspForm};
use crate::arith::{kronecker, primes_up_to, sqrt_mod, DirichletCharacter};
use crate::error::{domain, Result};

/// `a(1..=m_max)` of `∏ η(δz)^{r_δ}` for `factors = [(δ, r_δ), …]` with
/// `r_δ ≥ 0`, by direct multiplication of `(1 − q^{δn})`.
/// The leading exponent `Σ δ r_δ / 24` must be a positive integer.
pub fn eta_product(factors: &[(u64, u32)], m_max: usize) -> Result<Vec<i64>> {
    let weight_sum: u64 = factors.iter().map(|&(d, r)| d * r as u64).sum();
    if weight_sum == 0 || !weight_sum.is_multiple_of(24) {
        return domain(format!("q-order {weight_sum}/24 is not a positive integer"));
    }
    let shift = (weight_sum / 24) as usize;
    if m_max < shift {
        return Ok(vec![0; m_max]);
    }
    let len = m_max - shift + 1;
    let mut s = vec![0i64; len];
    s[0] = 1;
    for &(d, r) in factors {
        let d = d as usize;
        let mut j = d;
        while j < len {
            for _ in 0..r {
                for i in (j..len).rev() {
                    // Partial products overflow; arithmetic mod 2^64 is exact
                    // for the final, small coefficients.
                    s[i] = s[i].wrapping_sub(s[i - j]);
                }
            }
            j += d;
        }
    }
    let mut out = vec![0i64; m_max];
    for (i, v) in s.into_iter().enumerate() {
        out[i + shift - 1] = v;
    }
    Ok(out)
}

/// The weight-3 newform `η(z)³η(7z)³ = q − 3q² + …` of level 7 and
/// character `(−7/·)`, with
/// `a(n) = ½ Σ_{N(α)=n} α²` over `α ∈ ℤ[(1+√−7)/2]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DihedralEta7;

pub const ETA7_LEVEL: u64 = 7;
pub const ETA7_WEIGHT: i64 = 3;

impl DihedralEta7 {
    /// `a(1..=m_max)` by enumerating `u² + 7v² = 4n`, `u ≡ v (mod 2)`, where
    /// `Re α² = (u² − 7v²)/4`.
    pub fn coefficients(&self, m_max: usize) -> Vec<i64> {
        let mut acc = vec![0i64; m_max + 1];
        let lim = 4 * m_max as i64;
        let mut v: i64 = 0;
        while 7 * v * v <= lim {
            let umax = crate::arith::isqrt((lim - 7 * v * v) as u64) as i64;
            // v and −v contribute equally.
            let mult = if v == 0 { 1 } else { 2 };
            for u in -umax..=umax {
                let q = u * u + 7 * v * v;
                if q > 0 && (u - v).rem_euclid(2) == 0 {
                    acc[(q / 4) as usize] += mult * (u * u - 7 * v * v);
                }
            }
            v += 1;
        }
        acc.into_iter().skip(1).map(|s| s / 8).collect()
    }

    pub fn character(&self) -> DirichletCharacter {
        DirichletCharacter::from_kronecker(-7, ETA7_LEVEL).expect("(−7/·) is a character mod 7")
    }

    /// The form with `m_max` coefficients embedded at `level` (a multiple of 28).
    pub fn form(&self, m_max: usize, level: u64) -> Result<CuspForm> {
        let coeffs = self.coefficients(m_max).into_iter().map(|a| Complex64::new(a as f64, 0.0)).collect();
        CuspForm::lift(ETA7_LEVEL, level, ETA7_WEIGHT, &self.character(), coeffs, "eta(z)^3 eta(7z)^3")
    }

    /// `A(p) = a(p)/p`.
    pub fn normalized_at_prime(&self, p: u64) -> f64 {
        if p == 7 {
            return -1.0;
        }
        match cornacchia7(p) {
            Some((u, v)) => (u * u - 7 * v * v) as f64 / (2.0 * p as f64),
            None => 0.0,
        }
    }

    /// `A(p^e)` from `A(p)` by the Hecke recursion
    /// `A(p^{e+1}) = A(p)A(p^e) − χ(p)A(p^{e−1})`.
    pub fn normalized_at_prime_power(&self, p: u64, ap: f64, e: u32) -> f64 {
        let chi = kronecker(-7, p as i64) as f64;
        let (mut prev, mut cur) = (1.0, ap);
        if e == 0 {
            return 1.0;
        }
        for _ in 1..e {
            let next = ap * cur - chi * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `A(m)` by factoring `m`.
    pub fn normalized(&self, m: u64) -> f64 {
        crate::arith::factorize(m)
            .into_iter()
            .map(|(p, e)| self.normalized_at_prime_power(p, self.normalized_at_prime(p), e))
            .product()
    }
}

/// `(u, v)` with `u² + 7v² = 4p`, `u, v ≥ 0`, for a prime `p` split in ℚ(√−7).
pub fn cornacchia7(p: u64) -> Option<(i64, i64)> {
    if p == 2 {
        return Some((1, 1));
    }
    if p == 7 || kronecker(-7, p as i64) != 1 {
        return None;
    }
    let mut x0 = sqrt_mod(p - 7 % p, p)?;
    if x0 % 2 == 0 {
        x0 = p - x0;
    }
    let (mut a, mut b) = (2 * p, x0);
    let lim = crate::arith::isqrt(4 * p);
    while b > lim {
        let r = a % b;
        a = b;
        b = r;
    }
    let rest = 4 * p - b * b;
    if !rest.is_multiple_of(7) {
        return None;
    }
    let v2 = rest / 7;
    let v = crate::arith::isqrt(v2);
    (v * v == v2).then_some((b as i64, v as i64))
}

impl CoefficientSource for DihedralEta7 {
    fn weight(&self) -> i64 {
        ETA7_WEIGHT
    }

    /// Sieves `n² + h` over the primes up to `√(n_max² + h)`; the cofactor
    /// left over is 1 or a prime.
    fn normalized_at_shifted_squares(&self, h: u64, n_max: u64) -> Result<Vec<Complex64>> {
        let len = n_max as usize + 1;
        let top = n_max * n_max + h;
        let mut rest: Vec<u64> = (0..=n_max).map(|n| n * n + h).collect();
        let mut val = vec![1.0f64; len];
        let bound = crate::arith::isqrt(top) + 1;
        for p in primes_up_to(bound) {
            let ap = self.normalized_at_prime(p);
            let roots: Vec<u64> = if p == 2 {
                vec![h % 2]
            } else {
                match sqrt_mod((p - h % p) % p, p) {
                    Some(0) => vec![0],
                    Some(r) => vec![r, p - r],
                    None => Vec::new(),
                }
            };
            for r in roots {
                let mut n = r as usize;
                while n < len {
                    let mut e = 0;
                    while rest[n].is_multiple_of(p) && rest[n] > 0 {
                        rest[n] /= p;
                        e += 1;
                    }
                    if e > 0 {
                        val[n] *= self.normalized_at_prime_power(p, ap, e);
                    }
                    n += p as usize;
                }
            }
        }
        for n in 0..len {
            if rest[n] == 0 {
                val[n] = 0.0;
            } else if rest[n] > 1 {
                val[n] *= self.normalized_at_prime(rest[n]);
            }
        }
        Ok(val.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }
}
