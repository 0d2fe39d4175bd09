//! Integer arithmetic, Kronecker symbols and tabulated Dirichlet characters.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const UNIT_TOL: f64 = 1e-9;

pub fn gcd(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// `gcd(m, n, c)` with the convention `gcd(0, 0, c) = c`.
pub fn gcd3(m: i64, n: i64, c: i64) -> u64 {
    gcd(gcd(m, n) as i64, c)
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (r0, x0, y0) = (-r0, -x0, -y0);
    }
    (r0 as i64, x0 as i64, y0 as i64)
}

/// Inverse of `a` modulo `m`, in `[0, m)`.
pub fn mod_inv(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a.rem_euclid(m as i64), m as i64);
    (g == 1).then(|| x.rem_euclid(m as i64) as u64)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// 2-adic valuation; `v2(0)` is reported as 64.
pub fn v2(n: u64) -> u32 {
    n.trailing_zeros()
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).first() == Some(&(n, 1))
}

/// All positive divisors, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Number of divisors τ(n).
pub fn tau(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Euler's totient φ(n).
pub fn phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Sieve of Eratosthenes up to and including `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Least primitive root modulo an odd prime `p`.
pub fn primitive_root(p: u64) -> Option<u64> {
    if !is_prime(p) || p == 2 {
        return None;
    }
    let group = factorize(p - 1);
    (2..p).find(|&g| group.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1))
}

/// A square root of `a` modulo an odd prime `p` (Tonelli–Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Extended Kronecker symbol `(a/n)` on all of ℤ × ℤ.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return i32::from(a == 1 || a == -1);
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -1;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        n >>= twos;
    }
    result * jacobi(a.rem_euclid(n), n)
}

/// Jacobi symbol for odd positive `n`, `0 ≤ a`.
fn jacobi(mut a: i64, mut n: i64) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut result = 1;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// The Gauss-sign unit: 1 for `d ≡ 1 (mod 4)`, `i` for `d ≡ 3 (mod 4)`.
pub fn epsilon_d(d: i64) -> Result<Complex64> {
    match d.rem_euclid(4) {
        1 => Ok(Complex64::new(1.0, 0.0)),
        3 => Ok(Complex64::new(0.0, 1.0)),
        _ => domain(format!("epsilon_d needs odd d, got {d}")),
    }
}

/// `ε_d^ell` for odd `d` and any integer exponent.
pub(crate) fn epsilon_pow(d: i64, ell: i64) -> Complex64 {
    if d.rem_euclid(4) == 1 {
        return Complex64::new(1.0, 0.0);
    }
    match ell.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `e(x) = exp(2πi x)` for a rational `num/den`, reduced first to keep the
/// phase argument small.
pub(crate) fn e_frac(num: i64, den: u64) -> Complex64 {
    let r = num.rem_euclid(den as i64) as f64 / den as f64;
    let (s, c) = (std::f64::consts::TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// A residue class `value mod modulus` with `0 ≤ value < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return domain("residue modulus must be positive");
        }
        Ok(Residue { value: value.rem_euclid(modulus as i64) as u64, modulus })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn inverse(&self) -> Option<Residue> {
        mod_inv(self.value as i64, self.modulus).map(|value| Residue { value, modulus: self.modulus })
    }

    pub fn mul(&self, other: &Residue) -> Result<Residue> {
        if self.modulus != other.modulus {
            return domain("residues with different moduli");
        }
        Ok(Residue { value: mul_mod(self.value, other.value, self.modulus), modulus: self.modulus })
    }
}

/// Serialized form of a character: either a Kronecker discriminant or an
/// explicit value table of `(re, im)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharacterRecord {
    Kronecker { modulus: u64, kronecker_discriminant: i64 },
    Table { modulus: u64, value_table: Vec<(f64, f64)> },
}

/// A Dirichlet character modulo `N` stored as its full value table.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<Complex64>,
    conductor: u64,
    is_even: bool,
    /// Set when the character was built from a Kronecker symbol.
    discriminant: Option<i64>,
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Self {
        let values =
            (0..modulus)
                .map(|d| {
                    if gcd(d as i64, modulus as i64) == 1 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
        DirichletCharacter { modulus, values, conductor: 1, is_even: true, discriminant: Some(1) }
    }

    /// Builds a character from its value table, checking every invariant.
    pub fn from_table(modulus: u64, values: Vec<Complex64>) -> Result<Self> {
        if modulus == 0 {
            return domain("character modulus must be positive");
        }
        if values.len() as u64 != modulus {
            return domain(format!("value table has {} entries, expected {modulus}", values.len()));
        }
        let m = modulus as usize;
        for (d, v) in values.iter().enumerate() {
            let unit = gcd(d as i64, modulus as i64) == 1;
            if unit && (v.norm() - 1.0).abs() > UNIT_TOL {
                return domain(format!("χ({d}) = {v} is not a unit"));
            }
            if !unit && v.norm() > UNIT_TOL {
                return domain(format!("χ({d}) must vanish since gcd({d},{modulus}) > 1"));
            }
        }
        for d in 0..m {
            for e in d..m {
                let lhs = values[(d * e) % m];
                if (lhs - values[d] * values[e]).norm() > 1e-8 {
                    return domain(format!("table is not multiplicative at ({d},{e})"));
                }
            }
        }
        let mut chi = DirichletCharacter { modulus, values, conductor: modulus, is_even: false, discriminant: None };
        chi.finish_metadata();
        Ok(chi)
    }

    /// Tabulates `d ↦ (D/d)` as a character modulo `N`.
    pub fn from_kronecker(disc: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return domain("character modulus must be positive");
        }
        let n = modulus as i64;
        let mut values = vec![Complex64::new(0.0, 0.0); modulus as usize];
        for d in 0..n {
            if gcd(d, n) == 1 {
                let k = kronecker(disc, d);
                if k == 0 {
                    return domain(format!(
                        "({disc}/{d}) vanishes on a unit mod {modulus}; not a character mod {modulus}"
                    ));
                }
                values[d as usize] = Complex64::new(k as f64, 0.0);
            }
        }
        // (D/·) is periodic with period dividing 4|D|, so one common period
        // of both suffices to certify periodicity modulo N.
        let period = 4 * disc.unsigned_abs().max(1);
        let span = modulus / gcd(modulus as i64, period as i64) * period;
        let span = span.min(modulus.saturating_mul(64)).max(modulus);
        for d in 1..=span as i64 {
            if gcd(d, n) == 1 && kronecker(disc, d) as f64 != values[(d % n) as usize].re {
                return domain(format!("(D/·) with D = {disc} is not periodic modulo {modulus}"));
            }
        }
        let mut chi =
            DirichletCharacter { modulus, values, conductor: modulus, is_even: false, discriminant: Some(disc) };
        chi.finish_metadata();
        Ok(chi)
    }

    /// The character of order dividing `p − 1` modulo an odd prime `p` that
    /// sends the least primitive root to `e(j/(p−1))`.
    pub fn prime_character(p: u64, j: u64) -> Result<Self> {
        let g = primitive_root(p).ok_or_else(|| Error::Domain(format!("{p} is not an odd prime")))?;
        let mut values = vec![Complex64::new(0.0, 0.0); p as usize];
        let mut x = 1u64;
        for k in 0..p - 1 {
            values[x as usize] =
                Complex64::from_polar(1.0, std::f64::consts::TAU * ((j * k) % (p - 1)) as f64 / (p - 1) as f64);
            x = x * g % p;
        }
        let mut chi = DirichletCharacter { modulus: p, values, conductor: p, is_even: false, discriminant: None };
        chi.finish_metadata();
        Ok(chi)
    }

    pub fn from_record(record: &CharacterRecord) -> Result<Self> {
        match record {
            CharacterRecord::Kronecker { modulus, kronecker_discriminant } => {
                Self::from_kronecker(*kronecker_discriminant, *modulus)
            }
            CharacterRecord::Table { modulus, value_table } => {
                Self::from_table(*modulus, value_table.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
            }
        }
    }

    pub fn to_record(&self) -> CharacterRecord {
        match self.discriminant {
            Some(d) => CharacterRecord::Kronecker { modulus: self.modulus, kronecker_discriminant: d },
            None => CharacterRecord::Table {
                modulus: self.modulus,
                value_table: self.values.iter().map(|v| (v.re, v.im)).collect(),
            },
        }
    }

    fn finish_metadata(&mut self) {
        self.is_even = (self.values[(self.modulus - 1) as usize] - 1.0).norm() < UNIT_TOL;
        self.conductor = self.compute_conductor();
        if self.conductor == 1 && self.discriminant.is_none() {
            self.discriminant = Some(1);
        }
    }

    /// Least divisor `M` of `N` such that χ is trivial on units `≡ 1 (mod M)`.
    fn compute_conductor(&self) -> u64 {
        let n = self.modulus;
        divisors(n)
            .into_iter()
            .find(|&m| {
                (1..n)
                    .step_by(m as usize)
                    .filter(|&d| gcd(d as i64, n as i64) == 1)
                    .all(|d| (self.values[d as usize] - 1.0).norm() < UNIT_TOL)
            })
            .unwrap_or(n)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_even(&self) -> bool {
        self.is_even
    }

    pub fn discriminant(&self) -> Option<i64> {
        self.discriminant
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.conductor == 1
    }

    /// True when every nonzero value is ±1.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im.abs() < UNIT_TOL)
    }

    /// χ(d) for any integer `d`, reduced modulo `N`.
    pub fn value(&self, d: i64) -> Complex64 {
        self.values[d.rem_euclid(self.modulus as i64) as usize]
    }

    /// Short label for CSV output.
    pub fn label(&self) -> String {
        match self.discriminant {
            Some(1) if self.is_trivial() => format!("triv{}", self.modulus),
            Some(d) => format!("kr({d})/{}", self.modulus),
            None => format!("tab/{}", self.modulus),
        }
    }

    /// The same character viewed modulo a multiple `M` of `N`.
    pub fn induce(&self, modulus: u64) -> Result<Self> {
        if !modulus.is_multiple_of(self.modulus) {
            return domain(format!("cannot induce from modulus {} to {modulus}", self.modulus));
        }
        let values = (0..modulus)
            .map(|d| if gcd(d as i64, modulus as i64) == 1 { self.value(d as i64) } else { Complex64::new(0.0, 0.0) })
            .collect();
        Ok(DirichletCharacter {
            modulus,
            values,
            conductor: self.conductor,
            is_even: self.is_even,
            discriminant: self.discriminant,
        })
    }

    /// Pointwise product, computed modulo `lcm` of the two moduli.
    pub fn mul(&self, other: &DirichletCharacter) -> Result<Self> {
        let l = self.modulus / gcd(self.modulus as i64, other.modulus as i64) * other.modulus;
        let a = self.induce(l)?;
        let b = other.induce(l)?;
        let values: Vec<Complex64> = a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect();
        let mut chi = DirichletCharacter {
            modulus: l,
            values,
            conductor: l,
            is_even: false,
            discriminant: match (self.discriminant, other.discriminant) {
                (Some(x), Some(y)) => x.checked_mul(y),
                _ => None,
            },
        };
        // Values were computed directly, so the product label is only kept
        // when it reproduces the table.
        if let Some(d) = chi.discriminant {
            if let Ok(k) = Self::from_kronecker(d, l) {
                if k.values != chi.values {
                    chi.discriminant = None;
                }
            } else {
                chi.discriminant = None;
            }
        }
        chi.finish_metadata();
        Ok(chi)
    }

    /// Splits χ as χ_r (mod gcd(N,r)) times χ_s (mod gcd(N,s)) for coprime
    /// `r, s` with `N | rs`.
    pub fn factor(&self, r: u64, s: u64) -> Result<(Self, Self)> {
        if r == 0 || s == 0 {
            return domain("char_factor needs positive r, s");
        }
        if gcd(r as i64, s as i64) != 1 {
            return domain(format!("char_factor needs coprime r, s; got gcd({r},{s}) > 1"));
        }
        if !(r as u128 * s as u128).is_multiple_of(self.modulus as u128) {
            return domain(format!("modulus {} does not divide {r}·{s}", self.modulus));
        }
        let nr = gcd(self.modulus as i64, r as i64);
        let ns = gcd(self.modulus as i64, s as i64);
        Ok((self.crt_component(nr, ns)?, self.crt_component(ns, nr)?))
    }

    /// Component on modulus `a` of the splitting `N = a·b`: χ_a(y) = χ(d) with
    /// `d ≡ y (mod a)`, `d ≡ 1 (mod b)`.
    fn crt_component(&self, a: u64, b: u64) -> Result<Self> {
        let n = self.modulus as i64;
        let mut values = vec![Complex64::new(0.0, 0.0); a as usize];
        for y in 0..a as i64 {
            if gcd(y, a as i64) != 1 {
                continue;
            }
            let d = crt_pair(y, a, 1, b)?;
            values[y as usize] = self.value(d.rem_euclid(n));
        }
        let mut chi = DirichletCharacter { modulus: a, values, conductor: a, is_even: false, discriminant: None };
        chi.finish_metadata();
        Ok(chi)
    }
}

/// Solves `x ≡ r1 (mod m1)`, `x ≡ r2 (mod m2)` for coprime moduli.
pub fn crt_pair(r1: i64, m1: u64, r2: i64, m2: u64) -> Result<i64> {
    let (g, u, _) = ext_gcd(m1 as i64, m2 as i64);
    if g != 1 {
        return domain("crt_pair needs coprime moduli");
    }
    let m = m1 as i128 * m2 as i128;
    // x = r1 + m1·u·(r2 − r1)
    let x = r1 as i128 + m1 as i128 * ((u as i128 * (r2 as i128 - r1 as i128)).rem_euclid(m2 as i128));
    Ok(x.rem_euclid(m) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots_mod_p() {
        for p in primes_up_to(2000).into_iter().skip(1) {
            for a in 0..p.min(200) {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a % p),
                    None => assert_eq!(kronecker(a as i64, p as i64), -1),
                }
            }
        }
        let p = 998_244_353;
        let a = mul_mod(12345, 12345, p);
        let r = sqrt_mod(a, p).unwrap();
        assert_eq!(mul_mod(r, r, p), a);
        assert!(sqrt_mod(3, p).is_none());
    }

    /// Legendre symbol by Euler's criterion, independent of `kronecker`.
    fn legendre_euler(a: i64, p: u64) -> i32 {
        let r = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
        match r {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(-1, 3), -1);
        assert_eq!(kronecker(4, 3), 1);
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(2, 0), 0);
        assert_eq!(kronecker(-5, -1), -1);
        assert_eq!(kronecker(5, -1), 1);
        assert_eq!(kronecker(3, 2), -1);
        assert_eq!(kronecker(7, 2), 1);
        assert_eq!(kronecker(6, 4), 0);
    }

    #[test]
    fn kronecker_matches_euler_for_odd_primes() {
        for p in primes_up_to(200).into_iter().skip(1) {
            for a in -50..50 {
                assert_eq!(kronecker(a, p as i64), legendre_euler(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon_d(1).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(epsilon_d(3).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(epsilon_d(-1).unwrap(), Complex64::new(0.0, 1.0));
        assert!(epsilon_d(4).is_err());
        let e7 = epsilon_d(7).unwrap();
        assert_eq!(e7 * e7, Complex64::new(kronecker(-1, 7) as f64, 0.0));
    }

    #[test]
    fn epsilon_squared_is_kronecker_minus_one() {
        for d in (1..100_000i64).step_by(2) {
            let e = epsilon_d(d).unwrap();
            assert_eq!(e * e, Complex64::new(kronecker(-1, d) as f64, 0.0));
        }
    }

    #[test]
    fn arithmetic_helpers() {
        assert_eq!(tau(12), 6);
        assert_eq!(phi(36), 12);
        assert_eq!(divisors(28), vec![1, 2, 4, 7, 14, 28]);
        assert_eq!(gcd3(0, 0, 4), 4);
        assert_eq!(gcd3(6, -9, 12), 3);
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(2, 4), None);
        assert_eq!(isqrt(99), 9);
        assert_eq!(primitive_root(7), Some(3));
        assert_eq!(crt_pair(2, 3, 3, 4).unwrap(), 11);
    }

    #[test]
    fn residue_basics() {
        let r = Residue::new(-3, 10).unwrap();
        assert_eq!(r.value(), 7);
        assert_eq!(r.inverse().unwrap().value(), 3);
        assert!(Residue::new(4, 10).unwrap().inverse().is_none());
        assert!(Residue::new(1, 0).is_err());
    }

    #[test]
    fn trivial_from_discriminant_one() {
        for n in [1u64, 4, 12, 30] {
            let chi = DirichletCharacter::from_kronecker(1, n).unwrap();
            assert_eq!(chi, DirichletCharacter::trivial(n));
            assert_eq!(chi.conductor(), 1);
            assert!(chi.is_even());
        }
    }

    #[test]
    fn level_576_character() {
        let chi = DirichletCharacter::from_kronecker(12, 576).unwrap();
        assert_eq!(chi.conductor(), 12);
        assert!(chi.is_even());
        assert_eq!(chi.value(5).re, -1.0);
        assert_eq!(chi.value(11).re, 1.0);
    }

    #[test]
    fn odd_character_mod_28() {
        let chi = DirichletCharacter::from_kronecker(-7, 28).unwrap();
        assert!(!chi.is_even());
        assert_eq!(chi.conductor(), 7);
    }

    #[test]
    fn non_periodic_pair_rejected() {
        // (3/·) has period 12, so it is not a character modulo 4.
        assert!(DirichletCharacter::from_kronecker(3, 4).is_err());
        // (5/·) vanishes on 5, a unit modulo 4.
        assert!(DirichletCharacter::from_kronecker(5, 4).is_err());
    }

    #[test]
    fn table_validation() {
        let bad = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        assert!(DirichletCharacter::from_table(3, bad).is_err());
        let zero_on_unit = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(DirichletCharacter::from_table(3, zero_on_unit).is_err());
        let chi = DirichletCharacter::prime_character(5, 1).unwrap();
        assert_eq!(chi.conductor(), 5);
        let rebuilt = DirichletCharacter::from_table(5, chi.values().to_vec()).unwrap();
        assert_eq!(rebuilt.conductor(), 5);
        assert!(!rebuilt.is_even());
    }

    #[test]
    fn factor_trivial_mod_four() {
        let chi = DirichletCharacter::trivial(4);
        let (a, b) = chi.factor(1, 4).unwrap();
        assert_eq!(a.modulus(), 1);
        assert_eq!(b.modulus(), 4);
        assert!(a.is_trivial() && b.is_trivial());
    }

    fn assert_factorization(chi: &DirichletCharacter, r: u64, s: u64) {
        let (cr, cs) = chi.factor(r, s).unwrap();
        let n = chi.modulus() as i64;
        for d in 0..n {
            if gcd(d, n) == 1 {
                let prod = cr.value(d) * cs.value(d);
                assert!((prod - chi.value(d)).norm() < 1e-12, "d = {d}");
            }
        }
    }

    #[test]
    fn factor_level_576_and_mod_12() {
        let chi = DirichletCharacter::from_kronecker(12, 576).unwrap();
        assert_factorization(&chi, 9, 64);
        let chi12 = DirichletCharacter::from_kronecker(12, 12).unwrap();
        assert_factorization(&chi12, 3, 4);
        assert!(chi12.factor(2, 6).is_err());
        assert!(chi12.factor(3, 5).is_err());
    }

    #[test]
    fn product_and_induction() {
        let a = DirichletCharacter::from_kronecker(-4, 4).unwrap();
        let b = DirichletCharacter::prime_character(5, 2).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.modulus(), 20);
        for d in 0..20i64 {
            assert!((ab.value(d) - a.value(d) * b.value(d)).norm() < 1e-12);
        }
        let lifted = b.induce(15).unwrap();
        assert_eq!(lifted.value(3).norm(), 0.0);
        assert_eq!(lifted.conductor(), 5);
    }

    #[test]
    fn record_round_trip() {
        let chi = DirichletCharacter::from_kronecker(-7, 28).unwrap();
        let json = serde_json::to_string(&chi.to_record()).unwrap();
        let back: CharacterRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(DirichletCharacter::from_record(&back).unwrap(), chi);
        let tab = DirichletCharacter::prime_character(7, 1).unwrap();
        let rec = tab.to_record();
        assert!(matches!(rec, CharacterRecord::Table { .. }));
        let again = DirichletCharacter::from_record(&rec).unwrap();
        assert!(again.values().iter().zip(tab.values()).all(|(x, y)| (x - y).norm() < 1e-12));
    }
}
