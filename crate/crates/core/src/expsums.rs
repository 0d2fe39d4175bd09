//! Half-integral weight Kloosterman sums and Dirichlet-twisted Salié sums.
//!
//! All sums run over units `d mod c` with `a = d⁻¹ mod c`. The character is
//! evaluated at `d mod N` for its own modulus `N | c`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::arith::{self, e_frac, epsilon_pow, gcd, gcd3, kronecker, mul_mod, phi, tau, DirichletCharacter};
use crate::error::{domain, Result};

/// A computed exponential sum together with its inputs and the bound that
/// applies to it.
#[derive(Debug, Clone)]
pub struct ExpSumResult<'a> {
    pub value: Complex64,
    pub m: i64,
    pub n: i64,
    pub c: u64,
    /// `Some(ℓ)` for Kloosterman sums, `None` for Salié sums.
    pub ell: Option<i64>,
    pub character: &'a DirichletCharacter,
    pub bound: f64,
}

impl ExpSumResult<'_> {
    pub fn ratio(&self) -> f64 {
        if self.bound > 0.0 {
            self.value.norm() / self.bound
        } else if self.value.norm() == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Units modulo `c` paired with their inverses.
pub struct UnitTable {
    c: u64,
    pairs: Vec<(u64, u64)>,
}

impl UnitTable {
    pub fn new(c: u64) -> Self {
        let pairs = (0..c).filter_map(|d| arith::mod_inv(d as i64, c).map(|a| (d, a))).collect();
        UnitTable { c, pairs }
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    /// `(d, d⁻¹)` for every unit `d`, ascending in `d`.
    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a as i64, b as i64) * b
}

fn check_kloosterman(c: u64, ell: i64, chi: &DirichletCharacter) -> Result<()> {
    if c == 0 {
        return domain("Kloosterman modulus must be positive");
    }
    let need = lcm(4, chi.modulus());
    if !c.is_multiple_of(need) {
        return domain(format!("Kloosterman sum needs lcm(4, {}) = {need} to divide c = {c}", chi.modulus()));
    }
    if ell % 2 == 0 {
        return domain(format!("Kloosterman weight parameter ell = {ell} must be odd"));
    }
    Ok(())
}

fn check_salie(c: u64, chi: &DirichletCharacter) -> Result<()> {
    if c == 0 {
        return domain("Salié modulus must be positive");
    }
    if !c.is_multiple_of(chi.modulus()) {
        return domain(format!("Salié sum needs the character modulus {} to divide c = {c}", chi.modulus()));
    }
    if arith::v2(c) == 1 {
        return domain(format!("Salié sum needs v2(c) != 1, got c = {c}"));
    }
    Ok(())
}

/// `4·τ(c)·(m,n,c)^{1/2}·c^{1/2}·N^{1/2}`.
pub fn weil_bound(m: i64, n: i64, c: u64, modulus: u64) -> f64 {
    4.0 * tau(c) as f64 * (gcd3(m, n, c as i64) as f64).sqrt() * (c as f64).sqrt() * (modulus as f64).sqrt()
}

/// `τ(c)·(m,n,c)^{1/2}·c^{1/2}·cond^{1/2}` for odd `c`; the trivial bound
/// `φ(c)` otherwise.
pub fn salie_bound(m: i64, n: i64, c: u64, conductor: u64) -> f64 {
    if c % 2 == 1 {
        tau(c) as f64 * (gcd3(m, n, c as i64) as f64).sqrt() * (c as f64).sqrt() * (conductor as f64).sqrt()
    } else {
        phi(c) as f64
    }
}

/// `4·τ(c)·(m,n,c)^{1/2}·c^{1/2}·cond^{1/2}`, the bound at `c = 2^α`.
pub fn two_power_bound(m: i64, n: i64, c: u64, conductor: u64) -> f64 {
    4.0 * tau(c) as f64 * (gcd3(m, n, c as i64) as f64).sqrt() * (c as f64).sqrt() * (conductor as f64).sqrt()
}

#[inline]
fn phase(m: i64, a: u64, n: i64, d: u64, c: u64) -> u64 {
    let mm = m.rem_euclid(c as i64) as u64;
    let nn = n.rem_euclid(c as i64) as u64;
    (mul_mod(mm, a, c) + mul_mod(nn, d, c)) % c
}

fn kloosterman_raw(m: i64, n: i64, units: &UnitTable, ell: i64, chi: &DirichletCharacter) -> Complex64 {
    let c = units.modulus();
    units
        .pairs()
        .iter()
        .map(|&(d, a)| {
            let k = kronecker(c as i64, d as i64) as f64;
            epsilon_pow(d as i64, ell) * chi.value(d as i64).conj() * k * e_frac(phase(m, a, n, d, c) as i64, c)
        })
        .sum()
}

fn salie_raw(m: i64, n: i64, units: &UnitTable, chi: &DirichletCharacter) -> Complex64 {
    let c = units.modulus();
    units
        .pairs()
        .iter()
        .map(|&(d, a)| {
            let k = kronecker(d as i64, c as i64) as f64;
            chi.value(d as i64).conj() * k * e_frac(phase(m, a, n, d, c) as i64, c)
        })
        .sum()
}

/// `K_ℓ(m,n;c;χ)` by direct summation over units.
pub fn kloosterman_naive<'a>(
    m: i64,
    n: i64,
    c: u64,
    ell: i64,
    chi: &'a DirichletCharacter,
) -> Result<ExpSumResult<'a>> {
    check_kloosterman(c, ell, chi)?;
    let units = UnitTable::new(c);
    Ok(kloosterman_with_table(m, n, &units, ell, chi))
}

/// As [`kloosterman_naive`] with a caller-supplied unit table; the inputs are
/// assumed admissible.
pub fn kloosterman_with_table<'a>(
    m: i64,
    n: i64,
    units: &UnitTable,
    ell: i64,
    chi: &'a DirichletCharacter,
) -> ExpSumResult<'a> {
    let c = units.modulus();
    ExpSumResult {
        value: kloosterman_raw(m, n, units, ell, chi),
        m,
        n,
        c,
        ell: Some(ell),
        character: chi,
        bound: weil_bound(m, n, c, chi.modulus()),
    }
}

/// `S(m,n;c;χ)` by direct summation over units.
pub fn salie_naive<'a>(m: i64, n: i64, c: u64, chi: &'a DirichletCharacter) -> Result<ExpSumResult<'a>> {
    check_salie(c, chi)?;
    let units = UnitTable::new(c);
    Ok(ExpSumResult {
        value: salie_raw(m, n, &units, chi),
        m,
        n,
        c,
        ell: None,
        character: chi,
        bound: salie_bound(m, n, c, chi.conductor()),
    })
}

/// Bézout pair `(r̄, s̄)` with `r̄·r + s̄·s = 1` and `0 ≤ r̄ < s`.
pub fn bezout_canonical(r: u64, s: u64) -> Result<(i64, i64)> {
    let (g, x, _) = arith::ext_gcd(r as i64, s as i64);
    if g != 1 {
        return domain(format!("{r} and {s} are not coprime"));
    }
    let rbar = x.rem_euclid(s as i64);
    let sbar = (1 - rbar as i128 * r as i128) / s as i128;
    Ok((rbar, sbar as i64))
}

/// `m·u mod q` without overflow.
fn scale(m: i64, u: i64, q: u64) -> i64 {
    ((m as i128 * u as i128).rem_euclid(q as i128)) as i64
}

/// Salié sum by splitting `c` into prime powers and applying the two-factor
/// multiplicativity relation recursively.
pub fn salie_factored<'a>(m: i64, n: i64, c: u64, chi: &'a DirichletCharacter) -> Result<ExpSumResult<'a>> {
    check_salie(c, chi)?;
    Ok(ExpSumResult {
        value: salie_split(m, n, c, chi)?,
        m,
        n,
        c,
        ell: None,
        character: chi,
        bound: salie_bound(m, n, c, chi.conductor()),
    })
}

fn salie_split(m: i64, n: i64, c: u64, chi: &DirichletCharacter) -> Result<Complex64> {
    let f = arith::factorize(c);
    if f.len() <= 1 {
        return Ok(salie_raw(m, n, &UnitTable::new(c), chi));
    }
    let (p, e) = f[0];
    let r = p.pow(e);
    let s = c / r;
    let (rbar, sbar) = bezout_canonical(r, s)?;
    let (chi_r, chi_s) = chi.factor(r, s)?;
    let left = salie_split(scale(m, sbar, r), scale(n, sbar, r), r, &chi_r)?;
    let right = salie_split(scale(m, rbar, s), scale(n, rbar, s), s, &chi_s)?;
    Ok(left * right)
}

/// `K_ℓ(m,n;c;χ)` through the Kloosterman–Salié multiplicativity relation,
/// with `s` the 2-part and `r` the odd part of `c`.
pub fn kloosterman_factored<'a>(
    m: i64,
    n: i64,
    c: u64,
    ell: i64,
    chi: &'a DirichletCharacter,
) -> Result<ExpSumResult<'a>> {
    check_kloosterman(c, ell, chi)?;
    let s = 1u64 << arith::v2(c);
    let r = c / s;
    let (rbar, sbar) = bezout_canonical(r, s)?;
    let value = kloosterman_split(m, n, r, s, rbar, sbar, ell, chi)?;
    Ok(ExpSumResult { value, m, n, c, ell: Some(ell), character: chi, bound: weil_bound(m, n, c, chi.modulus()) })
}

/// Right side of the Kloosterman multiplicativity relation for an explicit
/// coprime split `c = r·s` with `4 | s` and Bézout pair `r̄·r + s̄·s = 1`.
#[allow(clippy::too_many_arguments)]
pub fn kloosterman_split(
    m: i64,
    n: i64,
    r: u64,
    s: u64,
    rbar: i64,
    sbar: i64,
    ell: i64,
    chi: &DirichletCharacter,
) -> Result<Complex64> {
    if !s.is_multiple_of(4) {
        return domain(format!("split needs 4 | s, got s = {s}"));
    }
    if rbar as i128 * r as i128 + sbar as i128 * s as i128 != 1 {
        return domain("Bézout cofactors do not satisfy r̄r + s̄s = 1");
    }
    let (chi_r, chi_s) = chi.factor(r, s)?;
    check_salie(r, &chi_r)?;
    let left = salie_split(scale(m, sbar, r), scale(n, sbar, r), r, &chi_r)?;
    let ell_s = ell + r as i64 - 1;
    let units = UnitTable::new(s);
    let right = kloosterman_raw(scale(m, rbar, s), scale(n, rbar, s), &units, ell_s, &chi_s);
    Ok(left * right)
}

/// Right side of the Salié multiplicativity relation for an explicit split.
pub fn salie_split_pair(m: i64, n: i64, r: u64, s: u64, chi: &DirichletCharacter) -> Result<Complex64> {
    if arith::v2(r * s) == 1 {
        return domain("Salié split needs v2(rs) != 1");
    }
    let (rbar, sbar) = bezout_canonical(r, s)?;
    let (chi_r, chi_s) = chi.factor(r, s)?;
    let left = salie_raw(scale(m, sbar, r), scale(n, sbar, r), &UnitTable::new(r), &chi_r);
    let right = salie_raw(scale(m, rbar, s), scale(n, rbar, s), &UnitTable::new(s), &chi_s);
    Ok(left * right)
}

/// `|K_ℓ(m,n;c;χ)|` divided by the Weil-type bound.
pub fn verify_weil(m: i64, n: i64, c: u64, ell: i64, chi: &DirichletCharacter) -> Result<f64> {
    Ok(kloosterman_naive(m, n, c, ell, chi)?.ratio())
}

/// `|S(m,n;c;χ)|` for all `n mod c` at once, via one DFT of length `c`.
pub fn salie_abs_all_n(m: i64, c: u64, chi: &DirichletCharacter) -> Result<Vec<f64>> {
    check_salie(c, chi)?;
    let units = UnitTable::new(c);
    let mut buf = vec![Complex64::new(0.0, 0.0); c as usize];
    for &(d, a) in units.pairs() {
        let k = kronecker(d as i64, c as i64) as f64;
        let ph = mul_mod(m.rem_euclid(c as i64) as u64, a, c);
        buf[d as usize] = chi.value(d as i64).conj() * k * e_frac(ph as i64, c);
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(c as usize).process(&mut buf);
    Ok(buf.iter().map(|z| z.norm()).collect())
}

/// `|K_ℓ(m,n;c;χ)|` for all `n mod c` at once, via one DFT of length `c`.
pub fn kloosterman_abs_all_n(m: i64, c: u64, ell: i64, chi: &DirichletCharacter) -> Result<Vec<f64>> {
    check_kloosterman(c, ell, chi)?;
    let units = UnitTable::new(c);
    let mut buf = vec![Complex64::new(0.0, 0.0); c as usize];
    for &(d, a) in units.pairs() {
        let k = kronecker(c as i64, d as i64) as f64;
        let ph = mul_mod(m.rem_euclid(c as i64) as u64, a, c);
        buf[d as usize] = epsilon_pow(d as i64, ell) * chi.value(d as i64).conj() * k * e_frac(ph as i64, c);
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(c as usize).process(&mut buf);
    Ok(buf.iter().map(|z| z.norm()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn small_kloosterman_values() {
        let chi = DirichletCharacter::trivial(4);
        let k = kloosterman_naive(0, 0, 4, 1, &chi).unwrap();
        assert!(close(k.value, Complex64::new(1.0, 1.0), 1e-14));
        let k = kloosterman_naive(1, 1, 4, 1, &chi).unwrap();
        assert!((k.bound - 48.0).abs() < 1e-12);
        assert!(k.value.norm() <= k.bound);
        let r = verify_weil(0, 0, 4, 1, &chi).unwrap();
        assert!((r - 2f64.sqrt() / 96.0).abs() < 1e-14);
    }

    #[test]
    fn kloosterman_domain_errors() {
        let chi = DirichletCharacter::trivial(4);
        assert!(kloosterman_naive(1, 1, 6, 1, &chi).is_err());
        assert!(kloosterman_naive(1, 1, 8, 2, &chi).is_err());
        let chi3 = DirichletCharacter::from_kronecker(-3, 3).unwrap();
        assert!(kloosterman_naive(1, 1, 8, 1, &chi3).is_err());
        assert!(kloosterman_naive(1, 1, 12, 1, &chi3).is_ok());
    }

    #[test]
    fn conjugation_symmetry() {
        let chi = DirichletCharacter::from_kronecker(-4, 4).unwrap();
        for (m, n, c, ell) in [(1, 2, 12, 1), (3, -5, 20, 3), (7, 7, 36, -1)] {
            let k = kloosterman_naive(m, n, c, ell, &chi).unwrap().value;
            let kc = kloosterman_naive(-m, -n, c, -ell, &chi).unwrap().value;
            assert!(close(k.conj(), kc, 1e-10));
        }
    }

    #[test]
    fn salie_examples() {
        for p in [3u64, 5, 7, 11, 13] {
            let chi = DirichletCharacter::trivial(p);
            let s = salie_naive(0, 0, p, &chi).unwrap();
            assert!(s.value.norm() < 1e-10);
            let s = salie_naive(0, 1, p, &chi).unwrap();
            assert!((s.value.norm() - (p as f64).sqrt()).abs() < 1e-10);
        }
        let chi9 = DirichletCharacter::trivial(9);
        let s = salie_naive(1, 1, 9, &chi9).unwrap();
        assert!((s.bound - 9.0).abs() < 1e-12);
        assert!(s.value.norm() <= s.bound);
        let chi1 = DirichletCharacter::trivial(1);
        assert!(close(salie_naive(5, 7, 1, &chi1).unwrap().value, Complex64::new(1.0, 0.0), 0.0));
        assert!(salie_naive(1, 1, 6, &DirichletCharacter::trivial(2)).is_err());
        assert!(salie_naive(1, 1, 9, &DirichletCharacter::trivial(5)).is_err());
    }

    #[test]
    fn factored_matches_naive_at_36() {
        let chi = DirichletCharacter::trivial(4);
        for m in -3..6 {
            for n in 0..8 {
                for ell in [1, 3] {
                    let a = kloosterman_naive(m, n, 36, ell, &chi).unwrap().value;
                    let b = kloosterman_factored(m, n, 36, ell, &chi).unwrap().value;
                    assert!(close(a, b, 1e-8 * 12.0), "{m} {n} {ell}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn pure_two_power_reduces_to_naive() {
        let chi = DirichletCharacter::from_kronecker(8, 8).unwrap();
        for c in [8u64, 16, 64] {
            let a = kloosterman_naive(3, 5, c, 1, &chi).unwrap().value;
            let b = kloosterman_factored(3, 5, c, 1, &chi).unwrap().value;
            assert!(close(a, b, 1e-10));
        }
    }

    #[test]
    fn bezout_freedom() {
        let chi = DirichletCharacter::from_kronecker(12, 12).unwrap();
        let (r, s) = (45u64, 16u64);
        let naive = kloosterman_naive(7, 11, r * s, 1, &chi).unwrap().value;
        let (rb, sb) = bezout_canonical(r, s).unwrap();
        for t in -3i64..=3 {
            let v = kloosterman_split(7, 11, r, s, rb + t * s as i64, sb - t * r as i64, 1, &chi).unwrap();
            assert!(close(v, naive, 1e-9), "t = {t}");
        }
    }

    #[test]
    fn salie_fft_matches_naive() {
        let chi = DirichletCharacter::from_kronecker(-3, 3).unwrap();
        let c = 27u64;
        for m in [0i64, 1, 3, 9] {
            let all = salie_abs_all_n(m, c, &chi).unwrap();
            for n in 0..c as i64 {
                let direct = salie_naive(m, n, c, &chi).unwrap().value.norm();
                assert!((all[n as usize] - direct).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn salie_multiplicative_split() {
        let chi = DirichletCharacter::from_kronecker(5, 5).unwrap();
        let (r, s) = (5u64, 36u64);
        for (m, n) in [(1, 2), (3, 0), (-4, 11)] {
            let direct = salie_naive(m, n, r * s, &chi).unwrap().value;
            let split = salie_split_pair(m, n, r, s, &chi).unwrap();
            assert!(close(direct, split, 1e-9));
        }
    }

    #[test]
    fn kloosterman_fft_matches_naive() {
        let chi = DirichletCharacter::from_kronecker(-4, 4).unwrap();
        for (m, c, ell) in [(3, 32, 1), (0, 16, 3), (5, 24, -1)] {
            let all = kloosterman_abs_all_n(m, c, ell, &chi).unwrap();
            for n in 0..c as i64 {
                let k = kloosterman_naive(m, n, c, ell, &chi).unwrap().value.norm();
                assert!((all[n as usize] - k).abs() < 1e-9, "{m} {n} {c}");
            }
        }
    }
}
