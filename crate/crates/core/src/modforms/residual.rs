//! The residual-spectrum constant `c_{f,h}`, the symmetric-square residue
//! it needs, and the level-576 inner-product example.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::sums::least_squares;
use super::{r1, CoefficientSource, CuspForm};
use crate::arith::{gcd, is_squarefree, kronecker};
use crate::error::{domain, Error, Result};
use crate::specfun::gamma::{gamma_real, ZETA2};
use crate::specfun::quad::integrate_breaks;
use crate::specfun::{QuadratureSpec, WhittakerSolver};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualConstant {
    pub value: f64,
    /// Why the constant vanishes, when it does.
    pub reason: Option<String>,
}

impl ResidualConstant {
    fn zero(reason: impl Into<String>) -> Self {
        ResidualConstant { value: 0.0, reason: Some(reason.into()) }
    }
}

/// `c_{f,h}` for square-free odd `N/4` and `χ = (·/(N/4))`:
/// the residue at `s = 3/4` of
/// `2^{k/2}√π(−1)^{(k−1)/2} r₁(4h/N) / (ζ(2)Γ((k+1)/2)) ·
///  Γ(s−1/4)Γ(s−3/4) / (Γ(s+k/2−3/4)Γ(s−κ/2)) · R`.
pub fn residual_constant(f: &CuspForm, h: u64, r: f64) -> Result<ResidualConstant> {
    let k = f.weight;
    let n = f.level;
    if k % 2 == 0 {
        return Ok(ResidualConstant::zero("restrict to k odd"));
    }
    let q = n / 4;
    if q.is_multiple_of(2) || !is_squarefree(q) {
        return Ok(ResidualConstant::zero(format!("N/4 = {q} is not square-free and odd")));
    }
    let matches = (1..n as i64)
        .filter(|&d| gcd(d, n as i64) == 1)
        .all(|d| (f.character.value(d) - kronecker(d, q as i64) as f64).norm() < 1e-12);
    if !matches {
        return Ok(ResidualConstant::zero(format!("χ ≠ (·/{q})")));
    }
    if !(4 * h).is_multiple_of(n) {
        return Ok(ResidualConstant::zero(format!("N = {n} does not divide 4h = {}", 4 * h)));
    }
    let r1v = r1((4 * h / n) as i64) as f64;
    if r1v == 0.0 {
        return Ok(ResidualConstant::zero(format!("4h/N = {} is not a square", 4 * h / n)));
    }
    let kf = k as f64;
    let sign = if (k - 1) / 2 % 2 == 0 { 1.0 } else { -1.0 };
    let front = 2f64.powf(kf / 2.0) * PI.sqrt() * sign * r1v / (ZETA2 * gamma_real((kf + 1.0) / 2.0)?);
    let gam = gamma_real(0.5)? / (gamma_real(kf / 2.0)? * gamma_real(1.0 - kf / 2.0)?);
    Ok(ResidualConstant { value: front * gam * r, reason: None })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sym2Estimate {
    /// `ζ(2)·α`.
    pub residue: f64,
    /// Slope `α` of `P(Y)` against `log Y`.
    pub slope: f64,
    /// RMS residual of the linear fit.
    pub quality: f64,
    /// `(Y, P(Y))`.
    pub rows: Vec<(u64, f64)>,
}

/// Fits `P(Y) = Σ_{n≤Y} a(n²)/n^k = Σ_{n≤Y} A(n²)/n` against `log Y`.
pub fn sym2_residue_estimate<S: CoefficientSource + ?Sized>(f: &S, y_grid: &[u64]) -> Result<Sym2Estimate> {
    if y_grid.len() < 2 || y_grid[0] == 0 || y_grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("Y grid must hold at least two increasing positive integers");
    }
    let y_max = *y_grid.last().unwrap();
    let a = f.normalized_at_shifted_squares(0, y_max)?;
    let mut rows = Vec::with_capacity(y_grid.len());
    let mut acc = 0.0;
    let mut n = 1u64;
    for &y in y_grid {
        while n <= y {
            acc += a[n as usize].re / n as f64;
            n += 1;
        }
        rows.push((y, acc));
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|&(y, p)| ((y as f64).ln(), p)).collect();
    let (slope, _, quality) = least_squares(&pts);
    Ok(Sym2Estimate { residue: ZETA2 * slope, slope, quality, rows })
}

/// `2^{11/2−5k/2} π^{1/2−k/2} Γ(k−1) sin(π(k+1)/4)`.
pub fn remark_closed_form(k: i64) -> Result<f64> {
    let kf = k as f64;
    Ok(2f64.powf(5.5 - 2.5 * kf) * PI.powf(0.5 - 0.5 * kf) * gamma_real(kf - 1.0)? * (PI * (kf + 1.0) / 4.0).sin())
}

/// `⟨y^{k/2+1/4} P₂ θ̄, Θ_{χ,1}⟩` at level 576, χ = (12/·), from the unfolded
/// sum over `2 = n₁ + n₂²` (only `n₁ = 1, n₂ = ±1`, weight `r₁(1)χ(±1)`):
/// `4 (4π)^{−1/4} ∫₀^∞ y^{k/2−3/4} e^{−6πy} W_{κ/2,1/4}(4πy) dy/y`.
pub fn remark_inner_product(k: i64, spec: &QuadratureSpec) -> Result<f64> {
    if k < 5 || k.rem_euclid(4) != 1 {
        return domain(format!("k = {k} must satisfy k ≥ 5, k ≡ 1 mod 4"));
    }
    spec.validate()?;
    let kf = k as f64;
    let eta = 0.5 * (kf - 0.5);
    let delta = 0.5 * kf - 0.75;
    let mut multiplicity = 0.0;
    for n2 in [-1i64, 1] {
        multiplicity += r1(2 - n2 * n2) as f64 * kronecker(12, n2) as f64;
    }
    // u = 4πy: (4π)^{−δ} ∫ u^{δ−1} e^{−3u/2} W(u) du, in x = ln u.
    let u_lo = 1e-12f64;
    let u_hi = (spec.decay_length() + 30.0 + 5.0 * (delta + eta)) / 2.0;
    let solver = WhittakerSolver::new(eta, Complex64::new(0.25, 0.0), u_lo, u_hi)?;
    let (x0, x1) = (u_lo.ln(), u_hi.ln());
    let n = 64;
    let breaks: Vec<f64> = (0..=n).map(|i| x0 + (x1 - x0) * i as f64 / n as f64).collect();
    let r = integrate_breaks(
        &mut |x: f64| {
            let u = x.exp();
            u.powf(delta) * (-1.5 * u).exp() * solver.eval(u)
        },
        &breaks,
        spec,
    );
    if !r.converged {
        return Err(Error::Numerical("inner-product quadrature did not converge".into()));
    }
    Ok(multiplicity * (4.0 * PI).powf(-0.25 - delta) * r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::DihedralEta7;

    struct Synthetic(f64);

    impl CoefficientSource for Synthetic {
        fn weight(&self) -> i64 {
            3
        }
        fn normalized_at_shifted_squares(&self, _h: u64, n_max: u64) -> Result<Vec<Complex64>> {
            Ok(vec![Complex64::new(self.0, 0.0); n_max as usize + 1])
        }
    }

    #[test]
    fn closed_form_values() {
        let v = remark_closed_form(5).unwrap();
        assert!((v + 3.0 / (64.0 * PI * PI)).abs() < 1e-15);
        assert!(remark_closed_form(9).unwrap() != 0.0);
        assert!(remark_inner_product(7, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn inner_product_matches_closed_form() {
        let spec = QuadratureSpec::default();
        for k in [5, 9] {
            let q = remark_inner_product(k, &spec).unwrap();
            let c = remark_closed_form(k).unwrap();
            assert!(((q - c) / c).abs() < 1e-6, "k = {k}: {q} vs {c}");
        }
    }

    #[test]
    fn residual_constant_conditions() {
        let f = DihedralEta7.form(50, 28).unwrap();
        assert_eq!(residual_constant(&f, 1, 1.0).unwrap().value, 0.0);
        assert_eq!(residual_constant(&f, 3, 1.0).unwrap().value, 0.0);
        let c = residual_constant(&f, 7, 1.0).unwrap();
        assert!(c.reason.is_none());
        // Duplication-formula form: 2^{k/2} r₁ R / (ζ(2) Γ((k+1)/2)).
        let alt = 2f64.powf(1.5) * 2.0 / (ZETA2 * 1.0);
        assert!((c.value - alt).abs() < 1e-12 * alt);
        let c2 = residual_constant(&f, 7, 2.5).unwrap();
        assert!((c2.value - 2.5 * c.value).abs() < 1e-12);
        // 4h/N = 4 is a square again.
        assert!(residual_constant(&f, 28, 1.0).unwrap().value > 0.0);
        let g = DihedralEta7.form(50, 56).unwrap();
        assert!(residual_constant(&g, 14, 1.0).unwrap().reason.is_some());
        let mut even = f.clone();
        even.weight = 4;
        assert_eq!(residual_constant(&even, 7, 1.0).unwrap().reason.as_deref(), Some("restrict to k odd"));
    }

    #[test]
    fn sym2_synthetic() {
        let grid: Vec<u64> = (6..=14).map(|j| 1u64 << j).collect();
        let e = sym2_residue_estimate(&Synthetic(1.0), &grid).unwrap();
        // H(Y) = log Y + γ + 1/(2Y) + …; the 1/(2Y) term tilts the slope by ~1e−3.
        assert!((e.slope - 1.0).abs() < 5e-3);
        assert!((e.residue - ZETA2).abs() < 1e-2);
        let z = sym2_residue_estimate(&Synthetic(0.0), &grid).unwrap();
        assert_eq!(z.residue, 0.0);
    }
}
