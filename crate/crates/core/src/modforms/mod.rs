//! Holomorphic cusp forms given by q-expansion data, theta arithmetic, and
//! the shifted convolution sums `Σ A(n² + h)`.

pub mod eta;
pub mod residual;
pub mod sums;
pub mod theta;

use num_complex::Complex64;
use std::path::Path;

use crate::arith::{is_prime, DirichletCharacter};
use crate::error::{domain, Error, Result};

pub use eta::{eta_product, DihedralEta7};
pub use residual::{
    remark_closed_form, remark_inner_product, residual_constant, sym2_residue_estimate, ResidualConstant, Sym2Estimate,
};
pub use sums::{dirichlet_d_h, fit_exponent, shifted_sum, shifted_sum_with, DirichletValue, ShiftedSumSeries};
pub use theta::{random_gamma0_4, theta, theta_transform_residual};

/// `r₁(n)`: representations of `n` as one square.
pub fn r1(n: i64) -> u32 {
    if n < 0 {
        0
    } else if n == 0 {
        1
    } else if crate::arith::is_square(n as u64) {
        2
    } else {
        0
    }
}

/// Anything that can supply normalized coefficients `A(n) = a(n)/n^{(k−1)/2}`
/// along the quadratic sequence `n² + h`.
pub trait CoefficientSource {
    fn weight(&self) -> i64;

    /// `A(n² + h)` for `n = 0..=n_max`; with `h = 0` the `n = 0` slot is zero.
    fn normalized_at_shifted_squares(&self, h: u64, n_max: u64) -> Result<Vec<Complex64>>;
}

#[derive(Debug, Clone)]
pub struct CuspForm {
    pub level: u64,
    pub weight: i64,
    pub character: DirichletCharacter,
    /// `a(1), …, a(M)`.
    pub coeffs: Vec<Complex64>,
    pub label: String,
    pub warnings: Vec<String>,
}

impl CuspForm {
    pub fn new(
        level: u64,
        weight: i64,
        character: DirichletCharacter,
        coeffs: Vec<Complex64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if !level.is_multiple_of(4) {
            return domain(format!("level {level} is not divisible by 4; lift it first"));
        }
        if weight < 3 {
            return domain(format!("weight {weight} must be at least 3"));
        }
        if character.modulus() != level {
            return domain(format!("character modulus {} does not match level {level}", character.modulus()));
        }
        if coeffs.is_empty() {
            return domain("empty coefficient list");
        }
        let mut form = CuspForm { level, weight, character, coeffs, label: label.into(), warnings: Vec::new() };
        form.sanity_warnings();
        Ok(form)
    }

    /// Embeds data of level `n0` (any `n0`) at level `level`, which must be a
    /// multiple of both `n0` and 4.
    pub fn lift(
        n0: u64,
        level: u64,
        weight: i64,
        character: &DirichletCharacter,
        coeffs: Vec<Complex64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if n0 == 0 || !level.is_multiple_of(n0) || !level.is_multiple_of(4) {
            return domain(format!("cannot lift level {n0} to {level}"));
        }
        if character.modulus() != n0 {
            return domain(format!("character modulus {} ≠ level {n0}", character.modulus()));
        }
        let chi = character.induce(level)?;
        let mut form = CuspForm::new(level, weight, chi, coeffs, label)?;
        if n0 != level {
            form.warnings.push(format!("level lifted from {n0} to {level}"));
        }
        Ok(form)
    }

    fn sanity_warnings(&mut self) {
        if self.coeffs[0].norm() == 0.0 {
            self.warnings.push("a(1) = 0: not a normalized newform".into());
        } else if (self.coeffs[0] - 1.0).norm() > 1e-12 {
            self.warnings.push(format!("a(1) = {} ≠ 1", self.coeffs[0]));
        }
        let half = 0.5 * (self.weight - 1) as f64;
        for (i, a) in self.coeffs.iter().enumerate() {
            let p = i as u64 + 1;
            if is_prime(p) && a.norm() > 2.0 * (p as f64).powf(half) * (1.0 + 1e-9) {
                self.warnings.push(format!("|a({p})| exceeds the Deligne bound"));
                break;
            }
        }
    }

    pub fn num_coeffs(&self) -> u64 {
        self.coeffs.len() as u64
    }

    pub fn a(&self, n: u64) -> Result<Complex64> {
        if n == 0 || n > self.num_coeffs() {
            return Err(Error::OutOfRange { requested: n, available: self.num_coeffs() });
        }
        Ok(self.coeffs[n as usize - 1])
    }

    /// `A(n) = a(n)/n^{(k−1)/2}`.
    pub fn coeff_a_normalized(&self, n: u64) -> Result<Complex64> {
        Ok(self.a(n)? / (n as f64).powf(0.5 * (self.weight - 1) as f64))
    }

    /// Errors unless `a(needed)` is available.
    pub fn require(&self, needed: u64) -> Result<()> {
        if needed > self.num_coeffs() {
            return Err(Error::OutOfRange { requested: needed, available: self.num_coeffs() });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\nlevel={}\nweight={}\n", self.label, self.level, self.weight);
        match self.character.discriminant() {
            Some(d) => out.push_str(&format!("char_kronecker={d}\n")),
            None => {
                let entries: Vec<String> =
                    self.character.values().iter().map(|v| format!("{}:{}", v.re, v.im)).collect();
                out.push_str(&format!("char_table={}\n", entries.join(" ")));
            }
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.im == 0.0 {
                out.push_str(&format!("a {} {}\n", i + 1, a.re));
            } else {
                out.push_str(&format!("a {} {} {}\n", i + 1, a.re, a.im));
            }
        }
        out
    }
}

impl CoefficientSource for CuspForm {
    fn weight(&self) -> i64 {
        self.weight
    }

    fn normalized_at_shifted_squares(&self, h: u64, n_max: u64) -> Result<Vec<Complex64>> {
        self.require(n_max * n_max + h)?;
        (0..=n_max)
            .map(|n| {
                let m = n * n + h;
                if m == 0 {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    self.coeff_a_normalized(m)
                }
            })
            .collect()
    }
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

fn parse_complex(s: &str, line: usize) -> Result<Complex64> {
    let (re, im) = match s.split_once(':') {
        Some((a, b)) => (a, b),
        None => (s, "0"),
    };
    match (re.trim().parse::<f64>(), im.trim().parse::<f64>()) {
        (Ok(re), Ok(im)) => Ok(Complex64::new(re, im)),
        _ => parse_err(line, format!("bad number {s:?}")),
    }
}

/// Raw contents of a form file before level checks.
#[derive(Debug, Clone)]
pub struct FormFile {
    pub level: u64,
    pub weight: i64,
    pub character: DirichletCharacter,
    pub coeffs: Vec<Complex64>,
    pub label: String,
}

/// Parses `level=`, `weight=`, `char_kronecker=` / `char_table=` headers and
/// `a <n> <re> [<im>]` lines; `#` starts a comment, a leading comment becomes
/// the label.
pub fn parse_form(text: &str) -> Result<FormFile> {
    let mut level = None;
    let mut weight = None;
    let mut kron = None;
    let mut table = None;
    let mut label = String::new();
    let mut coeffs: Vec<Complex64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if let Some(c) = line.strip_prefix('#') {
            if label.is_empty() && coeffs.is_empty() {
                label = c.trim().to_string();
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if let Some((key, val)) = line.split_once('=') {
            let val = val.trim();
            match key.trim() {
                "level" => level = Some(val.parse::<u64>().or_else(|_| parse_err(ln, "bad level"))?),
                "weight" => weight = Some(val.parse::<i64>().or_else(|_| parse_err(ln, "bad weight"))?),
                "char_kronecker" => kron = Some(val.parse::<i64>().or_else(|_| parse_err(ln, "bad discriminant"))?),
                "char_table" => {
                    let vals: Result<Vec<_>> = val.split_whitespace().map(|s| parse_complex(s, ln)).collect();
                    table = Some(vals?);
                }
                "label" => label = val.to_string(),
                other => return parse_err(ln, format!("unknown header {other:?}")),
            }
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.first() != Some(&"a") || !(3..=4).contains(&parts.len()) {
            return parse_err(ln, "expected `a <n> <re> [<im>]`");
        }
        let n: usize = parts[1].parse().or_else(|_| parse_err(ln, "bad index"))?;
        if n != coeffs.len() + 1 {
            return parse_err(ln, format!("coefficient a({n}) out of sequence"));
        }
        let re: f64 = parts[2].parse().or_else(|_| parse_err(ln, "bad coefficient"))?;
        let im: f64 = match parts.get(3) {
            Some(s) => s.parse().or_else(|_| parse_err(ln, "bad coefficient"))?,
            None => 0.0,
        };
        coeffs.push(Complex64::new(re, im));
    }
    let Some(level) = level else { return parse_err(0, "missing level=") };
    let Some(weight) = weight else { return parse_err(0, "missing weight=") };
    if level == 0 {
        return parse_err(0, "level must be positive");
    }
    let character = match (kron, table) {
        (Some(d), None) => DirichletCharacter::from_kronecker(d, level)?,
        (None, Some(t)) => DirichletCharacter::from_table(level, t)?,
        (None, None) => DirichletCharacter::trivial(level),
        (Some(_), Some(_)) => return parse_err(0, "both char_kronecker and char_table given"),
    };
    if coeffs.is_empty() {
        return parse_err(0, "no coefficients");
    }
    Ok(FormFile { level, weight, character, coeffs, label })
}

/// Loads a form file; the level must already be divisible by 4.
pub fn load_form(path: impl AsRef<Path>) -> Result<CuspForm> {
    let f = parse_form(&std::fs::read_to_string(path)?)?;
    CuspForm::new(f.level, f.weight, f.character, f.coeffs, f.label)
}

/// Loads a form file and embeds it at `level` (or at `lcm(4, N₀)` if `None`).
pub fn load_form_lifted(path: impl AsRef<Path>, level: Option<u64>) -> Result<CuspForm> {
    let f = parse_form(&std::fs::read_to_string(path)?)?;
    let target = level.unwrap_or_else(|| lcm4(f.level));
    CuspForm::lift(f.level, target, f.weight, &f.character, f.coeffs, f.label)
}

pub fn lcm4(n: u64) -> u64 {
    n * 4 / crate::arith::gcd(n as i64, 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r1_values() {
        assert_eq!(r1(0), 1);
        assert_eq!(r1(4), 2);
        assert_eq!(r1(3), 0);
        assert_eq!(r1(-1), 0);
    }

    #[test]
    fn parse_and_lift() {
        let text = "# eta7\nlevel=7\nweight=3\nchar_kronecker=-7\na 1 1\na 2 -3\na 3 0\n";
        let f = parse_form(text).unwrap();
        assert_eq!(f.level, 7);
        assert!(CuspForm::new(f.level, f.weight, f.character.clone(), f.coeffs.clone(), "x").is_err());
        let form = CuspForm::lift(7, 28, 3, &f.character, f.coeffs, f.label).unwrap();
        assert_eq!(form.level, 28);
        assert_eq!(form.a(2).unwrap().re, -3.0);
        assert!((form.coeff_a_normalized(2).unwrap().re + 1.5).abs() < 1e-15);
        assert!(form.coeff_a_normalized(4).is_err());
        assert_eq!(form.character.value(3), Complex64::new(-1.0, 0.0));
        assert!(form.warnings.iter().any(|w| w.contains("lifted")));
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_form("level=4\nweight=3\na 2 1\n").is_err());
        assert!(parse_form("level=4\na 1 1\n").is_err());
        assert!(parse_form("level=4\nweight=3\nfoo\n").is_err());
        let f = parse_form("level=4\nweight=2\na 1 1\n").unwrap();
        assert!(CuspForm::new(f.level, f.weight, f.character, f.coeffs, "").is_err());
    }

    #[test]
    fn non_newform_warning() {
        let f = parse_form("level=12\nweight=3\na 1 0\na 2 1\n").unwrap();
        let form = CuspForm::new(f.level, f.weight, f.character, f.coeffs, "").unwrap();
        assert!(form.warnings.iter().any(|w| w.contains("a(1) = 0")));
    }
}
