//! Sharp-cutoff sums `S(X) = Σ_{n∈ℤ, n²+h ≤ X²} A(n²+h)`, the Dirichlet
//! series `D_h(s)`, and power-law fits.

use num_complex::Complex64;
use serde::Serialize;

use super::{r1, CoefficientSource};
use crate::arith::primes_up_to;
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftedSumSeries {
    pub h: u64,
    /// `(X, S(X))`, real parts.
    pub rows: Vec<(f64, f64)>,
    /// Largest `|Im S|` seen.
    pub max_imag: f64,
    pub one_sided: bool,
    pub fitted_c: f64,
    pub fitted_exponent: f64,
}

/// Largest `n ≥ 0` with `n² + h ≤ X²`, or `None` if `X² < h`.
fn n_cut(x: f64, h: u64) -> Option<u64> {
    let x2 = x * x;
    if x2 < h as f64 {
        return None;
    }
    let mut n = (x2 - h as f64).max(0.0).sqrt() as u64;
    while ((n + 1) * (n + 1) + h) as f64 <= x2 {
        n += 1;
    }
    while n > 0 && (n * n + h) as f64 > x2 {
        n -= 1;
    }
    Some(n)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return domain("empty X grid");
    }
    if !grid.iter().all(|x| x.is_finite() && *x >= 0.0) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("X grid must be nonnegative and strictly increasing");
    }
    Ok(())
}

/// `S(X)` over the grid by incremental summation. With `one_sided` the
/// `n ≥ 1` part is counted once instead of twice.
pub fn shifted_sum<S: CoefficientSource + ?Sized>(
    f: &S,
    h: u64,
    grid: &[f64],
    one_sided: bool,
) -> Result<ShiftedSumSeries> {
    if h == 0 {
        return domain("shift h must be positive");
    }
    check_grid(grid)?;
    let n_max = n_cut(*grid.last().unwrap(), h).unwrap_or(0);
    let vals = f.normalized_at_shifted_squares(h, n_max)?;
    shifted_sum_with(h, grid, one_sided, |n| vals[n as usize])
}

/// As [`shifted_sum`], with `A(n² + h)` supplied by `coeff(n)`.
pub fn shifted_sum_with(
    h: u64,
    grid: &[f64],
    one_sided: bool,
    mut coeff: impl FnMut(u64) -> Complex64,
) -> Result<ShiftedSumSeries> {
    check_grid(grid)?;
    let weight = if one_sided { 1.0 } else { 2.0 };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut next: u64 = 0;
    let mut rows = Vec::with_capacity(grid.len());
    let mut max_imag: f64 = 0.0;
    for &x in grid {
        if let Some(cut) = n_cut(x, h) {
            while next <= cut {
                let w = if next == 0 { 1.0 } else { weight };
                acc += coeff(next) * w;
                next += 1;
            }
        }
        max_imag = max_imag.max(acc.im.abs());
        rows.push((x, acc.re));
    }
    Ok(ShiftedSumSeries { h, rows, max_imag, one_sided, fitted_c: 0.0, fitted_exponent: f64::NAN })
}

impl ShiftedSumSeries {
    /// Least-squares `c` in `S ≈ cX`.
    pub fn linear_constant(&self) -> f64 {
        let (sxy, sxx) = self.rows.iter().fold((0.0, 0.0), |(a, b), &(x, s)| (a + x * s, b + x * x));
        if sxx == 0.0 {
            0.0
        } else {
            sxy / sxx
        }
    }

    /// Records `c` and the fitted exponent of `|S − cX|`.
    pub fn fit(&mut self, c: f64) -> Result<f64> {
        let e = fit_exponent(self, c)?;
        self.fitted_c = c;
        self.fitted_exponent = e;
        Ok(e)
    }

    /// Log-log slope of `|S − cX|` over the `window` rows ending at row `i`.
    pub fn local_slope(&self, c: f64, i: usize, window: usize) -> Option<f64> {
        if window < 2 || i + 1 < window {
            return None;
        }
        let pts: Vec<(f64, f64)> =
            self.rows[i + 1 - window..=i].iter().filter_map(|&(x, s)| log_point(x, s - c * x)).collect();
        (pts.len() >= 2).then(|| least_squares(&pts).0)
    }

    /// Writes the schema line, then `X,S,c_fit,residual,slope_window` rows.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W, window: usize) -> Result<()> {
        writeln!(w, "{SERIES_SCHEMA} h={} one_sided={}", self.h, self.one_sided)?;
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["X", "S", "c_fit", "residual", "slope_window"])?;
        let c = self.fitted_c;
        for (i, &(x, s)) in self.rows.iter().enumerate() {
            let slope = self.local_slope(c, i, window).map_or(String::new(), |v| format!("{v:.6}"));
            out.write_record([
                format!("{x}"),
                format!("{s:.12e}"),
                format!("{c:.12e}"),
                format!("{:.12e}", s - c * x),
                slope,
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a table written by [`ShiftedSumSeries::write_csv`].
    pub fn read_csv<R: std::io::BufRead>(mut r: R) -> Result<Self> {
        let mut first = String::new();
        r.read_line(&mut first)?;
        let bad = |msg: String| Error::Parse { line: 1, msg };
        let mut fields = first.split_whitespace();
        let tag = [fields.next(), fields.next()];
        if tag != [Some("#"), SERIES_SCHEMA.strip_prefix("# ")] {
            return Err(bad(format!("expected `{SERIES_SCHEMA}`, got `{}`", first.trim())));
        }
        let (mut h, mut one_sided) = (None, false);
        for kv in fields {
            match kv.split_once('=') {
                Some(("h", v)) => h = v.parse::<u64>().ok(),
                Some(("one_sided", v)) => one_sided = v == "true",
                _ => {}
            }
        }
        let h = h.ok_or_else(|| bad("schema line lacks a valid h=".into()))?;
        let mut rdr = csv::Reader::from_reader(r);
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let num = |j: usize| -> Result<f64> {
                rec.get(j)
                    .and_then(|v| v.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse { line: i + 3, msg: format!("column {j} is not a number") })
            };
            rows.push((num(0)?, num(1)?));
        }
        Ok(ShiftedSumSeries { h, rows, max_imag: 0.0, one_sided, fitted_c: 0.0, fitted_exponent: f64::NAN })
    }
}

pub const SERIES_SCHEMA: &str = "# schema=theta-shift/shifted-sum/v1";

fn log_point(x: f64, r: f64) -> Option<(f64, f64)> {
    (x > 0.0 && r.abs() >= 1e-12).then(|| (x.ln(), r.abs().ln()))
}

/// `(slope, intercept, rms residual)` of a least-squares line.
pub(crate) fn least_squares(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icpt = my - slope * mx;
    let rms = (pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    (slope, icpt, rms)
}

pub const MIN_FIT_ROWS: usize = 5;

/// Least-squares slope of `log|S(X) − cX|` against `log X`, skipping rows
/// where the difference cancels below `1e−12`.
pub fn fit_exponent(series: &ShiftedSumSeries, c: f64) -> Result<f64> {
    if series.rows.len() < MIN_FIT_ROWS {
        return domain(format!("need at least {MIN_FIT_ROWS} rows, got {}", series.rows.len()));
    }
    let pts: Vec<(f64, f64)> = series.rows.iter().filter_map(|&(x, s)| log_point(x, s - c * x)).collect();
    if pts.len() < 2 || pts.iter().all(|p| p.0 == pts[0].0) {
        return Err(Error::Domain("degenerate grid for the exponent fit".into()));
    }
    Ok(least_squares(&pts).0)
}

/// Smallest `C` with `τ(n) ≤ C n^δ` for all `n`, as an Euler product
/// (infinite below `δ = 1/32`).
pub fn divisor_bound_constant(delta: f64) -> f64 {
    if !(delta >= 1.0 / 32.0) {
        return f64::INFINITY;
    }
    let pmax = 2f64.powf(1.0 / delta).ceil() as u64 + 1;
    primes_up_to(pmax)
        .into_iter()
        .map(|p| {
            let pd = (p as f64).powf(delta);
            let mut best: f64 = 1.0;
            let mut pe = 1.0;
            for e in 1..200 {
                pe *= pd;
                let v = (e + 1) as f64 / pe;
                best = best.max(v);
                if v < best * 0.5 {
                    break;
                }
            }
            best
        })
        .product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirichletValue {
    pub value: Complex64,
    /// Bound on the omitted terms, from `|A(n)| ≤ τ(n)`.
    pub tail: f64,
}

/// `Σ_{m=0}^{cutoff} r₁(m) a(m+h)/(m+h)^{s+k/2−3/4}`, using
/// `a(n)/n^{s+k/2−3/4} = A(n) n^{1/4−s}`.
pub fn dirichlet_d_h<S: CoefficientSource + ?Sized>(
    f: &S,
    h: u64,
    s: Complex64,
    cutoff: u64,
) -> Result<DirichletValue> {
    if h == 0 {
        return domain("shift h must be positive");
    }
    if !(s.re > 0.75) {
        return domain(format!("need Re s > 3/4, got {s}"));
    }
    let j_max = crate::arith::isqrt(cutoff);
    let vals = f.normalized_at_shifted_squares(h, j_max)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, a) in vals.iter().enumerate() {
        let m = j as u64 * j as u64;
        let n = (m + h) as f64;
        acc += a * (r1(m as i64) as f64) * ((Complex64::new(0.25, 0.0) - s) * n.ln()).exp();
    }
    // Σ_{j>J} 2Cδ (j²+h)^{δ+1/4−σ} ≤ 2Cδ J^{−e}/e with e = 2σ−3/2−2δ.
    let sigma = s.re;
    let delta = ((sigma - 0.75) / 2.0).min(0.25);
    let expo = 2.0 * sigma - 1.5 - 2.0 * delta;
    let tail = if j_max == 0 {
        f64::INFINITY
    } else {
        2.0 * divisor_bound_constant(delta) * (j_max as f64).powf(-expo) / expo
    };
    Ok(DirichletValue { value: acc, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::DihedralEta7;

    #[test]
    fn cutoffs_and_small_sums() {
        assert_eq!(n_cut(0.5, 1), None);
        assert_eq!(n_cut(1.0, 1), Some(0));
        assert_eq!(n_cut(3.0, 1), Some(2));
        assert_eq!(n_cut(10.0, 0), Some(10));
        let f = DihedralEta7.form(100, 28).unwrap();
        let a = |n: u64| f.coeff_a_normalized(n).unwrap().re;
        let s = shifted_sum(&f, 1, &[0.5, 1.0, 3.0], false).unwrap();
        assert_eq!(s.rows[0].1, 0.0);
        assert_eq!(s.rows[1].1, a(1));
        assert!((s.rows[2].1 - (a(1) + 2.0 * (a(2) + a(5)))).abs() < 1e-14);
        let s = shifted_sum(&f, 1, &[10f64.sqrt()], false).unwrap();
        assert!((s.rows[0].1 - (a(1) + 2.0 * (a(2) + a(5) + a(10)))).abs() < 1e-14);
        let one = shifted_sum(&f, 1, &[10f64.sqrt()], true).unwrap();
        assert!((one.rows[0].1 - (a(1) + a(2) + a(5) + a(10))).abs() < 1e-14);
        assert!(matches!(shifted_sum(&f, 1, &[20.0], false), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn power_law_fits() {
        let grid: Vec<f64> = (4..16).map(|j| 2f64.powi(j)).collect();
        let s = shifted_sum_with(1, &grid, false, |_| Complex64::new(0.0, 0.0)).unwrap();
        let mut series = s.clone();
        series.rows = grid.iter().map(|&x| (x, x.powf(0.75))).collect();
        assert!((fit_exponent(&series, 0.0).unwrap() - 0.75).abs() < 0.01);
        series.rows = grid.iter().map(|&x| (x, 2.0 * x + x.powf(0.6))).collect();
        assert!((fit_exponent(&series, 2.0).unwrap() - 0.6).abs() < 0.02);
        series.rows.truncate(4);
        assert!(fit_exponent(&series, 0.0).is_err());
    }

    #[test]
    fn divisor_constant() {
        let c = divisor_bound_constant(0.25);
        for n in 1..20000u64 {
            assert!(crate::arith::tau(n) as f64 <= c * (n as f64).powf(0.25) * (1.0 + 1e-12));
        }
        assert!(c > 8.0 && c < 9.0);
    }

    #[test]
    fn dirichlet_series_tail() {
        let f = DihedralEta7.form(40_000 + 10, 28).unwrap();
        let s = Complex64::new(5.0, 0.0);
        let v = dirichlet_d_h(&f, 3, s, 10_000).unwrap();
        assert!(v.tail < 1e-8);
        let lead = f.a(2).unwrap() / 2f64.powf(5.0 + 1.5 - 0.75);
        let only = dirichlet_d_h(&f, 2, s, 0).unwrap();
        assert!((only.value - lead).norm() < 1e-13 * lead.norm());
        for &sig in &[1.2, 1.6, 3.0] {
            let s = Complex64::new(sig, 0.7);
            let a = dirichlet_d_h(&f, 3, s, 10_000).unwrap();
            let b = dirichlet_d_h(&f, 3, s, 20_000).unwrap();
            assert!((a.value - b.value).norm() <= a.tail, "σ = {sig}");
        }
    }
}
