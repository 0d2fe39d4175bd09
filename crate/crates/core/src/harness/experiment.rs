//! Sharp-cutoff shifted-sum experiments and exponent fits.

use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use super::geometric_grid;
use super::report::{sci, Check, SuiteReport, Table};
use crate::error::{domain, Result};
use crate::modforms::sums::MIN_FIT_ROWS;
use crate::modforms::{
    load_form_lifted, residual_constant, shifted_sum as sum_series, sym2_residue_estimate, CoefficientSource, CuspForm,
    DihedralEta7, ShiftedSumSeries,
};

/// Where coefficients come from: a form file, or the built-in `eta7`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormSource {
    Eta7,
    File(PathBuf),
}

impl std::str::FromStr for FormSource {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(if s == "eta7" { FormSource::Eta7 } else { FormSource::File(s.into()) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    /// `X = 2^j`.
    Dyadic,
    /// `X = 2^{j/4}`.
    Quarter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ShiftedSumParams {
    pub form: FormSource,
    pub h: u64,
    pub xmin: f64,
    pub xmax: f64,
    pub grid: GridKind,
    pub one_sided: bool,
    /// Level to lift to; `lcm(4, N)` by default.
    pub level: Option<u64>,
    /// Main-term constant; chosen from the residual constant when absent.
    pub c: Option<f64>,
    /// Largest accepted exponent in the main-term-free case.
    pub exponent_max: f64,
    /// Allowed relative change of `S(X)/X` over the top two dyadic points.
    pub plateau_tol: f64,
    /// Largest `Y` for the symmetric-square residue estimate.
    pub sym2_ymax: u64,
}

impl Default for ShiftedSumParams {
    fn default() -> Self {
        ShiftedSumParams {
            form: FormSource::Eta7,
            h: 1,
            xmin: 1024.0,
            xmax: 131_072.0,
            grid: GridKind::Dyadic,
            one_sided: false,
            level: None,
            c: None,
            exponent_max: 0.85,
            plateau_tol: 0.10,
            sym2_ymax: 1 << 16,
        }
    }
}

/// The form at its lifted level together with a coefficient source for the
/// sums.
fn resolve(p: &ShiftedSumParams) -> Result<(CuspForm, Box<dyn CoefficientSource>, u64)> {
    match &p.form {
        FormSource::Eta7 => {
            let level = p.level.unwrap_or(28);
            let f = DihedralEta7.form(64, level)?;
            // Prime-power sieve: sums need no stored coefficients.
            Ok((f, Box::new(DihedralEta7), u64::MAX))
        }
        FormSource::File(path) => {
            let f = load_form_lifted(path, p.level)?;
            let stored = f.num_coeffs();
            Ok((f.clone(), Box::new(f), stored))
        }
    }
}

fn grid(p: &ShiftedSumParams) -> Result<Vec<f64>> {
    let per = match p.grid {
        GridKind::Dyadic => 1,
        GridKind::Quarter => 4,
    };
    geometric_grid(p.xmin, p.xmax, per)
}

fn series_table(s: &ShiftedSumSeries, window: usize) -> Table {
    let mut t = Table::new("shifted-sum", &["X", "S", "c_fit", "residual", "slope_window"]);
    t.attrs = format!("h={} one_sided={}", s.h, s.one_sided);
    let c = s.fitted_c;
    for (i, &(x, v)) in s.rows.iter().enumerate() {
        let slope = s.local_slope(c, i, window).map_or(String::new(), |v| format!("{v:.6}"));
        t.push(vec![format!("{x}"), sci(v), sci(c), sci(v - c * x), slope]);
    }
    t
}

/// `S(X)` on the grid, then either the exponent of `|S(X)|` when the
/// residual constant vanishes, or the plateau of `S(X)/X` and an
/// informational comparison with the residual constant.
pub fn shifted_sum(p: &ShiftedSumParams) -> Result<SuiteReport> {
    if p.h == 0 {
        return domain("shift h must be positive");
    }
    let (form, source, stored) = resolve(p)?;
    let xs = grid(p)?;
    let need = (p.xmax * p.xmax) as u64;
    if need > stored {
        return domain(format!("X = {} needs a(n) up to {need}, the form stores {stored}", p.xmax));
    }
    let mut series = sum_series(source.as_ref(), p.h, &xs, p.one_sided)?;
    let rc = residual_constant(&form, p.h, 1.0)?;
    let main_term_free = p.c.map_or(rc.reason.is_some(), |c| c == 0.0);
    let mut rep = SuiteReport::new(
        format!("shifted-sum-h{}", p.h),
        if main_term_free { "sharp-cutoff sum without main term" } else { "sharp-cutoff sum with main term" },
    );
    if let Some(r) = &rc.reason {
        rep.notes.push(format!("residual constant vanishes: {r}"));
    }
    rep.metric("points", xs.len() as f64);
    rep.metric("max_imag", series.max_imag);
    if main_term_free {
        let e = series.fit(0.0)?;
        rep.metric("fitted_exponent", e);
        rep.check(Check::at_least("grid points", xs.len() as f64, MIN_FIT_ROWS as f64));
        rep.check(Check::at_most("fitted exponent of |S(X)|", e, p.exponent_max));
    } else {
        let c = p.c.unwrap_or_else(|| series.linear_constant());
        // Exponent of the remainder, reported only.
        if let Ok(e) = series.fit(c) {
            rep.metric("remainder_exponent", e);
        }
        let top = top_dyadic_ratios(&series)?;
        let plateau = top.1;
        let variation = (top.1 - top.0).abs() / top.1.abs();
        rep.metric("c_fit", c);
        rep.metric("S/X_top", plateau);
        rep.metric("S/X_next", top.0);
        rep.check(Check::at_most("relative change of S(X)/X over the top two dyadic points", variation, p.plateau_tol));
        rep.check(Check::at_least("|S(X)/X| at the top point", plateau.abs(), 1e-6));
        let y_max = p.sym2_ymax.min(if stored == u64::MAX { u64::MAX } else { crate::arith::isqrt(stored) });
        let ys: Vec<u64> = geometric_grid(64.0, y_max as f64, 1)?.into_iter().map(|y| y as u64).collect();
        if ys.len() >= 2 {
            let est = sym2_residue_estimate(source.as_ref(), &ys)?;
            let predicted = residual_constant(&form, p.h, est.residue)?.value;
            rep.metric("sym2_residue", est.residue);
            rep.metric("sym2_fit_rms", est.quality);
            rep.metric("residual_constant", predicted);
            rep.check(
                Check::at_most("|residual constant/(S/X) − 1|", (predicted / plateau - 1.0).abs(), 0.25)
                    .informational(),
            );
        }
    }
    rep.tables.push(series_table(&series, 4));
    Ok(rep)
}

/// `S(X)/X` at the two largest grid points that are powers of two.
fn top_dyadic_ratios(s: &ShiftedSumSeries) -> Result<(f64, f64)> {
    let dy: Vec<(f64, f64)> = s.rows.iter().copied().filter(|&(x, _)| x > 0.0 && x.log2().fract() == 0.0).collect();
    if dy.len() < 2 {
        return domain("need two dyadic grid points for the plateau check");
    }
    let (a, b) = (dy[dy.len() - 2], dy[dy.len() - 1]);
    Ok((a.1 / a.0, b.1 / b.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitParams {
    pub input: PathBuf,
    pub c: Option<f64>,
    /// Fit `c` by least squares instead of taking it as 0.
    pub linear: bool,
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams { input: PathBuf::from("shifted-sum.csv"), c: None, linear: false }
    }
}

/// Exponent of `|S(X) − cX|` from a saved shifted-sum table.
pub fn fit(p: &FitParams) -> Result<SuiteReport> {
    let file = std::fs::File::open(&p.input)?;
    let mut s = ShiftedSumSeries::read_csv(std::io::BufReader::new(file))?;
    let c = match (p.c, p.linear) {
        (Some(c), _) => c,
        (None, true) => s.linear_constant(),
        (None, false) => 0.0,
    };
    let e = s.fit(c)?;
    let mut rep = SuiteReport::new("fit", "power-law fit of the remainder");
    rep.metric("c", c);
    rep.metric("exponent", e);
    rep.metric("points", s.rows.len() as f64);
    rep.tables.push(series_table(&s, 4));
    Ok(rep)
}
