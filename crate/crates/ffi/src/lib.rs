//! C interface to `theta-shift`.
//!
//! Every fallible function returns a [`TsStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and can
//! be read with [`ts_last_error_message`]. Objects are opaque handles released
//! with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use num_complex::Complex64;
use theta_shift::arith::DirichletCharacter;
use theta_shift::expsums;
use theta_shift::harness::{self, ExperimentConfig};
use theta_shift::modforms::{self, CoefficientSource, CuspForm, DihedralEta7, ShiftedSumSeries};
use theta_shift::specfun::{self, QuadratureSpec, WhittakerParams};
use theta_shift::Error;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    OutOfRange = 4,
    Numerical = 5,
    Parse = 6,
    Io = 7,
    /// A hard check of an experiment failed; the run itself completed.
    CheckFailed = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TsComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for TsComplex {
    fn from(z: Complex64) -> Self {
        TsComplex { re: z.re, im: z.im }
    }
}

/// A Dirichlet character.
pub struct TsCharacter(DirichletCharacter);

enum FormInner {
    Stored(CuspForm),
    Eta7(CuspForm),
}

/// A cusp form: stored coefficients, or the built-in `η(z)³η(7z)³`.
pub struct TsForm(FormInner);

impl TsForm {
    fn form(&self) -> &CuspForm {
        match &self.0 {
            FormInner::Stored(f) | FormInner::Eta7(f) => f,
        }
    }

    fn source(&self) -> &dyn CoefficientSource {
        match &self.0 {
            FormInner::Stored(f) => f,
            FormInner::Eta7(_) => &DihedralEta7,
        }
    }
}

/// A sharp-cutoff series `(X, S(X))`.
pub struct TsSeries(ShiftedSumSeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> TsStatus {
    match e {
        Error::Domain(_) => TsStatus::Domain,
        Error::OutOfRange { .. } => TsStatus::OutOfRange,
        Error::Numerical(_) => TsStatus::Numerical,
        Error::Parse { .. } => TsStatus::Parse,
        Error::Io(_) | Error::Csv(_) => TsStatus::Io,
    }
}

struct Fail(TsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error or panic, and converts it into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TsStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            TsStatus::Panic
        }
    }
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail(TsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, Fail> {
    h.as_ref().ok_or_else(|| null(what))
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ts_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ts_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `trivial[/N]`, `kron:D[/N]` or `prime:p:j[/N]`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_character_parse(spec: *const c_char, out: *mut *mut TsCharacter) -> TsStatus {
    guard(|| {
        let chi = harness::parse_character(str_arg(spec, "spec")?)?;
        put(out, Box::into_raw(Box::new(TsCharacter(chi))), "out")
    })
}

/// The Kronecker character `(disc/·)` on `modulus`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_character_kronecker(disc: i64, modulus: u64, out: *mut *mut TsCharacter) -> TsStatus {
    guard(|| {
        let chi = DirichletCharacter::from_kronecker(disc, modulus)?;
        put(out, Box::into_raw(Box::new(TsCharacter(chi))), "out")
    })
}

/// # Safety
/// `chi` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ts_character_free(chi: *mut TsCharacter) {
    if !chi.is_null() {
        drop(Box::from_raw(chi));
    }
}

/// Modulus of `chi`, or 0 for NULL.
///
/// # Safety
/// `chi` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_character_modulus(chi: *const TsCharacter) -> u64 {
    chi.as_ref().map_or(0, |c| c.0.modulus())
}

/// Conductor of `chi`, or 0 for NULL.
///
/// # Safety
/// `chi` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_character_conductor(chi: *const TsCharacter) -> u64 {
    chi.as_ref().map_or(0, |c| c.0.conductor())
}

/// `χ(d)`.
///
/// # Safety
/// `chi` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_character_value(chi: *const TsCharacter, d: i64, out: *mut TsComplex) -> TsStatus {
    guard(|| put(out, handle(chi, "chi")?.0.value(d).into(), "out"))
}

/// `K_ℓ(m,n;c;χ)`, directly or through the multiplicativity relations.
/// `out_bound` may be NULL.
///
/// # Safety
/// `chi` must be a live handle, `out` valid, `out_bound` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn ts_kloosterman(
    m: i64,
    n: i64,
    c: u64,
    ell: i64,
    chi: *const TsCharacter,
    factored: bool,
    out: *mut TsComplex,
    out_bound: *mut f64,
) -> TsStatus {
    guard(|| {
        let chi = &handle(chi, "chi")?.0;
        let r = if factored {
            expsums::kloosterman_factored(m, n, c, ell, chi)?
        } else {
            expsums::kloosterman_naive(m, n, c, ell, chi)?
        };
        if !out_bound.is_null() {
            out_bound.write(r.bound);
        }
        put(out, r.value.into(), "out")
    })
}

/// `S(m,n;c;χ)`. `out_bound` may be NULL.
///
/// # Safety
/// As [`ts_kloosterman`].
#[no_mangle]
pub unsafe extern "C" fn ts_salie(
    m: i64,
    n: i64,
    c: u64,
    chi: *const TsCharacter,
    factored: bool,
    out: *mut TsComplex,
    out_bound: *mut f64,
) -> TsStatus {
    guard(|| {
        let chi = &handle(chi, "chi")?.0;
        let r = if factored { expsums::salie_factored(m, n, c, chi)? } else { expsums::salie_naive(m, n, c, chi)? };
        if !out_bound.is_null() {
            out_bound.write(r.bound);
        }
        put(out, r.value.into(), "out")
    })
}

/// `W_{η,μ}(y)`; `mu` must be real or purely imaginary. `out_degraded` may be
/// NULL.
///
/// # Safety
/// `out` valid, `out_degraded` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn ts_whittaker_w(
    eta: f64,
    mu: TsComplex,
    y: f64,
    out: *mut f64,
    out_degraded: *mut bool,
) -> TsStatus {
    guard(|| {
        let p = WhittakerParams::new(eta, Complex64::new(mu.re, mu.im), y)?;
        let w = specfun::whittaker_w(p, &spec())?;
        if !out_degraded.is_null() {
            out_degraded.write(w.degraded);
        }
        put(out, w.value, "out")
    })
}

/// `J_{2it}(q)`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ts_bessel_j_imag_order(t: f64, q: f64, out: *mut TsComplex) -> TsStatus {
    guard(|| put(out, specfun::bessel_j_imag_order(t, q)?.into(), "out"))
}

/// Residual of the theta transformation law at `γ = [[a, b], [c, d]]`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ts_theta_residual(a: i64, b: i64, c: i64, d: i64, z: TsComplex, out: *mut f64) -> TsStatus {
    guard(|| {
        let r = modforms::theta_transform_residual([[a, b], [c, d]], Complex64::new(z.re, z.im), 0)?;
        put(out, r, "out")
    })
}

/// Level-576 inner product by quadrature (`k ≥ 5`, `k ≡ 1 mod 4`).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ts_remark_inner_product(k: i64, out: *mut f64) -> TsStatus {
    guard(|| put(out, modforms::remark_inner_product(k, &spec())?, "out"))
}

/// Loads a form file, lifted to `level` (0 for `lcm(4, N)`).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ts_form_load(path: *const c_char, level: u64, out: *mut *mut TsForm) -> TsStatus {
    guard(|| {
        let path = PathBuf::from(str_arg(path, "path")?);
        let f = modforms::load_form_lifted(path, (level != 0).then_some(level))?;
        put(out, Box::into_raw(Box::new(TsForm(FormInner::Stored(f)))), "out")
    })
}

/// `η(z)³η(7z)³` at `level` (a multiple of 28). Shifted sums use the prime
/// sieve, so any `X` is available.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ts_form_eta7(level: u64, out: *mut *mut TsForm) -> TsStatus {
    guard(|| {
        let f = DihedralEta7.form(64, level)?;
        put(out, Box::into_raw(Box::new(TsForm(FormInner::Eta7(f)))), "out")
    })
}

/// # Safety
/// `form` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_form_free(form: *mut TsForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Level of `form`, or 0 for NULL.
///
/// # Safety
/// `form` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_form_level(form: *const TsForm) -> u64 {
    form.as_ref().map_or(0, |f| f.form().level)
}

/// `a(n)`.
///
/// # Safety
/// `form` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ts_form_coefficient(form: *const TsForm, n: u64, out: *mut TsComplex) -> TsStatus {
    guard(|| put(out, handle(form, "form")?.form().a(n)?.into(), "out"))
}

/// Residual constant `c_{f,h}` for symmetric-square residue `r`. Writes 0
/// when it vanishes.
///
/// # Safety
/// `form` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ts_residual_constant(form: *const TsForm, h: u64, r: f64, out: *mut f64) -> TsStatus {
    guard(|| put(out, modforms::residual_constant(handle(form, "form")?.form(), h, r)?.value, "out"))
}

/// `S(X)` on the strictly increasing `grid` of `len` points.
///
/// # Safety
/// `form` live, `grid` readable for `len` values, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ts_shifted_sum(
    form: *const TsForm,
    h: u64,
    grid: *const f64,
    len: usize,
    one_sided: bool,
    out: *mut *mut TsSeries,
) -> TsStatus {
    guard(|| {
        let form = handle(form, "form")?;
        if grid.is_null() {
            return Err(null("grid"));
        }
        let xs = std::slice::from_raw_parts(grid, len);
        let s = modforms::shifted_sum(form.source(), h, xs, one_sided)?;
        put(out, Box::into_raw(Box::new(TsSeries(s))), "out")
    })
}

/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_series_free(series: *mut TsSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Number of rows, or 0 for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_series_len(series: *const TsSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.rows.len())
}

/// Row `i` as `(X, S(X))`.
///
/// # Safety
/// `series` live, `x` and `s` valid.
#[no_mangle]
pub unsafe extern "C" fn ts_series_row(series: *const TsSeries, i: usize, x: *mut f64, s: *mut f64) -> TsStatus {
    guard(|| {
        let rows = &handle(series, "series")?.0.rows;
        let &(xv, sv) = rows.get(i).ok_or_else(|| Fail(TsStatus::OutOfRange, format!("row {i} of {}", rows.len())))?;
        put(x, xv, "x")?;
        put(s, sv, "s")
    })
}

/// Least-squares exponent of `|S(X) − cX|`.
///
/// # Safety
/// `series` live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ts_series_fit(series: *const TsSeries, c: f64, out: *mut f64) -> TsStatus {
    guard(|| put(out, modforms::fit_exponent(&handle(series, "series")?.0, c)?, "out"))
}

/// Runs an experiment described by TOML text, writing tables to `out_dir`
/// (NULL: the directory in the config, if any). Returns
/// [`TsStatus::CheckFailed`] when a hard check fails.
///
/// # Safety
/// `toml` must be a NUL-terminated string, `out_dir` NULL or one.
#[no_mangle]
pub unsafe extern "C" fn ts_run_config(toml: *const c_char, out_dir: *const c_char) -> TsStatus {
    let mut failed = false;
    let st = guard(|| {
        let mut cfg = ExperimentConfig::from_toml(str_arg(toml, "toml")?)?;
        if !out_dir.is_null() {
            cfg.out = Some(PathBuf::from(str_arg(out_dir, "out_dir")?));
        }
        let outcome = harness::run(&cfg)?;
        if !outcome.passed() {
            failed = true;
            let s: String = outcome.reports.iter().map(|r| r.summary()).collect();
            set_error(s);
        }
        Ok(())
    });
    if st == TsStatus::Ok && failed {
        TsStatus::CheckFailed
    } else {
        st
    }
}
