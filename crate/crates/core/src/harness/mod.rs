//! Seeded verification suites, experiment orchestration and report output.
//!
//! Every suite returns a [`SuiteReport`]; [`run`] dispatches an
//! [`ExperimentConfig`] to the matching suite and writes its tables.

mod analytic;
mod config;
mod experiment;
mod expsum;
mod report;

pub use analytic::{
    bessel_check, lower_bound, mellin_barnes_check, norm_identity, oscillatory_map, remark_check, uniform_bound,
    verify_theta, BesselCheckParams, LowerBoundParams, MellinParams, NormParams, OscillatoryParams, RemarkParams,
    ThetaParams, UniformParams,
};
pub use config::{run, Command, ExperimentConfig, RunOutcome, SpecfunCheckParams, SpecfunPart};
pub use experiment::{fit, shifted_sum, FitParams, FormSource, GridKind, ShiftedSumParams};
pub use expsum::{
    expsum_eval, expsum_sweep, verify_mult, ExpsumEvalParams, SumKind, SweepFamily, SweepParams, VerifyMultParams,
};
pub use report::{Check, Relation, SuiteReport, Table};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::DirichletCharacter;
use crate::error::{domain, Error, Result};

/// Generator for trial `index`: seeded by `seed`, on stream `index`, so a
/// trial's draws do not depend on which worker runs it.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Worker count from `THETA_SHIFT_THREADS`, if set.
pub fn thread_cap() -> Option<usize> {
    std::env::var("THETA_SHIFT_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs `f` on a pool capped by `THETA_SHIFT_THREADS`, or on the global pool.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match thread_cap() {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// `lo·2^{i/per_octave}` up to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, per_octave: u32) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) || per_octave == 0 {
        return domain(format!("bad grid [{lo}, {hi}] with {per_octave} points per octave"));
    }
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        let x = lo * 2f64.powf(i as f64 / per_octave as f64);
        if x > hi * (1.0 + 1e-12) {
            break;
        }
        out.push(x);
        i += 1;
    }
    Ok(out)
}

/// `n + 1` points from `lo` to `hi`, evenly spaced in `log`.
pub(crate) fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..=n).map(|i| (a + (b - a) * i as f64 / n as f64).exp()).collect()
}

/// `n + 1` evenly spaced points from `lo` to `hi`.
pub(crate) fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

/// Parses `trivial[/N]`, `kron:D[/N]` (modulus `|D|` by default) or
/// `prime:p:j` (the character sending a fixed primitive root to `e(j/(p−1))`).
pub fn parse_character(s: &str) -> Result<DirichletCharacter> {
    let bad = || Error::Domain(format!("cannot parse character `{s}`"));
    let (body, modulus) = match s.split_once('/') {
        Some((b, m)) => (b, Some(m.parse::<u64>().map_err(|_| bad())?)),
        None => (s, None),
    };
    let parts: Vec<&str> = body.split(':').collect();
    match parts.as_slice() {
        ["trivial"] => Ok(DirichletCharacter::trivial(modulus.unwrap_or(1))),
        ["kron", d] => {
            let d: i64 = d.parse().map_err(|_| bad())?;
            DirichletCharacter::from_kronecker(d, modulus.unwrap_or(d.unsigned_abs()))
        }
        ["prime", p, j] => {
            let p: u64 = p.parse().map_err(|_| bad())?;
            let j: u64 = j.parse().map_err(|_| bad())?;
            let chi = DirichletCharacter::prime_character(p, j)?;
            match modulus {
                Some(m) => chi.induce(m),
                None => Ok(chi),
            }
        }
        _ => Err(bad()),
    }
}
