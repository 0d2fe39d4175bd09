//! Structured experiment configuration and the dispatcher.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::analytic::*;
use super::experiment::{fit, shifted_sum, FitParams, ShiftedSumParams};
use super::expsum::*;
use super::report::SuiteReport;
use super::with_thread_cap;
use crate::error::{Error, Result};
use crate::specfun::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SpecfunPart {
    NormIdentity,
    UniformBound,
    LowerBound,
    MellinBarnes,
    Bessel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpecfunCheckParams {
    pub parts: Vec<SpecfunPart>,
    pub norm: NormParams,
    pub uniform: UniformParams,
    pub lower: LowerBoundParams,
    pub mellin: MellinParams,
    pub bessel: BesselCheckParams,
}

impl Default for SpecfunCheckParams {
    fn default() -> Self {
        SpecfunCheckParams {
            parts: vec![
                SpecfunPart::NormIdentity,
                SpecfunPart::UniformBound,
                SpecfunPart::LowerBound,
                SpecfunPart::MellinBarnes,
                SpecfunPart::Bessel,
            ],
            norm: NormParams::default(),
            uniform: UniformParams::default(),
            lower: LowerBoundParams::default(),
            mellin: MellinParams::default(),
            bessel: BesselCheckParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    ExpsumEval(ExpsumEvalParams),
    ExpsumSweep(SweepParams),
    VerifyMult(VerifyMultParams),
    VerifyTheta(ThetaParams),
    SpecfunCheck(SpecfunCheckParams),
    OscillatoryMap(OscillatoryParams),
    RemarkCheck(RemarkParams),
    ShiftedSum(ShiftedSumParams),
    Fit(FitParams),
}

fn default_seed() -> u64 {
    7
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: QuadratureSpec,
    /// Output directory; nothing is written when absent.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig { command, seed: default_seed(), tolerances: QuadratureSpec::default(), out: None }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map_or(0, |s| text[..s.start].lines().count().max(1)),
            msg: e.message().to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub reports: Vec<SuiteReport>,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(SuiteReport::passed)
    }
}

fn timed(f: impl FnOnce() -> Result<SuiteReport>) -> Result<SuiteReport> {
    let t0 = Instant::now();
    let mut r = f()?;
    r.elapsed = t0.elapsed();
    Ok(r)
}

fn dispatch(cfg: &ExperimentConfig) -> Result<Vec<SuiteReport>> {
    let spec = &cfg.tolerances;
    spec.validate()?;
    let seed = cfg.seed;
    let one = |r: Result<SuiteReport>| r.map(|r| vec![r]);
    match &cfg.command {
        Command::ExpsumEval(p) => one(timed(|| expsum_eval(p))),
        Command::ExpsumSweep(p) => one(timed(|| expsum_sweep(p, seed))),
        Command::VerifyMult(p) => one(timed(|| verify_mult(p, seed))),
        Command::VerifyTheta(p) => one(timed(|| verify_theta(p, seed))),
        Command::OscillatoryMap(p) => one(timed(|| oscillatory_map(p, spec))),
        Command::RemarkCheck(p) => one(timed(|| remark_check(p, spec))),
        Command::ShiftedSum(p) => one(timed(|| shifted_sum(p))),
        Command::Fit(p) => one(timed(|| fit(p))),
        Command::SpecfunCheck(p) => p
            .parts
            .iter()
            .map(|part| {
                timed(|| match part {
                    SpecfunPart::NormIdentity => norm_identity(&p.norm, spec),
                    SpecfunPart::UniformBound => uniform_bound(&p.uniform),
                    SpecfunPart::LowerBound => lower_bound(&p.lower, spec),
                    SpecfunPart::MellinBarnes => mellin_barnes_check(&p.mellin, spec),
                    SpecfunPart::Bessel => bessel_check(&p.bessel, seed),
                })
            })
            .collect(),
    }
}

/// Runs the configured suite(s) and writes their tables to `out`.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let reports = with_thread_cap(|| dispatch(cfg))??;
    let mut files = Vec::new();
    if let Some(dir) = &cfg.out {
        for r in &reports {
            files.extend(r.write_to(dir)?);
        }
    }
    Ok(RunOutcome { reports, files })
}
