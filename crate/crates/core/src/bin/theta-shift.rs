use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;

use theta_shift::harness::{
    self, Command, ExperimentConfig, ExpsumEvalParams, FitParams, FormSource, GridKind, OscillatoryParams,
    RemarkParams, ShiftedSumParams, SpecfunCheckParams, SpecfunPart, SumKind, SweepFamily, SweepParams, ThetaParams,
    VerifyMultParams,
};
use theta_shift::modforms::DihedralEta7;
use theta_shift::specfun::{self, QuadratureSpec, WhittakerParams};

#[derive(Parser)]
#[command(name = "theta-shift", version, about = "Exponential sums, Kuznetsov kernels and shifted-sum experiments")]
struct Cli {
    /// Directory for CSV tables and summaries.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    max_subdivisions: Option<usize>,
    #[arg(long, global = true)]
    truncation_decades: Option<u32>,
}

impl TolArgs {
    fn apply(&self, mut s: QuadratureSpec) -> QuadratureSpec {
        if let Some(v) = self.abs_tol {
            s.abs_tol = v;
        }
        if let Some(v) = self.rel_tol {
            s.rel_tol = v;
        }
        if let Some(v) = self.max_subdivisions {
            s.max_subdivisions = v;
        }
        if let Some(v) = self.truncation_decades {
            s.truncation_decades = v;
        }
        s
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Kloosterman and Salié sums.
    #[command(subcommand)]
    Expsum(ExpsumCmd),
    /// Point evaluations and verification suites for the special functions.
    #[command(subcommand)]
    Specfun(SpecfunCmd),
    /// Factored against naive sums on random tuples.
    VerifyMult(MultArgs),
    /// Theta multiplier on random elements of Γ₀(4).
    VerifyTheta {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 50)]
        bound: i64,
    },
    /// Sup of |G_κ(ω,T)| against its ω-scaling, at two grid densities.
    OscillatoryMap {
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, -0.5])]
        kappa: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        omega_points: usize,
        #[arg(long, default_value_t = 50.0)]
        t_max: f64,
    },
    /// S(X) = Σ A(n²+h) over n² + h ≤ X².
    ShiftedSum {
        /// Form file, or `eta7` for η(z)³η(7z)³.
        #[arg(long, default_value = "eta7")]
        form: String,
        #[arg(long, default_value_t = 1)]
        h: u64,
        #[arg(long, default_value_t = 1024.0)]
        xmin: f64,
        #[arg(long, default_value_t = 131072.0)]
        xmax: f64,
        #[arg(long, value_enum, default_value_t = GridKind::Dyadic)]
        grid: GridKind,
        #[arg(long)]
        one_sided: bool,
        #[arg(long)]
        level: Option<u64>,
        /// Main-term constant (default: from the residual constant).
        #[arg(long)]
        c: Option<f64>,
    },
    /// Exponent of |S(X) − cX| from a shifted-sum CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        c: Option<f64>,
        /// Fit c by least squares.
        #[arg(long)]
        linear: bool,
    },
    /// Inner-product quadrature against the closed form.
    RemarkCheck {
        #[arg(long, value_delimiter = ',', default_values_t = [5])]
        k: Vec<i64>,
    },
    /// Write η(z)³η(7z)³ as a form file.
    Form {
        #[arg(long, default_value_t = 1 << 20)]
        terms: usize,
        #[arg(long, default_value_t = 28)]
        level: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run an experiment described by a TOML file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct MultArgs {
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 10_000)]
    max_c: u64,
}

#[derive(Subcommand)]
enum ExpsumCmd {
    /// One sum, naive and factored.
    Eval {
        #[arg(long, value_enum, default_value_t = KindArg::Kloosterman)]
        kind: KindArg,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        c: u64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        ell: i64,
        /// `trivial[/N]`, `kron:D[/N]` or `prime:p:j`.
        #[arg(long = "char", default_value = "trivial/4")]
        character: String,
    },
    /// Bound sweeps.
    Sweep {
        #[arg(long, value_enum, default_value_t = FamilyArg::Weil)]
        family: FamilyArg,
        #[arg(long)]
        c_max: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long, default_value_t = 4096)]
        random_c_max: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [1, 3])]
        ell: Vec<i64>,
    },
    VerifyMult(MultArgs),
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum KindArg {
    Kloosterman,
    Salie,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FamilyArg {
    Weil,
    Salie,
    TwoPower,
}

#[derive(Subcommand)]
enum SpecfunCmd {
    /// W_{η,μ}(y); μ = it with --t, real μ with --mu.
    Whittaker {
        #[arg(long, allow_hyphen_values = true)]
        eta: f64,
        #[arg(long, conflicts_with = "mu")]
        t: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        y: f64,
    },
    /// J_{2it}(q).
    Bessel {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        q: f64,
    },
    /// I_κ(ω,t), and G_κ(ω,T) by both routes when --big-t is given.
    Oscillatory {
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long)]
        big_t: Option<f64>,
    },
    /// G(n₁,n₂,m) by the contour integral and by direct quadrature.
    MellinBarnes {
        #[arg(long)]
        n1: i64,
        #[arg(long, allow_hyphen_values = true)]
        n2: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 0.7)]
        re_w: f64,
    },
    /// Verification suites.
    Check {
        #[arg(long, value_enum, value_delimiter = ',')]
        part: Vec<SpecfunPart>,
    },
}

fn mult(a: &MultArgs) -> Command {
    Command::VerifyMult(VerifyMultParams { trials: a.trials, max_c: a.max_c })
}

/// Point evaluations print directly; everything else becomes a config.
fn to_command(cmd: Cmd, spec: &QuadratureSpec) -> theta_shift::Result<Option<Command>> {
    Ok(Some(match cmd {
        Cmd::Expsum(ExpsumCmd::Eval { kind, m, n, c, ell, character }) => Command::ExpsumEval(ExpsumEvalParams {
            kind: match kind {
                KindArg::Kloosterman => SumKind::Kloosterman,
                KindArg::Salie => SumKind::Salie,
            },
            m,
            n,
            c,
            ell,
            character,
        }),
        Cmd::Expsum(ExpsumCmd::Sweep { family, c_max, random, random_c_max, ell }) => {
            Command::ExpsumSweep(SweepParams {
                family: match family {
                    FamilyArg::Weil => SweepFamily::Weil,
                    FamilyArg::Salie => SweepFamily::Salie,
                    FamilyArg::TwoPower => SweepFamily::TwoPower,
                },
                c_max,
                random,
                random_c_max,
                ells: ell,
            })
        }
        Cmd::Expsum(ExpsumCmd::VerifyMult(a)) | Cmd::VerifyMult(a) => mult(&a),
        Cmd::VerifyTheta { trials, bound } => Command::VerifyTheta(ThetaParams { trials, bound, ..Default::default() }),
        Cmd::OscillatoryMap { kappa, omega_points, t_max } => {
            Command::OscillatoryMap(OscillatoryParams { kappas: kappa, omega_points, t_max, ..Default::default() })
        }
        Cmd::ShiftedSum { form, h, xmin, xmax, grid, one_sided, level, c } => Command::ShiftedSum(ShiftedSumParams {
            form: form.parse::<FormSource>().expect("infallible"),
            h,
            xmin,
            xmax,
            grid,
            one_sided,
            level,
            c,
            ..Default::default()
        }),
        Cmd::Fit { input, c, linear } => Command::Fit(FitParams { input, c, linear }),
        Cmd::RemarkCheck { k } => Command::RemarkCheck(RemarkParams { ks: k, ..Default::default() }),
        Cmd::Specfun(SpecfunCmd::Check { part }) => {
            let mut p = SpecfunCheckParams::default();
            if !part.is_empty() {
                p.parts = part;
            }
            Command::SpecfunCheck(p)
        }
        Cmd::Specfun(s) => {
            eval_point(s, spec)?;
            return Ok(None);
        }
        Cmd::Form { terms, level, output } => {
            let f = DihedralEta7.form(terms, level)?;
            std::fs::write(&output, f.to_text())?;
            println!("wrote {}", output.display());
            return Ok(None);
        }
        Cmd::Run { .. } => unreachable!("handled by the caller"),
    }))
}

fn eval_point(cmd: SpecfunCmd, spec: &QuadratureSpec) -> theta_shift::Result<()> {
    match cmd {
        SpecfunCmd::Whittaker { eta, t, mu, y } => {
            let mu = match (t, mu) {
                (Some(t), _) => Complex64::new(0.0, t),
                (None, Some(m)) => Complex64::new(m, 0.0),
                (None, None) => Complex64::new(0.0, 0.0),
            };
            let w = specfun::whittaker_w(WhittakerParams::new(eta, mu, y)?, spec)?;
            println!("W = {:.15e}{}", w.value, if w.degraded { " (accuracy degraded)" } else { "" });
        }
        SpecfunCmd::Bessel { t, q } => {
            let j = specfun::bessel_j_imag_order(t, q)?;
            println!("J = {:.15e} {:+.15e}i", j.re, j.im);
        }
        SpecfunCmd::Oscillatory { kappa, omega, t, big_t } => {
            println!("I = {:.15e}", specfun::i_kappa(kappa, omega, t, spec)?);
            if let Some(tt) = big_t {
                println!("G (t-quadrature) = {:.12e}", specfun::g_kappa(kappa, omega, tt, spec)?);
                println!("G (xi-form)      = {:.12e}", specfun::g_kappa_xi(kappa, omega, tt, spec)?);
            }
        }
        SpecfunCmd::MellinBarnes { n1, n2, m, k, t, re_w } => {
            let g = specfun::mellin_barnes_g(n1, n2, m, k, Complex64::new(t, 0.0), re_w, spec)?;
            let d = specfun::mellin_barnes_direct(n1, n2, m, k, t, spec)?;
            println!("G (contour) = {:.15e} {:+.3e}i", g.re, g.im);
            println!("G (direct)  = {:.15e}", d);
        }
        SpecfunCmd::Check { .. } => unreachable!(),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> theta_shift::Result<bool> {
        let cfg = match cli.cmd {
            Cmd::Run { config } => {
                let mut cfg = ExperimentConfig::load(config)?;
                if let Some(s) = cli.seed {
                    cfg.seed = s;
                }
                cfg.tolerances = cli.tol.apply(cfg.tolerances);
                if cli.out.is_some() {
                    cfg.out = cli.out.clone();
                }
                cfg
            }
            cmd => {
                let spec = cli.tol.apply(QuadratureSpec::default());
                let Some(command) = to_command(cmd, &spec)? else { return Ok(true) };
                let mut cfg = ExperimentConfig::new(command);
                if let Some(s) = cli.seed {
                    cfg.seed = s;
                }
                cfg.tolerances = spec;
                cfg.out = Some(cli.out.clone().unwrap_or_else(|| PathBuf::from("results")));
                cfg
            }
        };
        let outcome = harness::run(&cfg)?;
        for r in &outcome.reports {
            print!("{}", r.summary());
        }
        for f in &outcome.files {
            println!("wrote {}", f.display());
        }
        Ok(outcome.passed())
    })();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
