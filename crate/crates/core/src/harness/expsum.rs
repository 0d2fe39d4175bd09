//! Exponential-sum suites: multiplicativity, the Weil-type sweep, the Salié
//! prime-power sweep and the 2-power Kloosterman sweep.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{sci, Check, SuiteReport, Table};
use super::{parse_character, trial_rng};
use crate::arith::{self, phi, DirichletCharacter};
use crate::error::{domain, Result};
use crate::expsums::{
    kloosterman_abs_all_n, kloosterman_factored, kloosterman_naive, salie_abs_all_n, salie_bound, salie_factored,
    salie_naive, two_power_bound, weil_bound,
};

const EXPSUM_COLUMNS: [&str; 9] = ["m", "n", "c", "ell", "char", "re", "im", "bound", "ratio"];

/// Characters for random Kloosterman tuples (`lcm(4, N) | c`).
const KLOOSTERMAN_POOL: [&str; 9] =
    ["trivial/4", "kron:-4", "kron:8", "kron:-8", "kron:12", "kron:-3", "kron:5", "prime:5:1", "prime:7:1"];
/// Characters for random Salié tuples (`N | c`, `v₂(c) ≠ 1`).
const SALIE_POOL: [&str; 6] = ["trivial", "kron:-3", "kron:5", "prime:5:1", "prime:7:2", "kron:-4"];
const ELLS: [i64; 5] = [-3, -1, 1, 3, 5];

fn pool(names: &[&'static str]) -> Result<Vec<(&'static str, DirichletCharacter)>> {
    names.iter().map(|&n| Ok((n, parse_character(n)?))).collect()
}

fn lcm(a: u64, b: u64) -> u64 {
    a / arith::gcd(a as i64, b as i64) * b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumKind {
    Kloosterman,
    Salie,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyMultParams {
    pub trials: usize,
    pub max_c: u64,
}

impl Default for VerifyMultParams {
    fn default() -> Self {
        VerifyMultParams { trials: 200, max_c: 10_000 }
    }
}

struct MultTrial {
    kind: SumKind,
    m: i64,
    n: i64,
    c: u64,
    ell: i64,
    chi: &'static str,
    naive: num_complex::Complex64,
    factored: num_complex::Complex64,
}

/// Factored against naive evaluation on seeded random admissible tuples;
/// even trials are Kloosterman sums, odd trials Salié sums.
pub fn verify_mult(p: &VerifyMultParams, seed: u64) -> Result<SuiteReport> {
    if p.max_c < 28 {
        return domain(format!("max_c = {} must be at least 28", p.max_c));
    }
    let kl = pool(&KLOOSTERMAN_POOL)?;
    let sa = pool(&SALIE_POOL)?;
    let trials: Vec<MultTrial> = (0..p.trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            if i % 2 == 0 {
                let (name, chi) = &kl[rng.random_range(0..kl.len())];
                let q = lcm(4, chi.modulus());
                let c = q * rng.random_range(1..=p.max_c / q);
                let ci = c as i64;
                let (m, n) = (rng.random_range(-ci..=ci), rng.random_range(-ci..=ci));
                let ell = ELLS[rng.random_range(0..ELLS.len())];
                Ok(MultTrial {
                    kind: SumKind::Kloosterman,
                    m,
                    n,
                    c,
                    ell,
                    chi: name,
                    naive: kloosterman_naive(m, n, c, ell, chi)?.value,
                    factored: kloosterman_factored(m, n, c, ell, chi)?.value,
                })
            } else {
                let (name, chi) = &sa[rng.random_range(0..sa.len())];
                let q = chi.modulus();
                let c = loop {
                    let c = q * rng.random_range(1..=p.max_c / q);
                    if arith::v2(c) != 1 {
                        break c;
                    }
                };
                let ci = c as i64;
                let (m, n) = (rng.random_range(-ci..=ci), rng.random_range(-ci..=ci));
                Ok(MultTrial {
                    kind: SumKind::Salie,
                    m,
                    n,
                    c,
                    ell: 0,
                    chi: name,
                    naive: salie_naive(m, n, c, chi)?.value,
                    factored: salie_factored(m, n, c, chi)?.value,
                })
            }
        })
        .collect::<Result<_>>()?;

    let mut rep = SuiteReport::new("verify-mult", "twisted Kloosterman and Salié multiplicativity");
    let mut t = Table::new(
        "verify-mult",
        &[
            "kind",
            "m",
            "n",
            "c",
            "ell",
            "char",
            "naive_re",
            "naive_im",
            "factored_re",
            "factored_im",
            "deviation",
            "allowed",
        ],
    );
    let (mut worst_dev, mut worst_rel) = (0.0f64, 0.0f64);
    for tr in &trials {
        let dev = (tr.factored - tr.naive).norm() / tr.naive.norm().max(1.0);
        let allowed = 1e-8 * phi(tr.c) as f64;
        worst_dev = worst_dev.max(dev);
        worst_rel = worst_rel.max(dev / allowed);
        t.push(vec![
            match tr.kind {
                SumKind::Kloosterman => "kloosterman".into(),
                SumKind::Salie => "salie".into(),
            },
            tr.m.to_string(),
            tr.n.to_string(),
            tr.c.to_string(),
            tr.ell.to_string(),
            tr.chi.to_string(),
            sci(tr.naive.re),
            sci(tr.naive.im),
            sci(tr.factored.re),
            sci(tr.factored.im),
            sci(dev),
            sci(allowed),
        ]);
    }
    rep.metric("trials", trials.len() as f64);
    rep.metric("max_deviation", worst_dev);
    rep.check(Check::at_most("max deviation / (1e-8·φ(c))", worst_rel, 1.0));
    rep.tables.push(t);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepFamily {
    Weil,
    Salie,
    TwoPower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepParams {
    pub family: SweepFamily,
    /// Exhaustive range; defaults to 128 (Weil), 5000 (Salié), 4096 (2-power).
    pub c_max: Option<u64>,
    /// Random Weil tuples on top of the exhaustive range.
    pub random: usize,
    pub random_c_max: u64,
    pub ells: Vec<i64>,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams { family: SweepFamily::Weil, c_max: None, random: 1000, random_c_max: 4096, ells: vec![1, 3] }
    }
}

/// Largest ratio over `n` for each `m` in `ms`, as `(ratio, m, n)`.
fn worst_over(
    ms: &[i64],
    c: u64,
    abs_all: impl Fn(i64) -> Result<Vec<f64>>,
    bound: impl Fn(i64, i64) -> f64,
) -> Result<(f64, i64, i64)> {
    let mut worst = (0.0, 0, 0);
    for &m in ms {
        let a = abs_all(m)?;
        for n in 0..c as i64 {
            let r = a[n as usize] / bound(m, n);
            if r > worst.0 {
                worst = (r, m, n);
            }
        }
    }
    Ok(worst)
}

fn expsum_row(
    m: i64,
    n: i64,
    c: u64,
    ell: Option<i64>,
    chi: &str,
    v: num_complex::Complex64,
    bound: f64,
) -> Vec<String> {
    vec![
        m.to_string(),
        n.to_string(),
        c.to_string(),
        ell.map_or(String::new(), |e| e.to_string()),
        chi.to_string(),
        sci(v.re),
        sci(v.im),
        sci(bound),
        sci(v.norm() / bound),
    ]
}

/// Bound sweeps. Each exhaustive table keeps the worst tuple per
/// `(c, ℓ, χ)`; the Salié and 2-power sweeps cover all `m` through unit
/// representatives (`|S(m,n)| = |S(mū, nu)|`, `|K(m,n)| = |K(mū², nu²)|`).
pub fn expsum_sweep(p: &SweepParams, seed: u64) -> Result<SuiteReport> {
    if p.ells.iter().any(|e| e % 2 == 0) {
        return domain(format!("ell values {:?} must be odd", p.ells));
    }
    match p.family {
        SweepFamily::Weil => weil_sweep(p, seed),
        SweepFamily::Salie => salie_sweep(p),
        SweepFamily::TwoPower => two_power_sweep(p),
    }
}

fn weil_sweep(p: &SweepParams, seed: u64) -> Result<SuiteReport> {
    let c_max = p.c_max.unwrap_or(128);
    let chars = pool(&["trivial/4", "kron:-4"])?;
    let mut groups = Vec::new();
    for c in (4..=c_max).step_by(4) {
        for &ell in &p.ells {
            for ch in &chars {
                groups.push((c, ell, ch));
            }
        }
    }
    let rows: Vec<Vec<String>> = groups
        .par_iter()
        .map(|&(c, ell, (name, chi))| {
            let ms: Vec<i64> = (0..c as i64).collect();
            let (_, m, n) = worst_over(
                &ms,
                c,
                |m| kloosterman_abs_all_n(m, c, ell, chi),
                |m, n| weil_bound(m, n, c, chi.modulus()),
            )?;
            let k = kloosterman_naive(m, n, c, ell, chi)?;
            Ok(expsum_row(m, n, c, Some(ell), name, k.value, k.bound))
        })
        .collect::<Result<_>>()?;
    let mut exhaustive = Table::new("weil-exhaustive", &EXPSUM_COLUMNS);
    exhaustive.rows = rows;

    let rchars = pool(&["trivial/4", "kron:-4", "kron:8", "kron:12"])?;
    let rmax = p.random_c_max;
    if rmax < 24 {
        return domain(format!("random_c_max = {rmax} must be at least 24"));
    }
    let rrows: Vec<Vec<String>> = (0..p.random as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, (1 << 32) + i);
            let (name, chi) = &rchars[rng.random_range(0..rchars.len())];
            let q = lcm(4, chi.modulus());
            let c = q * rng.random_range(1..=rmax / q);
            let ell = p.ells[rng.random_range(0..p.ells.len())];
            let m = rng.random_range(0..c as i64);
            let n = rng.random_range(0..c as i64);
            let k = kloosterman_naive(m, n, c, ell, chi)?;
            Ok(expsum_row(m, n, c, Some(ell), name, k.value, k.bound))
        })
        .collect::<Result<_>>()?;
    let mut random = Table::new("weil-random", &EXPSUM_COLUMNS);
    random.rows = rrows;

    let mut rep = SuiteReport::new("expsum-sweep-weil", "Weil-type bound for half-integral Kloosterman sums");
    let ex = max_of(&exhaustive.numbers("ratio"));
    let ra = max_of(&random.numbers("ratio"));
    rep.metric("exhaustive_c_max", c_max as f64);
    rep.metric("random_tuples", random.rows.len() as f64);
    rep.check(Check::at_most("max ratio, exhaustive", ex, 1.0));
    rep.check(Check::at_most("max ratio, random", ra, 1.0));
    rep.tables.push(exhaustive);
    rep.tables.push(random);
    Ok(rep)
}

fn max_of(v: &[f64]) -> f64 {
    // NaN propagates so that a bad value fails its check.
    v.iter().copied().fold(0.0, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

fn odd_prime_powers(limit: u64) -> Vec<(u64, u64, u32)> {
    let mut out = Vec::new();
    for p in arith::primes_up_to(limit).into_iter().filter(|&p| p > 2) {
        let (mut q, mut a) = (p, 1);
        while q <= limit {
            out.push((p, q, a));
            q *= p;
            a += 1;
        }
    }
    out
}

fn salie_sweep(p: &SweepParams) -> Result<SuiteReport> {
    let limit = p.c_max.unwrap_or(5000);
    let groups = odd_prime_powers(limit);
    let rows: Vec<Vec<Vec<String>>> = groups
        .par_iter()
        .map(|&(pr, c, alpha)| {
            let star = if pr % 4 == 1 { pr as i64 } else { -(pr as i64) };
            let chars = [
                ("trivial".to_string(), DirichletCharacter::trivial(1)),
                (format!("kron:{star}"), DirichletCharacter::from_kronecker(star, pr)?),
            ];
            let mut ms = vec![0i64];
            ms.extend((0..alpha).map(|j| pr.pow(j) as i64));
            let mut out = Vec::new();
            for (name, chi) in &chars {
                let cond = chi.conductor();
                let (_, m, n) = worst_over(&ms, c, |m| salie_abs_all_n(m, c, chi), |m, n| salie_bound(m, n, c, cond))?;
                let s = salie_naive(m, n, c, chi)?;
                out.push(expsum_row(m, n, c, None, name, s.value, s.bound));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new("salie-prime-powers", &EXPSUM_COLUMNS);
    t.rows = rows.into_iter().flatten().collect();
    let mut rep = SuiteReport::new("expsum-sweep-salie", "Salié bound at odd prime powers");
    rep.metric("moduli", groups.len() as f64);
    rep.check(Check::at_most("max ratio", max_of(&t.numbers("ratio")), 1.0));
    rep.tables.push(t);
    Ok(rep)
}

fn two_power_sweep(p: &SweepParams) -> Result<SuiteReport> {
    let limit = p.c_max.unwrap_or(4096);
    let chars = pool(&["trivial/4", "kron:-4", "kron:8", "kron:-8"])?;
    let mut groups = Vec::new();
    let mut alpha = 2;
    while 1u64 << alpha <= limit {
        for &ell in &p.ells {
            for ch in &chars {
                if (1u64 << alpha).is_multiple_of(ch.1.modulus()) {
                    groups.push((alpha, ell, ch));
                }
            }
        }
        alpha += 1;
    }
    let rows: Vec<Vec<String>> = groups
        .par_iter()
        .map(|&(alpha, ell, (name, chi))| {
            let c = 1u64 << alpha;
            let mut ms = vec![0i64];
            for j in 0..alpha {
                for u in [1i64, 3, 5, 7] {
                    ms.push(((u << j) as u64 % c) as i64);
                }
            }
            ms.sort_unstable();
            ms.dedup();
            let cond = chi.conductor();
            let (_, m, n) =
                worst_over(&ms, c, |m| kloosterman_abs_all_n(m, c, ell, chi), |m, n| two_power_bound(m, n, c, cond))?;
            let k = kloosterman_naive(m, n, c, ell, chi)?;
            let b = two_power_bound(m, n, c, cond);
            Ok(expsum_row(m, n, c, Some(ell), name, k.value, b))
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new("two-power", &EXPSUM_COLUMNS);
    t.rows = rows;
    let mut rep = SuiteReport::new("expsum-sweep-two-power", "Kloosterman bound at c = 2^α");
    rep.metric("groups", groups.len() as f64);
    rep.check(Check::at_most("max ratio", max_of(&t.numbers("ratio")), 1.0));
    rep.tables.push(t);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExpsumEvalParams {
    pub kind: SumKind,
    pub m: i64,
    pub n: i64,
    pub c: u64,
    pub ell: i64,
    pub character: String,
}

impl Default for ExpsumEvalParams {
    fn default() -> Self {
        ExpsumEvalParams { kind: SumKind::Kloosterman, m: 1, n: 1, c: 4, ell: 1, character: "trivial/4".into() }
    }
}

/// One sum, naive and factored, with its bound.
pub fn expsum_eval(p: &ExpsumEvalParams) -> Result<SuiteReport> {
    let chi = parse_character(&p.character)?;
    let (naive, factored, ell) = match p.kind {
        SumKind::Kloosterman => (
            kloosterman_naive(p.m, p.n, p.c, p.ell, &chi)?,
            kloosterman_factored(p.m, p.n, p.c, p.ell, &chi)?.value,
            Some(p.ell),
        ),
        SumKind::Salie => (salie_naive(p.m, p.n, p.c, &chi)?, salie_factored(p.m, p.n, p.c, &chi)?.value, None),
    };
    let mut t = Table::new("expsum", &EXPSUM_COLUMNS);
    t.push(expsum_row(p.m, p.n, p.c, ell, &p.character, naive.value, naive.bound));
    let mut rep = SuiteReport::new("expsum-eval", "single exponential sum");
    let dev = (factored - naive.value).norm() / naive.value.norm().max(1.0);
    rep.metric("re", naive.value.re);
    rep.metric("im", naive.value.im);
    rep.metric("abs", naive.value.norm());
    rep.metric("bound", naive.bound);
    rep.check(Check::at_most("factored vs naive deviation", dev, 1e-8 * phi(p.c) as f64));
    rep.check(Check::at_most("ratio to bound", naive.ratio(), 1.0));
    rep.tables.push(t);
    Ok(rep)
}
