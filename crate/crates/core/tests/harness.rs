use std::fs;
use std::io::BufReader;
use std::process::Command as Proc;

use theta_shift::harness::{
    self, geometric_grid, parse_character, trial_rng, verify_mult, Command, ExperimentConfig, ShiftedSumParams,
    SumKind, SweepFamily, SweepParams, VerifyMultParams,
};
use theta_shift::modforms::{shifted_sum, DihedralEta7};
use theta_shift::ShiftedSumSeries;

fn csv_bytes(cfg: &ExperimentConfig) -> Vec<(String, Vec<u8>)> {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = cfg.clone();
    cfg.out = Some(dir.path().to_path_buf());
    let out = harness::run(&cfg).unwrap();
    let mut files: Vec<(String, Vec<u8>)> = out
        .files
        .iter()
        .filter(|f| f.extension().is_some_and(|e| e == "csv"))
        .map(|f| (f.file_name().unwrap().to_string_lossy().into_owned(), fs::read(f).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn identical_config_gives_identical_csv() {
    let configs = [
        Command::VerifyMult(VerifyMultParams { trials: 40, max_c: 2000 }),
        Command::ExpsumSweep(SweepParams {
            family: SweepFamily::Weil,
            c_max: Some(32),
            random: 50,
            random_c_max: 512,
            ells: vec![1, 3],
        }),
        Command::VerifyTheta(Default::default()),
    ];
    for c in configs {
        let cfg = ExperimentConfig::new(c);
        let a = csv_bytes(&cfg);
        let b = csv_bytes(&cfg);
        assert!(!a.is_empty());
        assert_eq!(a, b);
        for (_, bytes) in &a {
            assert!(bytes.starts_with(b"# schema=theta-shift/"));
        }
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let p = VerifyMultParams { trials: 30, max_c: 3000 };
    let run = |n| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        let rep = pool.install(|| verify_mult(&p, 99).unwrap());
        let mut buf = Vec::new();
        rep.tables[0].write(&mut buf).unwrap();
        buf
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn different_seeds_differ() {
    let p = VerifyMultParams { trials: 10, max_c: 3000 };
    let a = verify_mult(&p, 1).unwrap();
    let b = verify_mult(&p, 2).unwrap();
    assert_ne!(a.tables[0].rows, b.tables[0].rows);
    assert!(a.passed() && b.passed());
}

#[test]
fn trial_streams_are_independent_of_order() {
    use rand::Rng;
    let x: u64 = trial_rng(5, 17).random();
    let _: u64 = trial_rng(5, 3).random();
    assert_eq!(x, trial_rng(5, 17).random::<u64>());
    assert_ne!(x, trial_rng(5, 18).random::<u64>());
}

#[test]
fn shifted_sum_csv_round_trip() {
    let grid = geometric_grid(16.0, 4096.0, 4).unwrap();
    let mut s = shifted_sum(&DihedralEta7, 7, &grid, false).unwrap();
    s.fit(s.linear_constant()).unwrap();
    let mut buf = Vec::new();
    s.write_csv(&mut buf, 4).unwrap();
    let back = ShiftedSumSeries::read_csv(BufReader::new(&buf[..])).unwrap();
    assert_eq!(back.h, 7);
    assert!(!back.one_sided);
    assert_eq!(back.rows.len(), s.rows.len());
    for (a, b) in back.rows.iter().zip(&s.rows) {
        assert_eq!(a.0, b.0);
        assert!((a.1 - b.1).abs() <= 1e-11 * b.1.abs().max(1.0));
    }
}

#[test]
fn fit_reads_shifted_sum_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(Command::ShiftedSum(ShiftedSumParams {
        h: 1,
        xmin: 64.0,
        xmax: 4096.0,
        ..Default::default()
    }));
    cfg.out = Some(dir.path().to_path_buf());
    let first = harness::run(&cfg).unwrap();
    let e = first.reports[0].get("fitted_exponent").unwrap();
    let csv = dir.path().join("shifted-sum-h1_shifted-sum.csv");
    let fit = ExperimentConfig::new(Command::Fit(harness::FitParams { input: csv, c: None, linear: false }));
    let rep = harness::run(&fit).unwrap();
    assert!((rep.reports[0].get("exponent").unwrap() - e).abs() < 1e-9);
}

#[test]
fn characters_parse() {
    assert_eq!(parse_character("trivial").unwrap().modulus(), 1);
    assert_eq!(parse_character("trivial/12").unwrap().modulus(), 12);
    let k = parse_character("kron:-4").unwrap();
    assert_eq!((k.modulus(), k.conductor()), (4, 4));
    let k = parse_character("kron:5/20").unwrap();
    assert_eq!((k.modulus(), k.conductor()), (20, 5));
    let p = parse_character("prime:7:2").unwrap();
    assert_eq!(p.modulus(), 7);
    assert!(!p.is_real());
    for bad in ["", "kron", "kron:x", "prime:7", "trivial/0x", "cubic:7"] {
        assert!(parse_character(bad).is_err(), "{bad}");
    }
}

#[test]
fn toml_config_parses() {
    let cfg = ExperimentConfig::from_toml(
        r#"
command = "verify-mult"
trials = 12
max_c = 600
seed = 3

[tolerances]
abs_tol = 1e-12
"#,
    )
    .unwrap();
    assert_eq!(cfg.seed, 3);
    assert_eq!(cfg.tolerances.abs_tol, 1e-12);
    assert_eq!(cfg.command, Command::VerifyMult(VerifyMultParams { trials: 12, max_c: 600 }));

    let cfg = ExperimentConfig::from_toml(
        "command = \"expsum-eval\"\nm = 1\nn = 2\nc = 12\nell = 1\ncharacter = \"trivial/4\"\nkind = \"kloosterman\"\n",
    )
    .unwrap();
    let Command::ExpsumEval(p) = &cfg.command else { panic!() };
    assert_eq!(p.kind, SumKind::Kloosterman);
    assert_eq!(cfg.seed, 7);

    let cfg = ExperimentConfig::from_toml("command = \"specfun-check\"\nparts = [\"bessel\"]\n[bessel]\nsamples = 5\n")
        .unwrap();
    let out = harness::run(&cfg).unwrap();
    assert_eq!(out.reports.len(), 1);
    assert_eq!(out.reports[0].suite, "bessel");

    assert!(ExperimentConfig::from_toml("command = \"nope\"").is_err());
    assert!(ExperimentConfig::from_toml("trials = 3").is_err());
}

#[test]
fn summary_names_each_check() {
    let rep = verify_mult(&VerifyMultParams { trials: 4, max_c: 100 }, 7).unwrap();
    let s = rep.summary();
    assert!(s.starts_with("PASS verify-mult (twisted Kloosterman and Salié multiplicativity)"));
    assert!(s.contains("[PASS] max deviation"));
}

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_theta-shift"))
}

#[test]
fn cli_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["--out", dir.path().to_str().unwrap(), "verify-mult", "--trials", "10", "--max-c", "500"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("PASS verify-mult"));
    assert!(dir.path().join("verify-mult_verify-mult.csv").exists());
    assert!(dir.path().join("verify-mult_summary.txt").exists());

    let out = bin()
        .args(["--out", dir.path().to_str().unwrap(), "expsum", "eval", "--m", "1", "--n", "1", "--c", "4"])
        .args(["--char", "trivial/4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("expsum-eval_expsum.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("m,n,c,ell,char,re,im,bound,ratio"));

    let out = bin()
        .args([
            "--out",
            dir.path().to_str().unwrap(),
            "expsum",
            "eval",
            "--m",
            "1",
            "--n",
            "1",
            "--c",
            "6",
            "--char",
            "trivial",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain error"));

    let out = bin().args(["specfun", "bessel", "--t", "1", "--q", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("J = "));
}

#[test]
fn cli_run_config_and_form_file() {
    let dir = tempfile::tempdir().unwrap();
    let form = dir.path().join("eta7.txt");
    let out = bin().args(["form", "--terms", "70000", "--output", form.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        format!(
            "command = \"shifted-sum\"\nform = {{ file = {:?} }}\nh = 7\nxmin = 16.0\nxmax = 256.0\n",
            form.to_str().unwrap()
        ),
    )
    .unwrap();
    let out =
        bin().args(["--out", dir.path().to_str().unwrap(), "run", "--config", cfg.to_str().unwrap()]).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("shifted-sum-h7"), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    let from_file = fs::read_to_string(dir.path().join("shifted-sum-h7_shifted-sum.csv")).unwrap();

    let dir2 = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["--out", dir2.path().to_str().unwrap(), "shifted-sum", "--h", "7", "--xmin", "16", "--xmax", "256"])
        .output()
        .unwrap();
    assert!(out.status.code().is_some());
    let from_sieve = fs::read_to_string(dir2.path().join("shifted-sum-h7_shifted-sum.csv")).unwrap();
    let xs = |s: &str| -> Vec<(f64, f64)> {
        s.lines()
            .skip(2)
            .map(|l| {
                let v: Vec<&str> = l.split(',').collect();
                (v[0].parse().unwrap(), v[1].parse().unwrap())
            })
            .collect()
    };
    for (a, b) in xs(&from_file).iter().zip(xs(&from_sieve)) {
        assert_eq!(a.0, b.0);
        assert!((a.1 - b.1).abs() < 1e-9 * b.1.abs().max(1.0));
    }
}
