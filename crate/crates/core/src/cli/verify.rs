//! Deterministic verification suites and golden-file checks.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use serde_json::json;

use super::emit::Output;
use super::RunConfig;
use crate::algebra::{CycloNum, Series};
use crate::contour::{agreement_digits, eval_series_at, extract_converged, Integrand, QuadratureConfig};
use crate::error::Result;
use crate::npoint::{brute_force_ft, closed_ft, closed_ft_r, correlation, correlation_expansion, ClosedOptions, SValue};
use crate::partitions::{enumerate_t_cores, partitions_of, t_cores_by_filter, Partition};
use crate::quasimod::{build_basis, check_2core_identity, lift_rational, membership_solve, Membership};
use crate::symfunc::{dual_cauchy_product, dual_cauchy_sum, schur_hook_formula, topological_vertex, SpecPoint};
use crate::theta::{jacobi_j, jacobi_j_product, theta3, theta3_product};

pub const SUITES: [&str; 7] = ["partitions", "symfunc", "theta", "npoint-routes", "contour", "quasimod", "golden"];

pub const DEFAULT_GOLDEN_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");

/// Commands whose output is pinned in the golden directory.
pub const GOLDEN_CASES: [(&str, &[&str]); 5] = [
    ("npoint_t2_s4_brute.json", &["npoint", "--t", "2", "--s", "4", "--method", "brute", "--order", "6"]),
    ("count_tcores_t3_20.csv", &["--format", "csv", "count-tcores", "--t", "3", "--max", "20"]),
    ("correlation_t3_f2_q15.json", &["correlation", "--t", "3", "--l", "2", "--order", "15"]),
    ("quasimod_t3_f2.json", &["quasimod-check", "--t", "3", "--l", "2", "--fit", "12", "--check", "18"]),
    ("zfunction_q2_order4.csv", &["--format", "csv", "zfunction", "--q", "2", "--order", "4"]),
];

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

struct Checks {
    out: Vec<CheckResult>,
}

impl Checks {
    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
        let start = Instant::now();
        let (passed, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        self.out.push(CheckResult { name: name.into(), passed, detail, elapsed_ms: start.elapsed().as_millis() });
    }
}

fn r(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

fn partitions_suite(c: &mut Checks, rng: &mut ChaCha8Rng) {
    c.run("hook sum equals n(v) + n(v^t) + |v| for |v| <= 12", || {
        for n in 0..=12 {
            for nu in partitions_of(n) {
                let hooks: u64 = nu.hook_lengths().iter().map(|(_, h)| *h as u64).sum();
                if hooks != nu.n_statistic() + nu.conjugate().n_statistic() + n as u64 {
                    return Ok((false, format!("fails at {nu}")));
                }
            }
        }
        Ok((true, String::new()))
    });
    c.run("Maya enumeration equals hook filter for t = 2..5 to size 16", || {
        for t in 2..=5 {
            if enumerate_t_cores(t, 16) != t_cores_by_filter(t, 16) {
                return Ok((false, format!("t = {t}")));
            }
        }
        Ok((true, String::new()))
    });
    c.run("conjugation and Maya round trip on random partitions", || {
        for _ in 0..40 {
            let n = rng.gen_range(0..=20);
            let all = partitions_of(n);
            let nu = all.choose(rng).expect("nonempty");
            if nu.conjugate().conjugate() != *nu || nu.full_maya(3).to_partition()? != *nu {
                return Ok((false, format!("fails at {nu}")));
            }
        }
        Ok((true, "40 samples".into()))
    });
    c.run("2-cores are staircases", || {
        let cores = enumerate_t_cores(2, 28);
        let ok = cores.iter().enumerate().all(|(n, v)| {
            let k = (0..8u32).find(|k| k * (k + 1) / 2 == n as u32);
            match k {
                Some(k) => v.len() == 1 && v[0] == Partition::new((1..=k).rev().collect()).expect("valid"),
                None => v.is_empty(),
            }
        });
        Ok((ok, String::new()))
    });
}

fn symfunc_suite(c: &mut Checks, rng: &mut ChaCha8Rng) {
    c.run("hook formula equals Jacobi-Trudi for |l| <= 6 at q = 2", || {
        let q = Rational::from(2);
        let rho = SpecPoint::rho(&q)?;
        for n in 0..=6 {
            for lam in partitions_of(n) {
                if rho.schur(&lam)? != schur_hook_formula(&lam, &q)? {
                    return Ok((false, format!("fails at {lam}")));
                }
            }
        }
        Ok((true, String::new()))
    });
    let small: Vec<Partition> = (0..=2).flat_map(partitions_of).collect();
    let triples: Vec<[Partition; 3]> = (0..6)
        .map(|_| [0, 1, 2].map(|_| small.choose(rng).expect("nonempty").clone()))
        .collect();
    c.run("vertex cyclic symmetry on random small triples", || {
        let q = Rational::from(2);
        for [a, b, d] in &triples {
            let x = topological_vertex(a, b, d, &q)?;
            if x != topological_vertex(b, d, a, &q)? || x != topological_vertex(d, a, b, &q)? {
                return Ok((false, format!("({a}, {b}, {d})")));
            }
        }
        Ok((true, format!("{} triples", triples.len())))
    });
    let pair = (small.choose(rng).expect("nonempty").clone(), small.choose(rng).expect("nonempty").clone());
    c.run("dual Cauchy sum equals product to z^4", || {
        let q = Rational::from(2);
        let lhs = dual_cauchy_sum(&pair.0, &pair.1, &q, 4)?;
        let rhs = dual_cauchy_product(&pair.0, &pair.1, &q, 4);
        let ok = (0..=4).all(|k| lhs.coeff(k).and_then(|x| x.as_rational()) == rhs.coeff(k));
        Ok((ok, format!("({}, {})", pair.0, pair.1)))
    });
}

fn theta_suite(c: &mut Checks, rng: &mut ChaCha8Rng) {
    let cases: Vec<(u32, Rational, i64)> = (0..4)
        .map(|_| {
            let t = rng.gen_range(2..=5u32);
            let rho = [r(1, 1), r(2, 1), r(3, 2), r(1, 3)].choose(rng).expect("nonempty").clone();
            (t, rho, rng.gen_range(0..2 * t as i64))
        })
        .collect();
    c.run("triple product forms of theta3 and j", || {
        for (t, rho, k) in &cases {
            let z = CycloNum::scaled_root(2 * t, rho, *k);
            if theta3(&z, 20) != theta3_product(&z, 20) {
                return Ok((false, format!("theta3 at {rho} xi^{k}, t = {t}")));
            }
            if z.as_rational() != Some(Rational::from(1)) && jacobi_j(&z, 20) != jacobi_j_product(&z, 20) {
                return Ok((false, format!("j at {rho} xi^{k}, t = {t}")));
            }
        }
        Ok((true, format!("{} arguments", cases.len())))
    });
    c.run("log theta identity at level 2 to z^6, Q^8", || {
        let id = check_2core_identity(6, 8)?;
        Ok((id.holds, format!("{:?}", id.first_mismatch)))
    });
}

fn npoint_suite(c: &mut Checks, rng: &mut ChaCha8Rng) {
    let pool = ["4", "9/4", "25/16"];
    let q2s = ["1", "2", "5/3"];
    for _ in 0..4 {
        let t = rng.gen_range(2..=4u32);
        let n = rng.gen_range(1..=2usize);
        let s: Vec<&str> = (0..n).map(|_| *pool.choose(rng).expect("nonempty")).collect();
        let q2 = *q2s.choose(rng).expect("nonempty");
        c.run(format!("brute = closed (Q2 = {q2}) = closed-r, t = {t}, s = {s:?}, to Q^4"), || {
            let sv: Vec<SValue> = s.iter().map(|x| SValue::parse(x)).collect::<Result<_>>()?;
            let b = brute_force_ft(t, &sv, 4)?;
            let cl = closed_ft(t, &sv, &q2.parse::<Rational>().expect("literal"), 4, ClosedOptions::default())?;
            let mut ok = b == cl;
            if n >= 2 {
                ok &= b == closed_ft_r(t, &sv, 1, 4)?;
            }
            Ok((ok, String::new()))
        });
    }
}

fn contour_suite(c: &mut Checks) {
    c.run("product integrand at t = 2, s = 4, Q = 1/10 agrees to 20 digits", || {
        let q = r(1, 10);
        let s = [Rational::from(4)];
        let cfg = QuadratureConfig::new(&q, &s, 128, 20)?;
        let ex = extract_converged(&Integrand::Cor42 { t: 2 }, &s, &cfg)?;
        let exact = brute_force_ft(2, &[SValue::parse("4")?], 40)?;
        let d = agreement_digits(&ex.value, &eval_series_at(&exact, &q, 128));
        Ok((d >= 20.0, format!("{d:.1} digits at M = {}", ex.m)))
    });
}

fn quasimod_suite(c: &mut Checks) {
    c.run("<f2> at t = 2 is in the weight-2 space", || {
        let tab = correlation_expansion(2, &[2], 16)?;
        let target = lift_rational(&correlation(&tab, &[2])?, 2);
        let res = membership_solve(&target, &build_basis(2, 2, 16)?, 10, 16)?;
        Ok((matches!(res, Membership::Accept(_)), res.status().into()))
    });
    c.run("lacunary series is rejected", || {
        let terms = (0..=2i64).map(|n| (6 * n * n, Rational::from(1)));
        let target = lift_rational(&Series::from_terms(&(), terms, 32), 2);
        let res = membership_solve(&target, &build_basis(2, 2, 16)?, 10, 16)?;
        Ok((matches!(res, Membership::Reject { .. }), res.status().into()))
    });
}

fn golden_suite(c: &mut Checks, dir: &Path, bless: bool) {
    for (file, args) in GOLDEN_CASES {
        c.run(format!("golden {file}"), || {
            let mut out = Vec::new();
            let mut err = Vec::new();
            let code = super::run_with(std::iter::once("tcore").chain(args.iter().copied()), &mut out, &mut err);
            if code != 0 {
                return Ok((false, format!("exit {code}: {}", String::from_utf8_lossy(&err))));
            }
            let path = dir.join(file);
            if bless {
                std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, &out)).map_err(|e| {
                    crate::Error::Invalid(format!("cannot write {}: {e}", path.display()))
                })?;
                return Ok((true, "blessed".into()));
            }
            match std::fs::read(&path) {
                Ok(want) if want == out => Ok((true, String::new())),
                Ok(_) => Ok((false, "output differs; rerun with --bless and review the diff".into())),
                Err(e) => Ok((false, format!("cannot read {}: {e}", path.display()))),
            }
        });
    }
}

/// Runs one named suite (or "all") with deterministic seeding.
pub fn run_suite(name: &str, seed: u64, golden_dir: Option<&Path>, bless: bool) -> Vec<CheckResult> {
    let mut c = Checks { out: Vec::new() };
    let dir = golden_dir.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(DEFAULT_GOLDEN_DIR));
    let names: Vec<&str> = if name == "all" { SUITES.to_vec() } else { vec![name] };
    for suite in names {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match suite {
            "partitions" => partitions_suite(&mut c, &mut rng),
            "symfunc" => symfunc_suite(&mut c, &mut rng),
            "theta" => theta_suite(&mut c, &mut rng),
            "npoint-routes" => npoint_suite(&mut c, &mut rng),
            "contour" => contour_suite(&mut c),
            "quasimod" => quasimod_suite(&mut c),
            "golden" => golden_suite(&mut c, &dir, bless),
            _ => c.run(format!("unknown suite {suite}"), || Ok((false, String::new()))),
        }
    }
    c.out
}

pub(super) fn verify_command(cfg: &RunConfig, err: &mut dyn Write) -> Result<Output> {
    let suite = cfg.suite.as_deref().unwrap_or("all");
    let results = run_suite(suite, cfg.seed, cfg.golden_dir.as_deref(), cfg.bless);
    let passed = results.iter().all(|r| r.passed);
    let mut pretty = String::new();
    for r in &results {
        let line = format!(
            "{} {:>7} ms  {}{}\n",
            if r.passed { "pass" } else { "FAIL" },
            r.elapsed_ms,
            r.name,
            if r.detail.is_empty() { String::new() } else { format!(" ({})", r.detail) }
        );
        pretty.push_str(&line);
        if !r.passed {
            let _ = write!(err, "{line}");
        }
    }
    pretty.push_str(&format!("{}: {} of {} checks passed\n", suite, results.iter().filter(|r| r.passed).count(), results.len()));
    let checks: Vec<_> = results
        .iter()
        .map(|r| json!({"name": r.name, "passed": r.passed, "detail": r.detail, "elapsed_ms": r.elapsed_ms}))
        .collect();
    let rows = results
        .iter()
        .map(|r| vec![r.name.clone(), r.passed.to_string(), r.elapsed_ms.to_string(), r.detail.clone()])
        .collect();
    let json = json!({"suite": suite, "seed": cfg.seed, "passed": passed, "checks": checks});
    Ok(Output::new(json, pretty).with_table(&["check", "passed", "elapsed_ms", "detail"], rows).failed_if(!passed))
}
