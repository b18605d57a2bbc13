//! Acceptance gate. Each test is one criterion with its stated tolerance and
//! runtime budget; the harness emits one pass/fail line per criterion. Run
//! with `cargo test --test acceptance -- --nocapture` to see the measured
//! numbers behind each verdict.
//!
//! Most criteria read off the verification suite, which is run once per
//! dimension and shared between tests. Criterion 7 adds a direct loop for
//! the normal-form parameters, and criterion 8 drives the installed binary.

use galcas::invariants::generator_count;
use galcas::orbitreduce::{random_float_dual, reduce};
use galcas::verify::{run_suite, CheckResult, CheckStatus, VerificationReport, VerifyOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

const SUITE_SEED: u64 = 2718;
const SUITE_TRIALS: usize = 100;

/// Suite reports for n = 1..=8, computed once. Every criterion that blocks
/// on this gets contention-free per-check timings, because the whole batch
/// runs on the first caller's thread.
fn suites() -> &'static BTreeMap<usize, VerificationReport> {
    static SUITES: OnceLock<BTreeMap<usize, VerificationReport>> = OnceLock::new();
    SUITES.get_or_init(|| {
        let opts = VerifyOptions {
            trials: SUITE_TRIALS,
            seed: SUITE_SEED,
            force_centrality_n4: false,
        };
        (1..=8)
            .map(|n| {
                let report = run_suite(n, &opts).expect("n is in range");
                (n, report)
            })
            .collect()
    })
}

fn check(n: usize, name: &str) -> &'static CheckResult {
    suites()[&n]
        .checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("no check named {}", name))
}

fn assert_pass(n: usize, name: &str) -> Duration {
    let c = check(n, name);
    assert_eq!(
        c.status,
        CheckStatus::Pass,
        "n = {}, check {}: {} ({})",
        n,
        name,
        c.status.as_str(),
        c.detail
    );
    c.runtime
}

#[test]
fn criterion_1_symbolic_invariance() {
    let mut total = Duration::ZERO;
    for n in 1..=8 {
        total += assert_pass(n, "infinitesimal_invariance");
        total += assert_pass(n, "reflection_invariance");
    }
    let secs = total.as_secs_f64();
    println!(
        "criterion 1 (symbolic invariance): PASS, exact brackets and reflection \
         pullback for n = 1..=8 in {:.1}s (budget 60s)",
        secs
    );
    assert!(secs < 60.0, "symbolic invariance took {:.1}s, budget is 60s", secs);
}

#[test]
fn criterion_2_sampled_invariance() {
    let mut total = Duration::ZERO;
    for n in 1..=6 {
        total += assert_pass(n, "sampled_invariance");
    }
    let secs = total.as_secs_f64();
    println!(
        "criterion 2 (sampled invariance): PASS, {} exact trials per n = 1..=6 \
         in {:.1}s (budget 120s)",
        SUITE_TRIALS, secs
    );
    assert!(secs < 120.0, "sampled invariance took {:.1}s, budget is 120s", secs);
}

#[test]
fn criterion_3_minor_sum_identity() {
    for n in 2..=8 {
        assert_pass(n, "minor_q2_identity");
    }
    for n in 4..=6 {
        assert_pass(n, "minor_charpoly_identity");
    }
    println!(
        "criterion 3 (minor-sum identity): PASS, 4-minor sum equals Q2 exactly for \
         n = 2..=8; {} float trials per n = 4..=6 match the projected charpoly \
         within 1e-9 relative",
        SUITE_TRIALS
    );
}

#[test]
fn criterion_4_algebraic_independence() {
    for n in 1..=8 {
        assert_pass(n, "jacobian_rank");
        let nominal = if n == 1 { 1 } else { 2 + n / 2 };
        let emitted = generator_count(n);
        println!(
            "  n = {}: emitted {} generators, nominal family size {}{}",
            n,
            emitted,
            nominal,
            if emitted == nominal { "" } else { " (tail entries are identically zero)" }
        );
    }
    println!(
        "criterion 4 (algebraic independence): PASS, jacobian rank equals the \
         emitted generator count for n = 1..=8"
    );
}

#[test]
fn criterion_5_centrality() {
    for n in 1..=3 {
        let runtime = assert_pass(n, "centrality");
        if n == 3 {
            let secs = runtime.as_secs_f64();
            assert!(secs < 300.0, "centrality at n = 3 took {:.1}s, budget is 300s", secs);
        }
    }
    // The n = 4 run has no runtime guarantee and stays opt-in, mirroring the
    // CLI flag.
    let n4 = if std::env::var_os("GALCAS_CENTRALITY_N4").is_some() {
        let opts = VerifyOptions {
            trials: 4,
            seed: SUITE_SEED,
            force_centrality_n4: true,
        };
        let report = run_suite(4, &opts).expect("n is in range");
        let c = report
            .checks
            .iter()
            .find(|c| c.name == "centrality")
            .expect("suite always reports centrality");
        assert_eq!(c.status, CheckStatus::Pass, "centrality at n = 4: {}", c.detail);
        ", n = 4 included"
    } else {
        ", n = 4 available via GALCAS_CENTRALITY_N4=1"
    };
    println!(
        "criterion 5 (centrality): PASS, symmetrized generators commute with every \
         basis letter for n = 1..=3{}",
        n4
    );
}

#[test]
fn criterion_6_degree_drop() {
    for n in 1..=3 {
        assert_pass(n, "degree_drop");
    }
    println!(
        "criterion 6 (degree drop): PASS, 20 random product pairs per n = 1..=3, \
         the symmetrization defect always drops degree"
    );
}

#[test]
fn criterion_7_orbit_reduction() {
    let mut total = Duration::ZERO;
    for n in 2..=6 {
        total += assert_pass(n, "orbit_reduction");
    }

    // The suite covers residuals, closed forms, and idempotence. The normal
    // form parameters themselves are checked here: A and B reported by the
    // reduction must match the defining norms of the input.
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    for n in 2..=6 {
        let mut done = 0usize;
        let mut resamples = 0usize;
        while done < 100 {
            let xi = random_float_dual(n, &mut rng);
            let red = reduce(&xi, 1e-9);
            if red.form.degenerate {
                resamples += 1;
                assert!(resamples < 200, "n = {}: too many degenerate samples", n);
                continue;
            }
            let a = xi.xstar().norm();
            let u1 = xi.xstar() / a;
            let b = (xi.vstar() - u1.scale(u1.dot(xi.vstar()))).norm();
            assert!(
                (red.form.a - a).abs() <= 1e-12 * a,
                "n = {}: A = {} reported as {}",
                n,
                a,
                red.form.a
            );
            assert!(
                (red.form.b - b).abs() <= 1e-12 * b,
                "n = {}: B = {} reported as {}",
                n,
                b,
                red.form.b
            );
            done += 1;
        }
    }
    total += start.elapsed();

    let secs = total.as_secs_f64();
    println!(
        "criterion 7 (orbit reduction): PASS, 100 reductions per n = 2..=6, \
         residuals below 1e-10, A and B within 1e-12 relative, generators match \
         closed forms within 1e-8, in {:.1}s (budget 30s)",
        secs
    );
    assert!(secs < 30.0, "orbit reduction took {:.1}s, budget is 30s", secs);
}

#[test]
fn criterion_8_deterministic_reports() {
    let bin = env!("CARGO_BIN_EXE_galcas");
    let run = |threads: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args(["verify", "--n", "4", "--seed", "9", "--json"]);
        if let Some(t) = threads {
            cmd.env("GALCAS_THREADS", t);
        }
        let out = cmd.output().expect("binary runs");
        assert!(
            out.status.success(),
            "verify exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };

    let first = run(None);
    let second = run(None);
    let single = run(Some("1"));
    let four = run(Some("4"));
    assert_eq!(first, second, "two runs with the same seed differ");
    assert_eq!(first, single, "GALCAS_THREADS=1 changes the report");
    assert_eq!(first, four, "GALCAS_THREADS=4 changes the report");
    println!(
        "criterion 8 (deterministic reports): PASS, byte-identical JSON across \
         repeated runs and across 1 and 4 worker threads"
    );
}
