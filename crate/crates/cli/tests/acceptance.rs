//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible with `--nocapture`) and enforcing the pinned
//! tolerance and runtime budget. Everything runs against seed 0 through
//! the shipped binary unless a criterion is about the library itself.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use arlog_core::asymptotics::{self, OuTheta, StationaryRho};
use arlog_core::residual::ResidualDist;
use arlog_core::BigFloat;
use serde_json::Value;

fn arlog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arlog"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = arlog(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn verdict<'a>(doc: &'a Value, name: &str) -> &'a Value {
    doc["verdicts"]
        .as_array()
        .expect("report has verdicts")
        .iter()
        .find(|v| v["name"] == name)
        .unwrap_or_else(|| panic!("no verdict named {name}"))
}

fn conclude(number: u32, description: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {number}: pass - {description}");
    } else {
        println!("criterion {number}: FAIL - {description}");
        panic!("criterion {number} failed:\n  {}", failures.join("\n  "));
    }
}

fn check(failures: &mut Vec<String>, ok: bool, detail: String) {
    if !ok {
        failures.push(detail);
    }
}

fn within_budget(failures: &mut Vec<String>, elapsed: Duration, budget: Duration, what: &str) {
    check(
        failures,
        elapsed <= budget,
        format!("{what} took {elapsed:?}, budget {budget:?}"),
    );
}

#[test]
fn criterion_01_published_clt_constants_to_20_decimals() {
    // The five published values are 20-decimal truncations, so a
    // higher-precision rendering must reproduce them as a prefix.
    let published = [
        ("0.1", "1.11527354305263680232"),
        ("0.3", "1.15562165351986837602"),
        ("0.5", "1.26199222423122947973"),
        ("0.7", "1.52783735828651737636"),
        ("0.9", "2.55564072887132125752"),
    ];
    let mut failures = Vec::new();
    for (rho, want) in published {
        let start = Instant::now();
        let doc = report(&["constants", "xi", "--rho", rho, "--digits", "25"]);
        let elapsed = start.elapsed();
        let value = doc["value"].as_str().expect("value is a string");
        check(
            &mut failures,
            value.starts_with(want),
            format!("xi({rho}) = {value} does not extend {want}"),
        );
        within_budget(&mut failures, elapsed, Duration::from_secs(1), "one xi evaluation");
    }
    conclude(1, "xi matches all five published values to 20 decimals, under 1 s each", &failures);
}

#[test]
fn criterion_02_ou_constant_and_series_bracket() {
    let mut failures = Vec::new();
    let start = Instant::now();

    let doc = report(&["constants", "eta", "--theta", "1", "--digits", "20"]);
    check(
        &mut failures,
        doc["value"] == "0.81146307722510340753",
        format!("eta(1) = {}", doc["value"]),
    );

    // Bracket eta_1^2 between the partial sum and the tail bound of the
    // independent check series.
    let eta1 = asymptotics::eta(&OuTheta::new("1").unwrap(), 25)
        .unwrap()
        .with_precision(45)
        .unwrap();
    let eta1_sq = eta1.mul(&eta1).unwrap();
    let check_series = asymptotics::eta_series_check(100_000).unwrap();
    let low = check_series.partial_sum.with_precision(45).unwrap();
    let width = check_series.tail_bound.with_precision(45).unwrap();
    let high = low.add(&width).unwrap();
    check(
        &mut failures,
        low.cmp_value(&eta1_sq).is_le() && eta1_sq.cmp_value(&high).is_le(),
        format!(
            "series bracket [{}, {}] misses eta_1^2 = {}",
            low.to_fixed(12),
            high.to_fixed(12),
            eta1_sq.to_fixed(12)
        ),
    );
    let five_e8 = BigFloat::parse("0.00000005", 45).unwrap();
    check(
        &mut failures,
        width.cmp_value(&five_e8).is_lt(),
        format!("bracket width {} is not below 5e-8", width.to_fixed(12)),
    );

    within_budget(&mut failures, start.elapsed(), Duration::from_secs(5), "criterion 2");
    conclude(2, "eta(1) to 20 decimals and the check series brackets it within 5e-8, under 5 s", &failures);
}

/// Composite Simpson integration with Neumaier-compensated accumulation,
/// used as the quadrature route for the residual moments.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, steps: usize) -> f64 {
    assert!(steps >= 2 && steps % 2 == 0);
    let h = (b - a) / steps as f64;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut add = |v: f64| {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    };
    add(f(a));
    add(f(b));
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        add(w * f(a + h * i as f64));
    }
    (sum + comp) * h / 3.0
}

#[test]
fn criterion_03_residual_quartiles_mode_and_quadrature_moments() {
    let mut failures = Vec::new();

    // The paper's quartiles are printed to 20 decimals; require agreement
    // to at least 18 by comparing the scaled-integer forms within 100
    // final-digit units.
    let quartiles = [
        ("0.25", "-0.45782337329420373497"),
        ("0.5", "0.21732071404060381038"),
        ("0.75", "0.69796763838144042777"),
    ];
    for (p, want) in quartiles {
        let doc = report(&["dist", "quantile", "--p", p, "--digits", "20"]);
        let got = doc["value"].as_str().unwrap();
        let as_units = |s: &str| -> i128 { s.replace(['.', '-'], "").parse().unwrap() };
        let sign_ok = got.starts_with('-') == want.starts_with('-');
        let diff = (as_units(got) - as_units(want)).abs();
        check(
            &mut failures,
            sign_ok && diff <= 100,
            format!("quantile({p}) = {got}, published {want}, diff {diff} units"),
        );
    }

    let doc = report(&["dist", "mode", "--digits", "20"]);
    check(
        &mut failures,
        doc["value"] == "0.57186419860436852975",
        format!("mode = {}", doc["value"]),
    );

    // Quadrature moments of the analytic density.
    let pdf = |x: f64| ResidualDist.pdf(x);
    let (lo, hi, steps) = (-60.0, 12.0, 295_000);
    let mass = simpson(pdf, lo, hi, steps);
    let mean = simpson(|x| x * pdf(x), lo, hi, steps);
    let m2 = simpson(|x| x * x * pdf(x), lo, hi, steps);
    let m3 = simpson(|x| x * x * x * pdf(x), lo, hi, steps);
    let m4 = simpson(|x| x * x * x * x * pdf(x), lo, hi, steps);
    let var = m2 - mean * mean;
    let mu3 = m3 - 3.0 * mean * m2 + 2.0 * mean.powi(3);
    let mu4 = m4 - 4.0 * mean * m3 + 6.0 * mean * mean * m2 - 3.0 * mean.powi(4);
    let skew = mu3 / var.powf(1.5);
    let excess = mu4 / (var * var) - 3.0;
    for (name, got, want) in [
        ("mass", mass, 1.0),
        ("mean", mean, 0.0),
        ("variance", var, 1.0),
        ("skewness", skew, -1.53514159072290597506),
        ("excess kurtosis", excess, 4.0),
    ] {
        check(
            &mut failures,
            (got - want).abs() < 1e-10,
            format!("quadrature {name} = {got:.14}, want {want}"),
        );
    }

    conclude(3, "quartiles to 18+ decimals, mode to 20, quadrature moments within 1e-10", &failures);
}

#[test]
fn criterion_04_finite_variance_matches_the_double_sum_oracle() {
    let mut failures = Vec::new();
    let start = Instant::now();
    let w = 45;
    let sigma = asymptotics::mu_sigma(30).unwrap().1.with_precision(w).unwrap();
    let sigma_sq = sigma.mul(&sigma).unwrap();
    let eps = BigFloat::parse("0.0000000001", w).unwrap();
    for rho_text in ["0.3", "0.7"] {
        let rho = StationaryRho::new(rho_text).unwrap();
        for n in [10u64, 100] {
            // sigma^2 + sum over lags of 2 (n - lag)/n * autocov(lag),
            // assembled from the autocovariance series term by term.
            let n_big = BigFloat::from_u64(n, w).unwrap();
            let mut oracle = sigma_sq.clone();
            for lag in 1..n {
                let cov = asymptotics::log_abs_autocov(&rho, lag, 30)
                    .unwrap()
                    .with_precision(w)
                    .unwrap();
                let weight = BigFloat::from_u64(2 * (n - lag), w)
                    .unwrap()
                    .div(&n_big)
                    .unwrap();
                oracle = oracle.add(&cov.mul(&weight).unwrap()).unwrap();
            }
            let doc = report(&[
                "constants", "finite-var", "--rho", rho_text, "--n", &n.to_string(),
                "--digits", "25",
            ]);
            let cli = BigFloat::parse(doc["value"].as_str().unwrap(), w).unwrap();
            let diff = cli.sub(&oracle).unwrap().abs();
            check(
                &mut failures,
                diff.cmp_value(&eps).is_lt(),
                format!(
                    "finite-var(rho={rho_text}, n={n}) = {}, oracle {}",
                    cli.to_fixed(15),
                    oracle.to_fixed(15)
                ),
            );
        }
    }
    within_budget(&mut failures, start.elapsed(), Duration::from_secs(10), "criterion 4");
    conclude(4, "finite_n_variance agrees with the double-sum oracle to 10 digits, under 10 s", &failures);
}

#[test]
fn criterion_05_residual_law_recovered_by_simulation() {
    let mut failures = Vec::new();
    let start = Instant::now();
    for (rho, n) in [("1.1", "50"), ("3", "10")] {
        let doc = report(&[
            "experiment", "residuals", "--rho", rho, "--n", n, "--reps", "100000",
            "--seed", "0",
        ]);
        let skew = verdict(&doc, "skewness");
        let obs = skew["observed"].as_f64().unwrap();
        let target = skew["target"].as_f64().unwrap();
        check(
            &mut failures,
            (obs - target).abs() <= 0.05,
            format!("rho={rho}: sample skewness {obs:.4} vs {target:.4}"),
        );
        let ks = verdict(&doc, "ks_scaled");
        check(
            &mut failures,
            ks["pass"] == true,
            format!(
                "rho={rho}: KS statistic {} exceeds the 1% critical value {}",
                ks["observed"], ks["tolerance"]
            ),
        );
        for v in doc["verdicts"].as_array().unwrap() {
            check(
                &mut failures,
                v["pass"] == true,
                format!("rho={rho}: verdict {} failed", v["name"]),
            );
        }
    }
    within_budget(&mut failures, start.elapsed(), Duration::from_secs(30), "criterion 5");
    conclude(5, "100k-replicate residuals pass KS at 1% with skewness within 0.05, under 30 s", &failures);
}

#[test]
fn criterion_06_clt_spread_within_five_percent() {
    let mut failures = Vec::new();
    let start = Instant::now();
    let doc = report(&[
        "experiment", "clt", "--rho", "0.5", "--n", "10000", "--reps", "2000",
        "--seed", "0",
    ]);
    let std = verdict(&doc, "clt_std");
    let obs = std["observed"].as_f64().unwrap();
    let want = 1.26199222423122947973;
    check(
        &mut failures,
        (obs - want).abs() <= 0.05 * want,
        format!("sample std {obs:.6} is not within 5% of {want:.6}"),
    );
    check(&mut failures, std["pass"] == true, "clt_std verdict failed".into());
    within_budget(&mut failures, start.elapsed(), Duration::from_secs(60), "criterion 6");
    conclude(6, "CLT sample std within 5% of xi(0.5) at n=10^4, reps=2000, under 60 s", &failures);
}

#[test]
fn criterion_07_lyapunov_rates_match_published_constants() {
    let mut failures = Vec::new();
    let runs: [(&[&str], f64, f64, &str); 3] = [
        (
            &["experiment", "lyapunov", "--model", "random-sign", "--rho", "1.5",
              "--n", "10000", "--reps", "8", "--seed", "0"],
            1.5f64.ln(),
            0.002,
            "random-sign rho=1.5",
        ),
        (
            &["experiment", "lyapunov", "--model", "viswanath", "--n", "1000000",
              "--reps", "8", "--seed", "0"],
            1.13198824f64.ln(),
            0.005,
            "viswanath",
        ),
        (
            &["experiment", "lyapunov", "--model", "wright-trefethen", "--n", "1000000",
              "--reps", "8", "--seed", "0"],
            1.057473553704f64.ln(),
            0.005,
            "wright-trefethen",
        ),
    ];
    for (args, want, tol, label) in runs {
        let start = Instant::now();
        let doc = report(args);
        let rate = doc["stats"]["rate_mean"].as_f64().unwrap();
        check(
            &mut failures,
            (rate - want).abs() <= tol,
            format!("{label}: rate {rate:.6} vs {want:.6} (tol {tol})"),
        );
        within_budget(&mut failures, start.elapsed(), Duration::from_secs(60), label);
    }
    conclude(7, "growth rates match ln 1.5 and both published constants, under 60 s each", &failures);
}

#[test]
fn criterion_08_ar2_region_has_zero_mismatches() {
    let mut failures = Vec::new();
    let doc = report(&["experiment", "ar2-region", "--grid", "41", "--seed", "0"]);
    check(
        &mut failures,
        doc["stats"]["mismatches"] == 0.0,
        format!("mismatches = {}", doc["stats"]["mismatches"]),
    );
    check(
        &mut failures,
        verdict(&doc, "region_mismatches")["pass"] == true,
        "region verdict failed".into(),
    );
    conclude(8, "closed-form AR(2) region agrees with the spectral radius on the 41x41 grid", &failures);
}

#[test]
fn criterion_09_uniform_noise_mean_rules_out_the_misprint() {
    let mut failures = Vec::new();
    let doc = report(&[
        "experiment", "clt", "--rho", "0", "--noise", "uniform", "--n", "1000000",
        "--reps", "1", "--seed", "0",
    ]);
    let mean = doc["stats"]["mean_ln_abs"].as_f64().unwrap();
    let se = doc["stats"]["se_mean_ln_abs"].as_f64().unwrap();
    let want = 0.5 * 3.0f64.ln() - 1.0;
    check(
        &mut failures,
        (mean - want).abs() < 0.004,
        format!("mean {mean:.6} vs ln(3)/2 - 1 = {want:.6}"),
    );
    let distance = (mean - 0.2f64.ln()).abs() / se;
    check(
        &mut failures,
        distance > 100.0,
        format!("mean is only {distance:.1} standard errors from ln 0.2"),
    );
    conclude(9, "10^6-step uniform-noise mean sits at ln(3)/2 - 1, far from ln 0.2", &failures);
}

#[test]
fn criterion_10_reports_are_byte_identical_across_reruns_and_threads() {
    let mut failures = Vec::new();
    let base: &[&str] = &[
        "experiment", "residuals", "--rho", "3", "--n", "10", "--reps", "100000",
        "--seed", "0",
    ];
    let first = arlog(base);
    check(&mut failures, first.status.success(), "baseline run failed".into());
    let again = arlog(base);
    check(
        &mut failures,
        again.stdout == first.stdout,
        "re-run with the same seed changed the output".into(),
    );
    for threads in ["1", "4"] {
        let mut args = base.to_vec();
        args.extend(["--threads", threads]);
        let out = arlog(&args);
        check(
            &mut failures,
            out.stdout == first.stdout,
            format!("--threads {threads} changed the output"),
        );
    }
    conclude(10, "same-seed reports are byte-identical, independent of --threads", &failures);
}
