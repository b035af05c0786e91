//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::E;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use lambert_coeffs::closed_forms::{
    beta_row_from_rstirling, carlitz_row_sum, factorial_identity, rstirling_from_beta,
    rstirling_shifted,
};
use lambert_coeffs::exact::{double_factorial, factorial};
use lambert_coeffs::numeric::{
    bernstein_scan, lambert_w, log_grid, pn_series_eval, w_derivative, w_derivative_fd,
    w_derivative_taylor,
};
use lambert_coeffs::props::{
    check_lemma1, check_ratio_bound, is_log_concave, is_log_concave_weighted, is_positive,
    is_unimodal,
};
use lambert_coeffs::table::{alternating_sum, poly_eval_exact};
use lambert_coeffs::{build_table, ExactInt, ExactRat, Route};
use lambert_coeffs_cli::format::{table_to_string, TableFormat};
use lambert_coeffs_cli::verify::{verify_table, VerifyOptions};
use num_traits::ToPrimitive;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn golden_rows() -> Outcome {
    let start = Instant::now();
    let t = build_table(5).map_err(|e| e.to_string())?;
    let golden: [&[i64]; 5] = [
        &[1],
        &[2, 1],
        &[9, 8, 2],
        &[64, 79, 36, 6],
        &[625, 974, 622, 192, 24],
    ];
    for (i, g) in golden.iter().enumerate() {
        let expected: Vec<ExactInt> = g.iter().map(|&v| v.into()).collect();
        if t.row(i + 1).unwrap() != expected.as_slice() {
            return Err(format!("row {} differs", i + 1));
        }
    }
    let elapsed = start.elapsed();
    within(Duration::from_secs(1), elapsed)?;
    Ok(format!("rows 1..5 exact in {elapsed:?}"))
}

fn route_agreement() -> Outcome {
    let start = Instant::now();
    let t = build_table(40).map_err(|e| e.to_string())?;
    let mut compared = 0;
    for n in 1..=40 {
        let row = t.row(n).unwrap();
        for route in Route::ALL.into_iter().filter(|r| *r != Route::Recurrence) {
            let other = route.row(n).map_err(|e| e.to_string())?;
            if let Some(k) = (0..n).find(|&k| other[k] != row[k]) {
                return Err(format!("{route} disagrees at ({n}, {k})"));
            }
            compared += n;
        }
    }
    let elapsed = start.elapsed();
    within(Duration::from_secs(30), elapsed)?;
    Ok(format!(
        "{compared} entries bit-exact across 5 closed routes vs recurrence in {elapsed:?}"
    ))
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let t = build_table(200).map_err(|e| e.to_string())?;
    for (n, row) in t.rows() {
        let e = |e: lambert_coeffs::Error| format!("n = {n}: {e}");
        if !is_positive(row).map_err(e)?.holds {
            return Err(format!("positivity fails at n = {n}"));
        }
        if n < 3 {
            continue;
        }
        let checks = [
            is_log_concave(row).map_err(e)?,
            is_log_concave_weighted(row).map_err(e)?,
            is_unimodal(row),
            check_ratio_bound(n, row).map_err(e)?,
            check_lemma1(row).map_err(e)?,
        ];
        if let Some(r) = checks.iter().find(|r| !r.holds) {
            return Err(format!(
                "{} fails at n = {n}: {:?}",
                r.property, r.first_violation
            ));
        }
    }
    let elapsed = start.elapsed();
    within(Duration::from_secs(60), elapsed)?;
    Ok(format!(
        "6 properties hold on all rows n <= 200 in {elapsed:?}"
    ))
}

fn identities() -> Outcome {
    let t = build_table(60).map_err(|e| e.to_string())?;
    for n in 1..=60usize {
        let alt = alternating_sum(n, &t).unwrap();
        if alt != double_factorial(2 * n as i64 - 3).unwrap() {
            return Err(format!("alternating sum fails at n = {n}"));
        }
        let (left, right) = factorial_identity(n).map_err(|e| e.to_string())?;
        if left != right || right != factorial(n as u64 - 1) {
            return Err(format!("factorial identity fails at n = {n}"));
        }
        let s: Vec<ExactInt> = (0..n)
            .map(|m| rstirling_from_beta(n, m, &t).unwrap())
            .collect();
        for (m, v) in s.iter().enumerate() {
            let direct = rstirling_shifted((n - 1 + m) as u64, m as u64, n as u64).unwrap();
            if *v != direct {
                return Err(format!("inversion fails at n = {n}, m = {m}"));
            }
        }
        if beta_row_from_rstirling(n, &s).unwrap().as_slice() != t.row(n).unwrap() {
            return Err(format!("round trip fails at n = {n}"));
        }
    }
    for kappa in 0..=30usize {
        let expected = double_factorial(2 * kappa as i64 - 1).unwrap();
        for lambda in [kappa as i64 + 1, 0, 7] {
            if carlitz_row_sum(kappa, &lambda.into()) != expected {
                return Err(format!(
                    "Carlitz row sum fails at kappa = {kappa}, lambda = {lambda}"
                ));
            }
        }
    }
    Ok(
        "alternating sum, factorial identity, inversion for n <= 60; Carlitz sums kappa <= 30"
            .into(),
    )
}

fn residual_round_trip() -> Outcome {
    let mut worst = 0.0f64;
    for x in log_grid(1e-6, 1e6, 100) {
        let ev = lambert_w(x).map_err(|e| e.to_string())?;
        let scaled = ev.residual.abs() / (f64::EPSILON * x.max(1.0));
        worst = worst.max(scaled);
        if scaled > 4.0 {
            return Err(format!(
                "x = {x}: residual {} = {scaled:.2} eps",
                ev.residual
            ));
        }
    }
    Ok(format!(
        "worst residual {worst:.2} eps * max(x, 1) (bound 4)"
    ))
}

fn derivative_cross_checks() -> Outcome {
    let t = build_table(8).map_err(|e| e.to_string())?;
    let mut worst_taylor = 0.0f64;
    for n in 1..=8 {
        for x in [1e-4, 1e-3, 1e-2, 5e-2, 1e-1] {
            let closed = w_derivative(n, x, &t).map_err(|e| e.to_string())?.value;
            let taylor = w_derivative_taylor(n, x, 1e-14)
                .map_err(|e| e.to_string())?
                .value;
            let r = rel(taylor, closed);
            worst_taylor = worst_taylor.max(r);
            if r > 1e-8 {
                return Err(format!("Taylor vs closed form n = {n}, x = {x}: rel {r:e}"));
            }
        }
    }
    let mut worst_fd = 0.0f64;
    for n in 1..=5 {
        for x in [0.1, 0.5, 1.0, E, 5.0, 10.0] {
            let closed = w_derivative(n, x, &t).map_err(|e| e.to_string())?.value;
            let fd = w_derivative_fd(n, x).map_err(|e| e.to_string())?.value;
            let r = rel(fd, closed);
            worst_fd = worst_fd.max(r);
            if r > 1e-4 {
                return Err(format!(
                    "finite difference vs closed form n = {n}, x = {x}: rel {r:e}"
                ));
            }
        }
    }
    Ok(format!(
        "worst rel: Taylor {worst_taylor:.1e} (tol 1e-8), finite diff {worst_fd:.1e} (tol 1e-4)"
    ))
}

fn bernstein_sign_scan() -> Outcome {
    let start = Instant::now();
    let t = build_table(12).map_err(|e| e.to_string())?;
    let grid = log_grid(0.01, 10.0, 50);
    let report = bernstein_scan(12, &grid, &t).map_err(|e| e.to_string())?;
    if !report.violations.is_empty() {
        return Err(format!("sign violations: {:?}", report.violations));
    }
    if !report.monotonicity_violations.is_empty() {
        return Err(format!(
            "W' not decreasing at {:?}",
            report.monotonicity_violations
        ));
    }
    let elapsed = start.elapsed();
    within(Duration::from_secs(5), elapsed)?;
    Ok(format!(
        "{} signed derivatives positive in {elapsed:?}",
        report.checked
    ))
}

fn series_form() -> Outcome {
    let t = build_table(10).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for n in 1..=10 {
        for w in [-0.1, 0.0, 0.05, 0.1, 0.2] {
            let exact_w = ExactRat::from_float(w).expect("finite");
            let exact = poly_eval_exact(n, &t, &exact_w)
                .unwrap()
                .to_f64()
                .expect("in range");
            let series = pn_series_eval(n, w, 1e-14).map_err(|e| e.to_string())?;
            let r = rel(series, exact);
            worst = worst.max(r);
            if r > 1e-8 {
                return Err(format!("n = {n}, w = {w}: rel {r:e}"));
            }
        }
    }
    Ok(format!("worst rel {worst:.1e} (tol 1e-8)"))
}

fn fault_injection() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_lambert-coeffs");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let clean = build_table(10).unwrap();
    let opts = VerifyOptions::default();
    if !verify_table(&clean, &opts).passed {
        return Err("clean table fails verification".into());
    }
    let mut caught = 0;
    for (n, row) in clean.rows() {
        for (k, entry) in row.iter().enumerate() {
            let mut bad = clean.clone();
            bad.set_entry(n, k, entry + 1).unwrap();
            let path = dir.path().join(format!("t_{n}_{k}.json"));
            fs::write(&path, table_to_string(&bad, TableFormat::Json))
                .map_err(|e| e.to_string())?;
            let out = Command::new(bin)
                .args(["verify", "--table"])
                .arg(&path)
                .output()
                .map_err(|e| e.to_string())?;
            let stderr = String::from_utf8_lossy(&out.stderr);
            if out.status.code() != Some(1) {
                return Err(format!(
                    "({n}, {k}) + 1 not caught: status {:?}",
                    out.status
                ));
            }
            if !stderr.contains(&format!("(n={n}, k={k}, check=")) {
                return Err(format!("({n}, {k}) + 1 caught but misattributed: {stderr}"));
            }
            caught += 1;
        }
    }
    // sampled entries of a larger table through the library entry point
    let big = build_table(40).unwrap();
    for (n, k) in [(40, 0), (40, 39), (33, 17), (25, 1), (17, 15), (38, 36)] {
        let mut bad = big.clone();
        bad.set_entry(n, k, big.beta(n, k as i64) + 1).unwrap();
        let report = verify_table(&bad, &opts);
        match report.first_failure() {
            Some(f) if f.n == n && f.k == k => caught += 1,
            other => return Err(format!("n_max 40: ({n}, {k}) reported as {other:?}")),
        }
    }
    Ok(format!(
        "{caught} single-entry corruptions caught with exit 1 and (n, k) named"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 golden rows", golden_rows),
        ("2 five-route agreement n<=40", route_agreement),
        ("3 property suite n<=200", property_suite),
        ("4 identities n<=60", identities),
        ("5 W round trip", residual_round_trip),
        ("6 derivative cross-checks", derivative_cross_checks),
        ("7 Bernstein sign scan", bernstein_sign_scan),
        ("8 series form of p_n", series_form),
        ("9 fault injection", fault_injection),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(msg) => println!("criterion {name}: PASS ({msg})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({msg})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
