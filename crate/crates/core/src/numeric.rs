//! Binary64 engine for the principal branch `W` on `[0, inf)` and its derivatives.
//!
//! Three derivative routes are provided: the closed form through `p_n`, the
//! Maclaurin series of `W` differentiated term by term, and a Richardson
//! extrapolated central finite difference used as an independent oracle.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail every guard

use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{domain, Error, Result};
use crate::exact::binomial;
use crate::table::CoefficientTable;

const EPS: f64 = f64::EPSILON;
const HALLEY_MAX_ITER: u32 = 50;
const SERIES_MAX_TERMS: usize = 10_000;
/// Largest derivative order for which the finite-difference oracle is trusted.
pub const FD_MAX_ORDER: usize = 5;
/// Convergence guard for the series form of `p_n`.
pub const PN_SERIES_MAX_ABS_W: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WEvaluation {
    pub x: f64,
    pub w: f64,
    /// `w e^w - x`, formed with a fused multiply-add.
    pub residual: f64,
    pub iterations: u32,
}

impl WEvaluation {
    /// `|residual| <= 4 eps max(x, 1)`.
    pub fn within_residual_bound(&self) -> bool {
        self.residual.abs() <= 4.0 * EPS * self.x.max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivativeRoute {
    ClosedForm,
    Taylor,
    FiniteDifference,
}

impl DerivativeRoute {
    pub fn name(self) -> &'static str {
        match self {
            DerivativeRoute::ClosedForm => "closed_form",
            DerivativeRoute::Taylor => "taylor",
            DerivativeRoute::FiniteDifference => "finite_difference",
        }
    }
}

impl fmt::Display for DerivativeRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeValue {
    pub n: usize,
    pub x: f64,
    pub value: f64,
    pub route: DerivativeRoute,
}

/// Principal branch `W(x)` for `x >= 0` by Halley iteration from `ln(1 + x)`.
pub fn lambert_w(x: f64) -> Result<WEvaluation> {
    if !x.is_finite() || x < 0.0 {
        return Err(domain(format!("lambert_w needs finite x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(WEvaluation {
            x,
            w: 0.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    let mut w = x.ln_1p();
    for iterations in 1..=HALLEY_MAX_ITER {
        // f, f', f'' all divided by e^w to stay finite for large x
        let f = w - x * (-w).exp();
        let wp1 = w + 1.0;
        let step = f / (wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 2.0 * EPS * (1.0 + w.abs()) {
            let residual = w.mul_add(w.exp(), -x);
            return Ok(WEvaluation {
                x,
                w,
                residual,
                iterations,
            });
        }
    }
    Err(Error::Numeric(format!(
        "Halley iteration for W({x}) did not converge"
    )))
}

fn row_as_f64(table: &CoefficientTable, n: usize) -> Result<Vec<f64>> {
    let row = table.row(n)?;
    row.iter()
        .map(|b| match b.to_f64() {
            Some(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Numeric(format!(
                "coefficient of p_{n} exceeds binary64 range"
            ))),
        })
        .collect()
}

/// `p_n(w)` in binary64 by Horner, coefficients converted from the exact table.
pub fn pn_eval_f64(n: usize, w: f64, table: &CoefficientTable) -> Result<f64> {
    let coeffs = row_as_f64(table, n)?;
    let magnitude = coeffs.iter().rev().fold(0.0, |acc, c| acc * w + c);
    Ok(if n % 2 == 1 { magnitude } else { -magnitude })
}

/// `d^n W / dx^n = exp(-n W) p_n(W) / (1 + W)^(2n-1)`.
pub fn w_derivative(n: usize, x: f64, table: &CoefficientTable) -> Result<DerivativeValue> {
    if n == 0 || n > table.n_max() {
        return Err(domain(format!(
            "derivative order {n} outside 1..={}",
            table.n_max()
        )));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!(
            "closed-form derivative needs finite x > 0, got {x}"
        )));
    }
    let w = lambert_w(x)?.w;
    let p = pn_eval_f64(n, w, table)?;
    let nf = n as f64;
    let value = (-nf * w).exp() * p / (1.0 + w).powi(2 * n as i32 - 1);
    Ok(DerivativeValue {
        n,
        x,
        value,
        route: DerivativeRoute::ClosedForm,
    })
}

/// Term-by-term derivative of `W(x) = sum_m (-m)^(m-1) x^m / m!` for `|x| < 1/e`.
pub fn w_derivative_taylor(n: usize, x: f64, rel_tol: f64) -> Result<DerivativeValue> {
    if n == 0 {
        return Err(domain("derivative order must be at least 1"));
    }
    if !(x.abs() < (-1.0f64).exp()) {
        return Err(domain(format!("Taylor route needs |x| < 1/e, got {x}")));
    }
    if !(rel_tol > 0.0) {
        return Err(domain(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let nf = n as f64;
    // m = n term: (-n)^(n-1)
    let lead = ((nf - 1.0) * nf.ln()).exp();
    let mut term = if n % 2 == 1 { lead } else { -lead };
    if !term.is_finite() {
        return Err(Error::Numeric(format!(
            "leading Taylor term overflows for n = {n}"
        )));
    }
    let mut sum = 0.0;
    let mut small = 0;
    for j in 0..SERIES_MAX_TERMS {
        sum += term;
        let m = (n + j) as f64;
        // t_{m+1} / t_m = -(m+1) ((m+1)/m)^(m-1) x / (m+1-n)
        let growth = ((m - 1.0) * (1.0 / m).ln_1p()).exp();
        term *= -(m + 1.0) * growth * x / (j as f64 + 1.0);
        if term.abs() < rel_tol * sum.abs() {
            small += 1;
            if small == 2 {
                return Ok(DerivativeValue {
                    n,
                    x,
                    value: sum,
                    route: DerivativeRoute::Taylor,
                });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Numeric(format!(
        "Taylor series for n = {n}, x = {x} hit the term cap"
    )))
}

fn central_difference(n: usize, x: f64, h: f64) -> Result<f64> {
    let half = n as f64 / 2.0;
    let mut acc = 0.0;
    for i in 0..=n {
        let c = binomial(n as i64, i as i64).to_f64().unwrap_or(f64::NAN);
        let fx = lambert_w(x + (half - i as f64) * h)?.w;
        acc += if i % 2 == 0 { c * fx } else { -c * fx };
    }
    Ok(acc / h.powi(n as i32))
}

/// Order-`n` central difference of `W` with one Richardson step.
pub fn w_derivative_fd(n: usize, x: f64) -> Result<DerivativeValue> {
    if n == 0 || n > FD_MAX_ORDER {
        return Err(domain(format!(
            "finite-difference oracle supports 1 <= n <= {FD_MAX_ORDER}, got {n}"
        )));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!(
            "finite-difference route needs finite x > 0, got {x}"
        )));
    }
    // Richardson leaves an O(h^4) truncation error, balanced against eps / h^n roundoff
    let h = x.max(1.0) * EPS.powf(1.0 / (n as f64 + 4.0));
    if x - (n as f64 / 2.0) * h < 0.0 {
        return Err(domain(format!(
            "stencil for n = {n} leaves x >= 0 at x = {x}"
        )));
    }
    let coarse = central_difference(n, x, h)?;
    let fine = central_difference(n, x, h / 2.0)?;
    let value = (4.0 * fine - coarse) / 3.0;
    Ok(DerivativeValue {
        n,
        x,
        value,
        route: DerivativeRoute::FiniteDifference,
    })
}

/// `p_n(w) = (1+w)^(2n-1) sum_s (-1)^(n+s-1) (n+s)^(n+s-1) w^s e^((n+s) w) / s!`.
pub fn pn_series_eval(n: usize, w: f64, rel_tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("polynomial index must be at least 1"));
    }
    if !(w.abs() <= PN_SERIES_MAX_ABS_W) {
        return Err(domain(format!(
            "series form needs |w| <= {PN_SERIES_MAX_ABS_W}, got {w}"
        )));
    }
    if !(rel_tol > 0.0) {
        return Err(domain(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let nf = n as f64;
    let lead = ((nf - 1.0) * nf.ln() + nf * w).exp();
    let mut term = if n % 2 == 1 { lead } else { -lead };
    let we = w * w.exp();
    let mut sum = 0.0;
    let mut small = 0;
    for s in 0..SERIES_MAX_TERMS {
        sum += term;
        let a = (n + s) as f64;
        // t_{s+1} / t_s = -(a+1) ((a+1)/a)^(a-1) w e^w / (s+1)
        let growth = ((a - 1.0) * (1.0 / a).ln_1p()).exp();
        term *= -(a + 1.0) * growth * we / (s as f64 + 1.0);
        if term.abs() < rel_tol * sum.abs() {
            small += 1;
            if small == 2 {
                return Ok((1.0 + w).powi(2 * n as i32 - 1) * sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Numeric(format!(
        "series for p_{n}({w}) hit the term cap"
    )))
}

/// `points` values spaced evenly in `log10` between `lo` and `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..points)
                .map(|i| 10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64))
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignViolation {
    pub n: usize,
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BernsteinReport {
    pub checked: usize,
    /// `(n, x)` where `(-1)^(n-1) W^(n)(x) <= 0`.
    pub violations: Vec<SignViolation>,
    /// Consecutive grid indices `i` where `W'(x_i) <= W'(x_{i+1})` despite `x_i < x_{i+1}`.
    pub monotonicity_violations: Vec<usize>,
}

impl BernsteinReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.monotonicity_violations.is_empty()
    }
}

/// Sign scan of `(-1)^(n-1) d^n W / dx^n` over `n <= n_max` and the grid,
/// plus strict decrease of `W'` along the sorted grid.
pub fn bernstein_scan(
    n_max: usize,
    grid: &[f64],
    table: &CoefficientTable,
) -> Result<BernsteinReport> {
    if grid.is_empty() {
        return Err(domain("scan grid is empty"));
    }
    if let Some(x) = grid.iter().find(|x| !(**x > 0.0)) {
        return Err(domain(format!("scan grid must be positive, found {x}")));
    }
    if n_max == 0 || n_max > table.n_max() {
        return Err(domain(format!(
            "n_max {n_max} outside 1..={}",
            table.n_max()
        )));
    }
    let mut report = BernsteinReport::default();
    for n in 1..=n_max {
        for &x in grid {
            let value = w_derivative(n, x, table)?.value;
            let signed = if n % 2 == 1 { value } else { -value };
            report.checked += 1;
            if !(signed > 0.0) {
                report.violations.push(SignViolation { n, x, value });
            }
        }
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let first: Vec<f64> = sorted
        .iter()
        .map(|&x| w_derivative(1, x, table).map(|d| d.value))
        .collect::<Result<_>>()?;
    report.monotonicity_violations = first
        .windows(2)
        .enumerate()
        .filter(|(_, w)| !(w[0] > w[1]))
        .map(|(i, _)| i)
        .collect();
    Ok(report)
}
