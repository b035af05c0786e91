//! Closed-form routes to `beta(n, k)` and the identities relating them.
//!
//! All routes share the shape `beta(n, k) = sum_{m<=k} C(2n-1, k-m) * t(n, m)`
//! where `t(n, m)` is written in a different family of special numbers:
//!
//! | route      | `t(n, m)`                                                   |
//! |------------|-------------------------------------------------------------|
//! | explicit   | `(1/m!) sum_q C(m,q) (-1)^q (q+n)^(m+n-1)`                  |
//! | rstirling  | `(-1)^m {2n-1+m brace n+m}_n`                               |
//! | bernoulli  | `(-1)^m C(m+n-1, n-1) B_{n-1}^{(-m)}(n)`                    |
//! | fdiff      | `((-1)^m / m!) Delta^m x^(m+n-1)` at `x = n`                 |
//!
//! The Carlitz route is different in kind: `beta(n, k) = (-1)^k B(n-1, n-1-k, n)`
//! with `B` given by a three-term recurrence.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::exact::{
    binomial, double_factorial, exact_div, factorial, into_integer, sign_pow, upow, ExactInt,
    ExactRat,
};
use crate::table::{build_table, CoefficientTable};

fn check_index(n: usize, k: usize) -> Result<()> {
    if n == 0 || k >= n {
        return Err(domain(format!(
            "need 0 <= k <= n-1 with n >= 1, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

fn rat(v: ExactInt) -> ExactRat {
    ExactRat::from_integer(v)
}

/// `beta(n, k)` from the explicit double sum, assembled in rationals.
pub fn beta_explicit(n: usize, k: usize) -> Result<ExactInt> {
    check_index(n, k)?;
    let nu = n as u64;
    let mut total = ExactRat::zero();
    for m in 0..=k as u64 {
        let inner = (0..=m).fold(ExactInt::zero(), |acc, q| {
            acc + binomial(m as i64, q as i64) * sign_pow(q) * upow(q + nu, m + nu - 1)
        });
        let outer = binomial(2 * n as i64 - 1, k as i64 - m as i64);
        total += ExactRat::new(outer * inner, factorial(m));
    }
    into_integer(total, || format!("explicit beta({n}, {k})"))
}

/// Shifted r-Stirling number `{n+r brace m+r}_r` of the second kind:
/// `(1/m!) sum_q (-1)^(m-q) C(m,q) (q+r)^n`.
pub fn rstirling_shifted(n: u64, m: u64, r: u64) -> Result<ExactInt> {
    let sum = (0..=m).fold(ExactInt::zero(), |acc, q| {
        acc + binomial(m as i64, q as i64) * sign_pow(m - q) * upow(q + r, n)
    });
    exact_div(&sum, &factorial(m), || {
        format!("r-Stirling {{{} brace {}}}_{r}", n + r, m + r)
    })
}

/// The values `{2n-1+m brace n+m}_n` for `m = 0..count`, sharing powers and
/// binomial rows across `m`.
pub fn rstirling_diagonal(n: usize, count: usize) -> Result<Vec<ExactInt>> {
    let nu = n as u64;
    // powers[q] = (q+n)^(n-1+m), advanced in place as m grows
    let mut powers: Vec<ExactInt> = Vec::with_capacity(count);
    let mut pascal: Vec<ExactInt> = Vec::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    let mut m_fact = ExactInt::one();
    for m in 0..count as u64 {
        for (q, p) in powers.iter_mut().enumerate() {
            *p *= q as u64 + nu;
        }
        powers.push(upow(m + nu, nu - 1 + m));
        advance_pascal(&mut pascal);
        if m > 0 {
            m_fact *= m;
        }
        let sum =
            powers
                .iter()
                .zip(&pascal)
                .enumerate()
                .fold(ExactInt::zero(), |acc, (q, (p, c))| {
                    if (m - q as u64).is_multiple_of(2) {
                        acc + c * p
                    } else {
                        acc - c * p
                    }
                });
        out.push(exact_div(&sum, &m_fact, || {
            format!("r-Stirling diagonal n = {n}, m = {m}")
        })?);
    }
    Ok(out)
}

/// Replaces Pascal row `m` with row `m+1` (an empty vector becomes row 0).
fn advance_pascal(row: &mut Vec<ExactInt>) {
    for i in (1..row.len()).rev() {
        let prev = row[i - 1].clone();
        row[i] += prev;
    }
    row.push(ExactInt::one());
}

/// `C(2n-1, j)` for `j = 0..len`.
fn odd_binomial_row(n: usize, len: usize) -> Vec<ExactInt> {
    (0..len as i64)
        .map(|j| binomial(2 * n as i64 - 1, j))
        .collect()
}

/// `beta(n, k) = sum_m (-1)^m C(2n-1, k-m) {2n-1+m brace n+m}_n`.
pub fn beta_rstirling(n: usize, k: usize) -> Result<ExactInt> {
    check_index(n, k)?;
    let nu = n as u64;
    let mut total = ExactInt::zero();
    for m in 0..=k as u64 {
        let s = rstirling_shifted(nu - 1 + m, m, nu)?;
        total += binomial(2 * n as i64 - 1, k as i64 - m as i64) * sign_pow(m) * s;
    }
    Ok(total)
}

/// Higher-order Bernoulli polynomial at negative integer order,
/// `B_order^{(-m)}(r) = order!/(m+order)! sum_q (-1)^(m-q) C(m,q) (q+r)^(m+order)`.
pub fn bernoulli_higher(order: u64, m: u64, r: &ExactInt) -> ExactRat {
    let sum = (0..=m).fold(ExactInt::zero(), |acc, q| {
        let base: ExactInt = r + q;
        acc + binomial(m as i64, q as i64)
            * sign_pow(m - q)
            * num_traits::pow(base, (m + order) as usize)
    });
    ExactRat::new(factorial(order) * sum, factorial(m + order))
}

/// `beta(n, k) = sum_m (-1)^m C(2n-1, k-m) C(m+n-1, n-1) B_{n-1}^{(-m)}(n)`.
pub fn beta_bernoulli(n: usize, k: usize) -> Result<ExactInt> {
    check_index(n, k)?;
    let nu = n as u64;
    let r = ExactInt::from(nu);
    let mut total = ExactRat::zero();
    for m in 0..=k as u64 {
        let weight = binomial(2 * n as i64 - 1, k as i64 - m as i64)
            * binomial((m + nu - 1) as i64, (nu - 1) as i64)
            * sign_pow(m);
        total += rat(weight) * bernoulli_higher(nu - 1, m, &r);
    }
    into_integer(total, || format!("Bernoulli-route beta({n}, {k})"))
}

/// `Delta^m x^(m+n-1)` at `x = n`, by repeated differencing of sampled values.
pub fn forward_diff_power(m: u64, n: u64) -> ExactInt {
    let exp = m + n - 1;
    let mut values: Vec<ExactInt> = (0..=m).map(|i| upow(n + i, exp)).collect();
    for _ in 0..m {
        values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    values.pop().unwrap_or_else(ExactInt::zero)
}

/// `beta(n, k) = sum_m C(2n-1, k-m) ((-1)^m / m!) Delta^m n^(m+n-1)`.
pub fn beta_forward_diff(n: usize, k: usize) -> Result<ExactInt> {
    check_index(n, k)?;
    let nu = n as u64;
    let mut total = ExactRat::zero();
    for m in 0..=k as u64 {
        let num = binomial(2 * n as i64 - 1, k as i64 - m as i64)
            * sign_pow(m)
            * forward_diff_power(m, nu);
        total += ExactRat::new(num, factorial(m));
    }
    into_integer(total, || format!("forward-difference beta({n}, {k})"))
}

/// Rows `0..=kappa_max` of Carlitz's `B(kappa, j, lambda)` at one fixed integer `lambda`.
///
/// `B(kappa, j) = (kappa + j - lambda) B(kappa-1, j) + (kappa - j + lambda) B(kappa-1, j-1)`
/// with `B(0, j) = [j = 0]`.
#[derive(Debug, Clone)]
pub struct CarlitzTriangle {
    lambda: ExactInt,
    rows: Vec<Vec<ExactInt>>,
}

impl CarlitzTriangle {
    pub fn new(kappa_max: usize, lambda: ExactInt) -> Self {
        let mut tri = Self {
            lambda,
            rows: vec![vec![ExactInt::one()]],
        };
        tri.extend_to(kappa_max);
        tri
    }

    pub fn extend_to(&mut self, kappa_max: usize) {
        while self.rows.len() <= kappa_max {
            let kappa = self.rows.len() as i64;
            let prev = &self.rows[kappa as usize - 1];
            let at = |j: i64| -> ExactInt {
                if j >= 0 && (j as usize) < prev.len() {
                    prev[j as usize].clone()
                } else {
                    ExactInt::zero()
                }
            };
            let row = (0..=kappa)
                .map(|j| {
                    let a: ExactInt = ExactInt::from(kappa + j) - &self.lambda;
                    let b: ExactInt = ExactInt::from(kappa - j) + &self.lambda;
                    a * at(j) + b * at(j - 1)
                })
                .collect();
            self.rows.push(row);
        }
    }

    pub fn lambda(&self) -> &ExactInt {
        &self.lambda
    }

    pub fn kappa_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `B(kappa, j, lambda)`, zero outside `0 <= j <= kappa`.
    pub fn get(&self, kappa: usize, j: i64) -> ExactInt {
        match self.rows.get(kappa) {
            Some(row) if j >= 0 && (j as usize) < row.len() => row[j as usize].clone(),
            _ => ExactInt::zero(),
        }
    }

    pub fn row(&self, kappa: usize) -> Option<&[ExactInt]> {
        self.rows.get(kappa).map(Vec::as_slice)
    }
}

pub fn carlitz_b(kappa: usize, j: i64, lambda: &ExactInt) -> ExactInt {
    if j < 0 || j as usize > kappa {
        return ExactInt::zero();
    }
    CarlitzTriangle::new(kappa, lambda.clone()).get(kappa, j)
}

/// `beta(n, k) = (-1)^k B(n-1, n-1-k, n)`.
pub fn beta_carlitz(n: usize, k: usize) -> Result<ExactInt> {
    check_index(n, k)?;
    Ok(carlitz_b(n - 1, (n - 1 - k) as i64, &ExactInt::from(n)) * sign_pow(k as u64))
}

/// Full row `n` via one Carlitz triangle at `lambda = n`.
pub fn carlitz_row(n: usize) -> Result<Vec<ExactInt>> {
    check_index(n, 0)?;
    let tri = CarlitzTriangle::new(n - 1, ExactInt::from(n));
    Ok((0..n)
        .map(|k| tri.get(n - 1, (n - 1 - k) as i64) * sign_pow(k as u64))
        .collect())
}

/// `sum_j B(kappa, j, lambda)`; equals `(2 kappa - 1)!!` for every `lambda`.
pub fn carlitz_row_sum(kappa: usize, lambda: &ExactInt) -> ExactInt {
    CarlitzTriangle::new(kappa, lambda.clone())
        .row(kappa)
        .map(|r| r.iter().sum())
        .unwrap_or_else(ExactInt::zero)
}

/// Inverse of the r-Stirling route:
/// `{2n-1+m brace n+m}_n = sum_k (-1)^k beta(n, k) C(2n-2+m-k, 2n-2)`.
pub fn rstirling_from_beta(n: usize, m: usize, table: &CoefficientTable) -> Result<ExactInt> {
    let row = table.row(n)?;
    let base = 2 * n as i64 - 2;
    Ok(row
        .iter()
        .enumerate()
        .fold(ExactInt::zero(), |acc, (k, b)| {
            acc + b * sign_pow(k as u64) * binomial(base + m as i64 - k as i64, base)
        }))
}

/// [`rstirling_from_beta`] for `m = 0..count` at once.
pub fn rstirling_column_from_beta(
    n: usize,
    count: usize,
    table: &CoefficientTable,
) -> Result<Vec<ExactInt>> {
    let row = table.row(n)?;
    let base = 2 * n as u64 - 2;
    // weights[j] = C(base + j, base)
    let mut weights = Vec::with_capacity(count);
    let mut c = ExactInt::one();
    for j in 0..count as u64 {
        if j > 0 {
            c = c * (base + j) / j;
        }
        weights.push(c.clone());
    }
    Ok((0..count)
        .map(|m| {
            row.iter()
                .enumerate()
                .take(m + 1)
                .fold(ExactInt::zero(), |acc, (k, b)| {
                    let term = b * &weights[m - k];
                    if k % 2 == 0 {
                        acc + term
                    } else {
                        acc - term
                    }
                })
        })
        .collect())
}

/// Both sides of `sum_m (-1)^m C(2n-1, n-m-1) {2n-1+m brace n+m}_n = (n-1)!`.
pub fn factorial_identity(n: usize) -> Result<(ExactInt, ExactInt)> {
    if n == 0 {
        return Err(domain("factorial identity needs n >= 1"));
    }
    let diagonal = rstirling_diagonal(n, n)?;
    let weights = odd_binomial_row(n, n);
    let left = diagonal
        .iter()
        .enumerate()
        .fold(ExactInt::zero(), |acc, (m, s)| {
            acc + &weights[n - m - 1] * sign_pow(m as u64) * s
        });
    Ok((left, factorial(n as u64 - 1)))
}

/// Reassembles row `n` from r-Stirling values `s[m] = {2n-1+m brace n+m}_n`, `m < n`.
pub fn beta_row_from_rstirling(n: usize, s: &[ExactInt]) -> Result<Vec<ExactInt>> {
    if s.len() < n {
        return Err(domain(format!(
            "need {n} r-Stirling values, got {}",
            s.len()
        )));
    }
    let weights = odd_binomial_row(n, n);
    Ok((0..n)
        .map(|k| {
            (0..=k).fold(ExactInt::zero(), |acc, m| {
                let term = &weights[k - m] * &s[m];
                if m % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect())
}

/// Independent constructions of a `beta` row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    Recurrence,
    Explicit,
    RStirling,
    Bernoulli,
    ForwardDiff,
    Carlitz,
}

impl Route {
    pub const ALL: [Route; 6] = [
        Route::Recurrence,
        Route::Explicit,
        Route::RStirling,
        Route::Bernoulli,
        Route::ForwardDiff,
        Route::Carlitz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Recurrence => "recurrence",
            Route::Explicit => "explicit",
            Route::RStirling => "rstirling",
            Route::Bernoulli => "bernoulli",
            Route::ForwardDiff => "fdiff",
            Route::Carlitz => "carlitz",
        }
    }

    /// `beta(n, k)` by this route.
    pub fn beta(self, n: usize, k: usize) -> Result<ExactInt> {
        match self {
            Route::Recurrence => {
                check_index(n, k)?;
                Ok(build_table(n)?.beta(n, k as i64))
            }
            Route::Explicit => beta_explicit(n, k),
            Route::RStirling => beta_rstirling(n, k),
            Route::Bernoulli => beta_bernoulli(n, k),
            Route::ForwardDiff => beta_forward_diff(n, k),
            Route::Carlitz => beta_carlitz(n, k),
        }
    }

    /// Row `n` computed from scratch by this route.
    pub fn row(self, n: usize) -> Result<Vec<ExactInt>> {
        match self {
            Route::Recurrence => Ok(build_table(n)?.into_rows().pop().unwrap_or_default()),
            Route::Carlitz => carlitz_row(n),
            _ => (0..n).map(|k| self.beta(n, k)).collect(),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "recurrence" => Ok(Route::Recurrence),
            "explicit" => Ok(Route::Explicit),
            "rstirling" => Ok(Route::RStirling),
            "bernoulli" => Ok(Route::Bernoulli),
            "fdiff" => Ok(Route::ForwardDiff),
            "carlitz" => Ok(Route::Carlitz),
            other => Err(domain(format!("unknown route {other:?}"))),
        }
    }
}

/// `(2 kappa - 1)!!`, the Carlitz row sum.
pub fn carlitz_row_sum_expected(kappa: usize) -> ExactInt {
    double_factorial(2 * kappa as i64 - 1).expect("argument is at least -1")
}
