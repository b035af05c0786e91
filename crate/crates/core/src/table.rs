//! The `beta(n, k)` triangle built by the derivative-polynomial recurrence.
//!
//! Differentiating `p_n` gives `p_{n+1}(w) = -(n w + 3n - 1) p_n(w) + (1 + w) p_n'(w)`
//! with `p_1 = 1`. Extracting the coefficient of `w^k` on both sides yields
//!
//! ```text
//! beta(n+1, k) = (3n - k - 1) beta(n, k) + n beta(n, k-1) - (k+1) beta(n, k+1)
//! ```
//!
//! valid for every `0 <= k <= n` once out-of-range entries read as zero.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::exact::{factorial, sign_pow, upow, ExactInt, ExactRat};

/// Dense triangle of `beta(n, k)` for `1 <= n <= n_max`, `0 <= k <= n-1`.
#[derive(Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    rows: Vec<Vec<ExactInt>>,
}

impl fmt::Debug for CoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientTable")
            .field("n_max", &self.n_max())
            .finish()
    }
}

impl CoefficientTable {
    /// Wraps externally supplied rows; row `i` must hold `i + 1` entries.
    pub fn from_rows(rows: Vec<Vec<ExactInt>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(domain("a coefficient table needs at least one row"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(domain(format!(
                    "row n = {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    i + 1
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    /// Row `n` (1-based), entries `beta(n, 0..n)`.
    pub fn row(&self, n: usize) -> Result<&[ExactInt]> {
        if n == 0 || n > self.n_max() {
            return Err(domain(format!("row n = {n} outside 1..={}", self.n_max())));
        }
        Ok(&self.rows[n - 1])
    }

    /// `beta(n, k)`, zero for `k < 0` or `k >= n`.
    pub fn beta(&self, n: usize, k: i64) -> ExactInt {
        match self.row(n) {
            Ok(row) if k >= 0 && (k as usize) < row.len() => row[k as usize].clone(),
            _ => ExactInt::zero(),
        }
    }

    /// Iterates `(n, row)` in increasing `n`.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &[ExactInt])> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| (i + 1, r.as_slice()))
    }

    pub fn into_rows(self) -> Vec<Vec<ExactInt>> {
        self.rows
    }

    /// Replaces one entry. Used for fault injection.
    pub fn set_entry(&mut self, n: usize, k: usize, value: ExactInt) -> Result<()> {
        self.row(n)?;
        let row = &mut self.rows[n - 1];
        if k >= row.len() {
            return Err(domain(format!("k = {k} outside row n = {n}")));
        }
        row[k] = value;
        Ok(())
    }

    pub fn polynomial(&self, n: usize) -> Result<SignedPolynomial> {
        Ok(SignedPolynomial::from_row(n, self.row(n)?))
    }
}

/// `p_n(w)` with the sign applied: coefficient of `w^k` is `(-1)^(n-1) beta(n, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPolynomial {
    pub n: usize,
    pub coeffs: Vec<ExactInt>,
}

impl SignedPolynomial {
    pub fn from_row(n: usize, row: &[ExactInt]) -> Self {
        let sign = sign_pow(n as u64 - 1);
        let coeffs = row.iter().map(|b| b * sign).collect();
        Self { n, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation in exact rationals.
    pub fn eval(&self, w: &ExactRat) -> ExactRat {
        self.coeffs.iter().rev().fold(ExactRat::zero(), |acc, c| {
            acc * w + ExactRat::from_integer(c.clone())
        })
    }
}

/// One step of the general recurrence: row `n+1` from row `n`.
pub fn next_row(n: usize, row: &[ExactInt]) -> Vec<ExactInt> {
    let at = |k: i64| -> ExactInt {
        if k >= 0 && (k as usize) < row.len() {
            row[k as usize].clone()
        } else {
            ExactInt::zero()
        }
    };
    let n_i = n as i64;
    (0..=n_i)
        .map(|k| (3 * n_i - k - 1) * at(k) + n_i * at(k - 1) - (k + 1) * at(k + 1))
        .collect()
}

/// Row `n+1` from row `n` using the recurrence only on its interior
/// `2 <= k <= n-2` and the closed boundary formulas at `k = 0, 1, n-1, n`.
pub fn next_row_boundary_seeded(n: usize, row: &[ExactInt]) -> Result<Vec<ExactInt>> {
    if n < 3 || row.len() != n {
        return Err(domain(format!(
            "boundary-seeded derivation needs n >= 3 and a row of length n (n = {n}, len = {})",
            row.len()
        )));
    }
    let next = n + 1;
    let n_i = n as i64;
    let mut out = Vec::with_capacity(next);
    out.push(boundary_value(next, BoundaryKind::First)?);
    out.push(boundary_value(next, BoundaryKind::Second)?);
    for k in 2..=(n - 2) {
        let ki = k as i64;
        out.push((3 * n_i - ki - 1) * &row[k] + n_i * &row[k - 1] - (ki + 1) * &row[k + 1]);
    }
    out.push(boundary_value(next, BoundaryKind::SecondLast)?);
    out.push(boundary_value(next, BoundaryKind::Last)?);
    Ok(out)
}

/// Builds rows `1..=n_max` starting from `p_1 = 1`.
pub fn build_table(n_max: usize) -> Result<CoefficientTable> {
    if n_max == 0 {
        return Err(domain("n_max must be at least 1"));
    }
    let mut rows: Vec<Vec<ExactInt>> = Vec::with_capacity(n_max);
    rows.push(vec![ExactInt::one()]);
    for n in 1..n_max {
        let next = next_row(n, &rows[n - 1]);
        rows.push(next);
    }
    Ok(CoefficientTable { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// `beta(n, 0) = n^(n-1)`
    First,
    /// `beta(n, 1) = 3 n^n - (n+1)^n - n^(n-1)`
    Second,
    /// `beta(n, n-1) = (n-1)!`
    Last,
    /// `beta(n, n-2) = (2n-2) (n-1)!`
    SecondLast,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 4] = [
        BoundaryKind::First,
        BoundaryKind::Second,
        BoundaryKind::SecondLast,
        BoundaryKind::Last,
    ];

    /// Column index the formula describes in row `n`.
    pub fn index(self, n: usize) -> usize {
        match self {
            BoundaryKind::First => 0,
            BoundaryKind::Second => 1,
            BoundaryKind::SecondLast => n - 2,
            BoundaryKind::Last => n - 1,
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            BoundaryKind::First | BoundaryKind::Last => 1,
            BoundaryKind::Second | BoundaryKind::SecondLast => 2,
        }
    }
}

pub fn boundary_value(n: usize, kind: BoundaryKind) -> Result<ExactInt> {
    if n < kind.min_n() {
        return Err(domain(format!(
            "{kind:?} boundary needs n >= {}, got {n}",
            kind.min_n()
        )));
    }
    let nu = n as u64;
    Ok(match kind {
        BoundaryKind::First => upow(nu, nu - 1),
        BoundaryKind::Second => 3 * upow(nu, nu) - upow(nu + 1, nu) - upow(nu, nu - 1),
        BoundaryKind::Last => factorial(nu - 1),
        BoundaryKind::SecondLast => (2 * nu - 2) * factorial(nu - 1),
    })
}

/// `p_n(w)` evaluated exactly.
pub fn poly_eval_exact(n: usize, table: &CoefficientTable, w: &ExactRat) -> Result<ExactRat> {
    Ok(table.polynomial(n)?.eval(w))
}

/// `sum_k (-1)^k beta(n, k)`, equal to `(2n-3)!!`.
pub fn alternating_sum(n: usize, table: &CoefficientTable) -> Result<ExactInt> {
    Ok(table
        .row(n)?
        .iter()
        .enumerate()
        .fold(ExactInt::zero(), |acc, (k, b)| acc + b * sign_pow(k as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::double_factorial;
    use crate::Error;

    fn ints(v: &[i64]) -> Vec<ExactInt> {
        v.iter().map(|&x| ExactInt::from(x)).collect()
    }

    fn rat(n: i64) -> ExactRat {
        ExactRat::from_integer(n.into())
    }

    #[test]
    fn golden_rows() {
        let t = build_table(5).unwrap();
        assert_eq!(t.row(1).unwrap(), ints(&[1]).as_slice());
        assert_eq!(t.row(2).unwrap(), ints(&[2, 1]).as_slice());
        assert_eq!(t.row(3).unwrap(), ints(&[9, 8, 2]).as_slice());
        assert_eq!(t.row(4).unwrap(), ints(&[64, 79, 36, 6]).as_slice());
        assert_eq!(
            t.row(5).unwrap(),
            ints(&[625, 974, 622, 192, 24]).as_slice()
        );
    }

    #[test]
    fn row_six_and_seven_match_explicit_sum_oracle() {
        // frozen from a fractions-based evaluation of the explicit double sum
        let t = build_table(7).unwrap();
        assert_eq!(
            t.row(6).unwrap(),
            ints(&[7776, 14543, 11758, 5126, 1200, 120]).as_slice()
        );
        assert_eq!(
            t.row(7).unwrap(),
            ints(&[117649, 255828, 248250, 137512, 45756, 8640, 720]).as_slice()
        );
    }

    #[test]
    fn zero_rows_rejected() {
        assert!(matches!(build_table(0), Err(Error::Domain(_))));
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(boundary_value(5, BoundaryKind::First).unwrap(), 625.into());
        assert_eq!(
            boundary_value(4, BoundaryKind::SecondLast).unwrap(),
            36.into()
        );
        assert_eq!(
            boundary_value(6, BoundaryKind::Second).unwrap(),
            14543.into()
        );
        assert_eq!(boundary_value(1, BoundaryKind::Last).unwrap(), 1.into());
        assert!(boundary_value(1, BoundaryKind::Second).is_err());
        assert!(boundary_value(1, BoundaryKind::SecondLast).is_err());
    }

    #[test]
    fn boundaries_agree_with_table() {
        let t = build_table(60).unwrap();
        for (n, row) in t.rows() {
            for kind in BoundaryKind::ALL {
                if n >= kind.min_n() {
                    assert_eq!(
                        row[kind.index(n)],
                        boundary_value(n, kind).unwrap(),
                        "n={n} {kind:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn boundary_seeded_derivation_matches() {
        let t = build_table(80).unwrap();
        for n in 3..80 {
            let seeded = next_row_boundary_seeded(n, t.row(n).unwrap()).unwrap();
            assert_eq!(seeded.as_slice(), t.row(n + 1).unwrap(), "n={n}");
        }
        assert!(next_row_boundary_seeded(2, t.row(2).unwrap()).is_err());
    }

    #[test]
    fn exact_evaluation() {
        let t = build_table(5).unwrap();
        assert_eq!(poly_eval_exact(3, &t, &rat(-1)).unwrap(), rat(3));
        assert_eq!(poly_eval_exact(2, &t, &rat(0)).unwrap(), rat(-2));
        assert_eq!(poly_eval_exact(4, &t, &rat(-1)).unwrap(), rat(-15));
        let half = ExactRat::new(1.into(), 2.into());
        // p_3(1/2) = 9 + 4 + 1/2
        assert_eq!(
            poly_eval_exact(3, &t, &half).unwrap(),
            ExactRat::new(27.into(), 2.into())
        );
        assert!(poly_eval_exact(6, &t, &half).is_err());
    }

    #[test]
    fn signed_polynomial_shape() {
        let t = build_table(30).unwrap();
        for n in 1..=30 {
            let p = t.polynomial(n).unwrap();
            assert_eq!(p.degree(), n - 1);
            let lead = p.coeffs.last().unwrap();
            assert_eq!(lead * sign_pow(n as u64 - 1), factorial(n as u64 - 1));
            let at_minus_one = p.eval(&rat(-1));
            let expected = double_factorial(2 * n as i64 - 3).unwrap() * sign_pow(n as u64 - 1);
            assert_eq!(at_minus_one, ExactRat::from_integer(expected));
        }
    }

    #[test]
    fn alternating_sums() {
        let t = build_table(40).unwrap();
        assert_eq!(alternating_sum(2, &t).unwrap(), 1.into());
        assert_eq!(alternating_sum(3, &t).unwrap(), 3.into());
        assert_eq!(alternating_sum(4, &t).unwrap(), 15.into());
        for n in 1..=40 {
            assert_eq!(
                alternating_sum(n, &t).unwrap(),
                double_factorial(2 * n as i64 - 3).unwrap()
            );
        }
    }

    #[test]
    fn from_rows_validates_shape() {
        assert!(CoefficientTable::from_rows(vec![]).is_err());
        assert!(CoefficientTable::from_rows(vec![ints(&[1]), ints(&[2])]).is_err());
        let t = CoefficientTable::from_rows(vec![ints(&[1]), ints(&[2, 1])]).unwrap();
        assert_eq!(t, build_table(2).unwrap());
        assert_eq!(t.beta(2, 5), ExactInt::zero());
        assert_eq!(t.beta(2, -1), ExactInt::zero());
    }
}
