//! Exact checks of positivity, log-concavity, unimodality and the ratio
//! inequalities on integer sequences. No floating point in this module.

use std::fmt;

use num_traits::Signed;

use crate::error::{domain, Result};
use crate::exact::ExactInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Positive,
    LogConcave,
    LogConcaveWeighted,
    Unimodal,
    RatioBound,
    Lemma1,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Positive => "positive",
            Property::LogConcave => "log_concave",
            Property::LogConcaveWeighted => "log_concave_weighted",
            Property::Unimodal => "unimodal",
            Property::RatioBound => "ratio_bound",
            Property::Lemma1 => "lemma1",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a check first failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// A single offending index.
    At(usize),
    /// An offending index pair `(k, m)`.
    Pair(usize, usize),
}

impl Violation {
    /// The primary index, used when reporting `(n, k, check)` triples.
    pub fn index(self) -> usize {
        match self {
            Violation::At(k) | Violation::Pair(k, _) => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: Property,
    pub holds: bool,
    pub first_violation: Option<Violation>,
    /// Leftmost maximum, reported by the unimodality check only.
    pub mode_index: Option<usize>,
}

impl PropertyReport {
    fn from_violation(property: Property, first_violation: Option<Violation>) -> Self {
        Self {
            property,
            holds: first_violation.is_none(),
            first_violation,
            mode_index: None,
        }
    }
}

fn require_positive(seq: &[ExactInt]) -> Result<()> {
    if seq.is_empty() {
        return Err(domain("empty sequence"));
    }
    if let Some(k) = seq.iter().position(|c| !c.is_positive()) {
        return Err(domain(format!("entry {k} is not positive")));
    }
    Ok(())
}

pub fn is_positive(seq: &[ExactInt]) -> Result<PropertyReport> {
    if seq.is_empty() {
        return Err(domain("empty sequence"));
    }
    let v = seq.iter().position(|c| !c.is_positive()).map(Violation::At);
    Ok(PropertyReport::from_violation(Property::Positive, v))
}

fn first_log_concave_violation(seq: &[ExactInt]) -> Option<Violation> {
    (1..seq.len().saturating_sub(1))
        .find(|&k| &seq[k - 1] * &seq[k + 1] > &seq[k] * &seq[k])
        .map(Violation::At)
}

/// `c[k-1] c[k+1] <= c[k]^2` at every interior `k`.
pub fn is_log_concave(seq: &[ExactInt]) -> Result<PropertyReport> {
    require_positive(seq)?;
    Ok(PropertyReport::from_violation(
        Property::LogConcave,
        first_log_concave_violation(seq),
    ))
}

/// Log-concavity of `k! c[k]`.
pub fn is_log_concave_weighted(seq: &[ExactInt]) -> Result<PropertyReport> {
    require_positive(seq)?;
    let weighted = weight_by_factorial(seq);
    Ok(PropertyReport::from_violation(
        Property::LogConcaveWeighted,
        first_log_concave_violation(&weighted),
    ))
}

fn weight_by_factorial(seq: &[ExactInt]) -> Vec<ExactInt> {
    let mut fact = ExactInt::from(1);
    seq.iter()
        .enumerate()
        .map(|(k, c)| {
            if k > 0 {
                fact *= k;
            }
            c * &fact
        })
        .collect()
}

/// Weakly rising then weakly falling. An empty sequence holds vacuously.
pub fn is_unimodal(seq: &[ExactInt]) -> PropertyReport {
    let mut descending = false;
    for k in 1..seq.len() {
        if seq[k] < seq[k - 1] {
            descending = true;
        } else if descending && seq[k] > seq[k - 1] {
            return PropertyReport::from_violation(Property::Unimodal, Some(Violation::At(k)));
        }
    }
    let mode = seq
        .iter()
        .enumerate()
        .fold(None::<(usize, &ExactInt)>, |best, (k, c)| match best {
            Some((_, b)) if b >= c => best,
            _ => Some((k, c)),
        })
        .map(|(k, _)| k);
    PropertyReport {
        property: Property::Unimodal,
        holds: true,
        first_violation: None,
        mode_index: mode,
    }
}

/// `(k+1) row[k+1] < (n-1) row[k]` for `0 <= k <= n-2`, strict.
pub fn check_ratio_bound(n: usize, row: &[ExactInt]) -> Result<PropertyReport> {
    if n < 3 {
        return Err(domain(format!("ratio bound needs n >= 3, got {n}")));
    }
    if row.len() != n {
        return Err(domain(format!(
            "row length {} does not match n = {n}",
            row.len()
        )));
    }
    require_positive(row)?;
    let v = (0..n - 1)
        .find(|&k| (k + 1) * &row[k + 1] >= (n - 1) * &row[k])
        .map(Violation::At);
    Ok(PropertyReport::from_violation(Property::RatioBound, v))
}

/// `c[k] c[m] >= C(k+m, k) c[0] c[k+m]` for `0 <= m <= k+1`, `k+m < len`.
///
/// Requires a positive sequence whose weighted form `k! c[k]` is log-concave.
pub fn check_lemma1(seq: &[ExactInt]) -> Result<PropertyReport> {
    require_positive(seq)?;
    let weighted = weight_by_factorial(seq);
    if let Some(v) = first_log_concave_violation(&weighted) {
        return Err(domain(format!(
            "lemma 1 precondition fails: k! c_k not log-concave at {}",
            v.index()
        )));
    }
    let len = seq.len();
    let pascal = pascal_triangle(len);
    for k in 0..len {
        for m in 0..=(k + 1) {
            if k + m >= len {
                break;
            }
            let lhs = &seq[k] * &seq[m];
            let rhs = &pascal[k + m][k] * &seq[0] * &seq[k + m];
            if lhs < rhs {
                return Ok(PropertyReport::from_violation(
                    Property::Lemma1,
                    Some(Violation::Pair(k, m)),
                ));
            }
        }
    }
    Ok(PropertyReport::from_violation(Property::Lemma1, None))
}

/// Rows `0..len` of Pascal's triangle.
fn pascal_triangle(len: usize) -> Vec<Vec<ExactInt>> {
    let mut rows: Vec<Vec<ExactInt>> = Vec::with_capacity(len);
    for a in 0..len {
        let mut row = vec![ExactInt::from(1); a + 1];
        for b in 1..a {
            row[b] = &rows[a - 1][b - 1] + &rows[a - 1][b];
        }
        rows.push(row);
    }
    rows
}

/// Every row property, in a fixed order, for row `n >= 3`.
pub fn check_row(n: usize, row: &[ExactInt]) -> Result<Vec<PropertyReport>> {
    let positive = is_positive(row)?;
    if !positive.holds {
        return Ok(vec![positive]);
    }
    let weighted = is_log_concave_weighted(row)?;
    let mut out = vec![
        positive,
        is_log_concave(row)?,
        weighted.clone(),
        is_unimodal(row),
    ];
    out.push(check_ratio_bound(n, row)?);
    if weighted.holds {
        out.push(check_lemma1(row)?);
    }
    Ok(out)
}

/// The sequence `k! c[k]`.
pub fn weighted(seq: &[ExactInt]) -> Vec<ExactInt> {
    weight_by_factorial(seq)
}
