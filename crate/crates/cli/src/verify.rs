//! The verification suite run by `lambert-coeffs verify`.
//!
//! Every check runs against a table that is treated as untrusted input, so a
//! corrupted entry surfaces as a route disagreement or a failed property.

use std::collections::BTreeSet;

use lambert_coeffs::closed_forms::{
    beta_row_from_rstirling, carlitz_row_sum_expected, factorial_identity,
    rstirling_column_from_beta, rstirling_diagonal, CarlitzTriangle,
};
use lambert_coeffs::exact::double_factorial;
use lambert_coeffs::props::check_row;
use lambert_coeffs::table::{alternating_sum, boundary_value, next_row, next_row_boundary_seeded};
use lambert_coeffs::{build_table, BoundaryKind, CoefficientTable, ExactInt, Route};
use rayon::prelude::*;
use serde::Serialize;

/// Default `n_max` when any closed-form route is selected.
pub const DEFAULT_ROUTE_N_MAX: usize = 40;
/// Default `n_max` for recurrence-only runs.
pub const DEFAULT_RECURRENCE_N_MAX: usize = 200;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub routes: Vec<Route>,
    /// Distinct `lambda` values per Carlitz row-sum check; 0 skips the check.
    pub lambda_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            routes: Route::ALL.to_vec(),
            lambda_samples: 3,
        }
    }
}

impl VerifyOptions {
    pub fn default_n_max(&self) -> usize {
        if self.routes.iter().all(|r| *r == Route::Recurrence) {
            DEFAULT_RECURRENCE_N_MAX
        } else {
            DEFAULT_ROUTE_N_MAX
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub n: usize,
    pub k: usize,
    pub check: String,
    pub detail: String,
    /// Whether `(n, k)` pinpoints the offending entry rather than just its row.
    pub locates_entry: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n_max: usize,
    pub routes: Vec<String>,
    pub checks: usize,
    pub passed: bool,
    /// Sorted by `(n, k, check)`.
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    /// The first failure that pinpoints an entry, else the first failure.
    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures
            .iter()
            .find(|f| f.locates_entry)
            .or(self.failures.first())
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<Failure>,
}

impl Tally {
    fn check(
        &mut self,
        ok: bool,
        n: usize,
        k: usize,
        check: &str,
        detail: impl FnOnce() -> String,
    ) {
        self.checks += 1;
        if !ok {
            let locates_entry = check.starts_with("route:");
            self.failures.push(Failure {
                n,
                k,
                check: check.to_owned(),
                detail: detail(),
                locates_entry,
            });
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self
    }
}

fn first_mismatch(a: &[ExactInt], b: &[ExactInt]) -> Option<usize> {
    if a.len() != b.len() {
        return Some(a.len().min(b.len()));
    }
    a.iter().zip(b).position(|(x, y)| x != y)
}

/// `lambda` values for the row-sum check at `kappa`: `kappa + 1` (the value
/// tied to `beta`), then 0, 7, and further small integers until `count` are distinct.
pub fn lambda_samples(kappa: usize, count: usize) -> Vec<i64> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    let preferred = [kappa as i64 + 1, 0, 7];
    let fallback = (1i64..).flat_map(|i| [-i, i]);
    for lambda in preferred.into_iter().chain(fallback) {
        if out.len() == count {
            break;
        }
        if seen.insert(lambda) {
            out.push(lambda);
        }
    }
    out
}

fn check_row_n(
    n: usize,
    table: &CoefficientTable,
    routes: &[Route],
    recurrence: &CoefficientTable,
) -> Tally {
    let mut t = Tally::default();
    let row = table.row(n).expect("n within table");

    for &route in routes {
        let expected = match route {
            Route::Recurrence => Ok(recurrence.row(n).expect("same n_max").to_vec()),
            _ => route.row(n),
        };
        let check = format!("route:{route}");
        match expected {
            Ok(expected) => {
                let mismatch = first_mismatch(row, &expected);
                t.check(mismatch.is_none(), n, mismatch.unwrap_or(0), &check, || {
                    let k = mismatch.unwrap_or(0);
                    format!(
                        "table has {}, {route} route gives {}",
                        row.get(k).map_or("-".into(), |v| v.to_string()),
                        expected.get(k).map_or("-".into(), |v| v.to_string())
                    )
                });
            }
            Err(e) => t.check(false, n, 0, &check, || e.to_string()),
        }
    }

    for kind in BoundaryKind::ALL {
        if n >= kind.min_n() {
            let k = kind.index(n);
            let expected = boundary_value(n, kind).expect("n satisfies min_n");
            t.check(row[k] == expected, n, k, "boundary", || {
                format!("{kind:?}: expected {expected}, found {}", row[k])
            });
        }
    }

    if n < table.n_max() {
        let next = table.row(n + 1).expect("n + 1 within table");
        let derived = next_row(n, row);
        let mismatch = first_mismatch(&derived, next);
        t.check(
            mismatch.is_none(),
            n + 1,
            mismatch.unwrap_or(0),
            "recurrence_step",
            || format!("row {} does not follow from row {n}", n + 1),
        );
        if n >= 3 {
            let seeded = next_row_boundary_seeded(n, row).expect("n >= 3");
            let mismatch = first_mismatch(&seeded, next);
            t.check(
                mismatch.is_none(),
                n + 1,
                mismatch.unwrap_or(0),
                "boundary_seeded_step",
                || format!("boundary-seeded derivation of row {} disagrees", n + 1),
            );
        }
    }

    if n >= 3 {
        match check_row(n, row) {
            Ok(reports) => {
                for r in reports {
                    let k = r.first_violation.map_or(0, |v| v.index());
                    t.check(r.holds, n, k, r.property.name(), || {
                        format!("{:?}", r.first_violation)
                    });
                }
            }
            Err(e) => t.check(false, n, 0, "properties", || e.to_string()),
        }
    } else {
        let positive = row.iter().position(|b| *b <= ExactInt::from(0));
        t.check(
            positive.is_none(),
            n,
            positive.unwrap_or(0),
            "positive",
            || "non-positive entry".into(),
        );
    }

    let alt = alternating_sum(n, table).expect("n within table");
    let dfact = double_factorial(2 * n as i64 - 3).expect("argument >= -1");
    t.check(alt == dfact, n, 0, "alternating_sum", || {
        format!("{alt} != (2n-3)!! = {dfact}")
    });

    match factorial_identity(n) {
        Ok((left, right)) => {
            t.check(left == right, n, n - 1, "factorial_identity", || {
                format!("{left} != {right}")
            });
            t.check(row[n - 1] == left, n, n - 1, "factorial_identity", || {
                format!("table entry {} != identity value {left}", row[n - 1])
            });
        }
        Err(e) => t.check(false, n, n - 1, "factorial_identity", || e.to_string()),
    }

    match (
        rstirling_column_from_beta(n, n, table),
        rstirling_diagonal(n, n),
    ) {
        (Ok(inverted), Ok(direct)) => {
            let mismatch = first_mismatch(&inverted, &direct);
            t.check(
                mismatch.is_none(),
                n,
                mismatch.unwrap_or(0),
                "inversion",
                || "inverted r-Stirling values disagree with the closed sum".into(),
            );
            let rebuilt = beta_row_from_rstirling(n, &inverted).expect("n values supplied");
            let mismatch = first_mismatch(&rebuilt, row);
            t.check(
                mismatch.is_none(),
                n,
                mismatch.unwrap_or(0),
                "inversion_round_trip",
                || "row does not survive beta -> r-Stirling -> beta".into(),
            );
        }
        (Err(e), _) | (_, Err(e)) => t.check(false, n, 0, "inversion", || e.to_string()),
    }

    t
}

fn check_carlitz_sums(kappa_max: usize, samples: usize) -> Tally {
    if samples == 0 {
        return Tally::default();
    }
    // fixed lambda values share one triangle; lambda = kappa + 1 needs its own
    let fixed: BTreeSet<i64> = (0..=kappa_max)
        .flat_map(|kappa| lambda_samples(kappa, samples).into_iter().skip(1))
        .collect();
    let shared: Vec<(i64, CarlitzTriangle)> = fixed
        .into_par_iter()
        .map(|lambda| (lambda, CarlitzTriangle::new(kappa_max, lambda.into())))
        .collect();
    (0..=kappa_max)
        .into_par_iter()
        .map(|kappa| {
            let mut t = Tally::default();
            let expected = carlitz_row_sum_expected(kappa);
            for lambda in lambda_samples(kappa, samples) {
                let sum: ExactInt = match shared.iter().find(|(l, _)| *l == lambda) {
                    Some((_, tri)) => tri.row(kappa).expect("kappa <= kappa_max").iter().sum(),
                    None => CarlitzTriangle::new(kappa, lambda.into())
                        .row(kappa)
                        .expect("row built")
                        .iter()
                        .sum(),
                };
                t.check(sum == expected, kappa + 1, 0, "carlitz_row_sum", || {
                    format!("kappa = {kappa}, lambda = {lambda}: {sum} != {expected}")
                });
            }
            t
        })
        .reduce(Tally::default, Tally::merge)
}

/// Runs the suite over `table`.
pub fn verify_table(table: &CoefficientTable, opts: &VerifyOptions) -> VerifyReport {
    let n_max = table.n_max();
    let recurrence = build_table(n_max).expect("n_max >= 1");
    let mut routes = opts.routes.clone();
    routes.sort();
    routes.dedup();
    let rows = (1..=n_max)
        .into_par_iter()
        .map(|n| check_row_n(n, table, &routes, &recurrence))
        .reduce(Tally::default, Tally::merge);
    let mut tally = rows.merge(check_carlitz_sums(n_max - 1, opts.lambda_samples));
    tally.failures.sort();
    VerifyReport {
        n_max,
        routes: routes.iter().map(|r| r.name().to_owned()).collect(),
        checks: tally.checks,
        passed: tally.failures.is_empty(),
        failures: tally.failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_tables_pass() {
        let report = verify_table(&build_table(12).unwrap(), &VerifyOptions::default());
        assert!(report.passed, "{:?}", report.failures);
        assert!(report.checks > 100);
    }

    #[test]
    fn corrupted_entry_is_named() {
        let mut t = build_table(9).unwrap();
        let bumped = t.beta(7, 3) + 1;
        t.set_entry(7, 3, bumped).unwrap();
        let report = verify_table(&t, &VerifyOptions::default());
        assert!(!report.passed);
        let first = report.first_failure().unwrap();
        assert_eq!((first.n, first.k), (7, 3));
        assert!(report
            .failures
            .iter()
            .any(|f| f.check == "route:explicit" && f.k == 3));
    }

    #[test]
    fn recurrence_only_still_catches_corruption() {
        let opts = VerifyOptions {
            routes: vec![Route::Recurrence],
            lambda_samples: 0,
        };
        let mut t = build_table(6).unwrap();
        t.set_entry(6, 5, 121.into()).unwrap();
        assert!(!verify_table(&t, &opts).passed);
        assert_eq!(opts.default_n_max(), DEFAULT_RECURRENCE_N_MAX);
        assert_eq!(
            VerifyOptions::default().default_n_max(),
            DEFAULT_ROUTE_N_MAX
        );
    }

    #[test]
    fn lambda_sample_sets() {
        assert_eq!(lambda_samples(30, 3), vec![31, 0, 7]);
        assert_eq!(lambda_samples(6, 3), vec![7, 0, -1]);
        assert_eq!(lambda_samples(2, 5), vec![3, 0, 7, -1, 1]);
        assert!(lambda_samples(2, 0).is_empty());
    }
}
