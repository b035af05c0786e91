//! Wall-clock comparison of the row construction routes.

use std::io::Write;
use std::time::Instant;

use lambert_coeffs::exact::bit_len;
use lambert_coeffs::Route;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub route: Route,
    pub n: usize,
    /// Fastest of the repetitions.
    pub nanoseconds: u128,
    /// Largest bit length among the row's entries.
    pub max_bits: u64,
}

/// Times `route.row(n)` from scratch for every route and `1 <= n <= n_max`.
pub fn run_bench(
    n_max: usize,
    routes: &[Route],
    repetitions: usize,
) -> Result<Vec<BenchRow>, CliError> {
    if n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    if repetitions == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(routes.len() * n_max);
    for &route in routes {
        for n in 1..=n_max {
            let mut best = u128::MAX;
            let mut max_bits = 0;
            for _ in 0..repetitions {
                let start = Instant::now();
                let row = route.row(n)?;
                best = best.min(start.elapsed().as_nanos());
                max_bits = row.iter().map(bit_len).max().unwrap_or(0);
            }
            out.push(BenchRow {
                route,
                n,
                nanoseconds: best,
                max_bits,
            });
        }
    }
    Ok(out)
}

pub fn write_bench_csv<W: Write>(out: &mut W, rows: &[BenchRow]) -> std::io::Result<()> {
    out.write_all(b"route,n,nanoseconds,max_bits\n")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.route, r.n, r.nanoseconds, r.max_bits)?;
    }
    Ok(())
}
