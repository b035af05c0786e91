use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lambert_coeffs::numeric::{lambert_w, w_derivative, w_derivative_fd, w_derivative_taylor};
use lambert_coeffs::{build_table, CoefficientTable, Route};
use lambert_coeffs_cli::bench::{run_bench, write_bench_csv};
use lambert_coeffs_cli::format::{parse_table, write_table, TableFormat};
use lambert_coeffs_cli::verify::{verify_table, VerifyOptions};
use lambert_coeffs_cli::CliError;

#[derive(Parser)]
#[command(
    name = "lambert-coeffs",
    version,
    about = "Coefficients of the Lambert W derivative polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the beta(n, k) triangle.
    Table {
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Build the triangle by this route instead of the recurrence.
        #[arg(long, value_parser = parse_route)]
        route: Option<Route>,
    },
    /// Run route agreement, property and identity checks.
    Verify {
        /// Defaults to 40, or 200 when only the recurrence route is selected.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, value_delimiter = ',', value_parser = parse_route)]
        routes: Option<Vec<Route>>,
        #[arg(long, default_value_t = 3)]
        lambda_samples: usize,
        /// Verify a stored table (CSV or JSON) instead of building one.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        report_format: ReportFormat,
    },
    /// Evaluate W(x) and its nth derivative.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value = "closed-form")]
        route: EvalRoute,
        /// Relative truncation tolerance for the Taylor route.
        #[arg(long, default_value_t = 1e-12)]
        tol_rel: f64,
    },
    /// Time each route per row; CSV route,n,nanoseconds,max_bits.
    Bench {
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', value_parser = parse_route)]
        routes: Option<Vec<Route>>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalRoute {
    #[value(alias = "closed_form", alias = "closed")]
    ClosedForm,
    Taylor,
    #[value(alias = "finite-difference", alias = "finite_difference", alias = "fd")]
    Fdiff,
}

fn parse_route(s: &str) -> Result<Route, String> {
    s.parse::<Route>().map_err(|e| e.to_string())
}

fn open_out(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn route_table(route: Route, n_max: usize) -> Result<CoefficientTable, CliError> {
    let rows = (1..=n_max)
        .map(|n| route.row(n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CoefficientTable::from_rows(rows)?)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Table {
            n_max,
            format,
            out,
            route,
        } => {
            if n_max == 0 {
                return Err(CliError::Usage("--n-max must be at least 1".into()));
            }
            let table = match route {
                None | Some(Route::Recurrence) => build_table(n_max)?,
                Some(r) => route_table(r, n_max)?,
            };
            let mut w = open_out(out.as_ref())?;
            write_table(&mut w, &table, format, route.map(Route::name))?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            n_max,
            routes,
            lambda_samples,
            table,
            report_format,
        } => {
            let opts = VerifyOptions {
                routes: routes.unwrap_or_else(|| Route::ALL.to_vec()),
                lambda_samples,
            };
            let table = match table {
                Some(path) => {
                    let loaded = parse_table(&fs::read_to_string(path)?)?;
                    match n_max {
                        Some(n) if n != loaded.n_max() => {
                            return Err(CliError::Usage(format!(
                                "--n-max {n} does not match the stored table (n_max = {})",
                                loaded.n_max()
                            )))
                        }
                        _ => loaded,
                    }
                }
                None => {
                    let n = n_max.unwrap_or_else(|| opts.default_n_max());
                    if n == 0 {
                        return Err(CliError::Usage("--n-max must be at least 1".into()));
                    }
                    build_table(n)?
                }
            };
            let report = verify_table(&table, &opts);
            let mut out = io::stdout().lock();
            match report_format {
                ReportFormat::Json => {
                    serde_json::to_writer(&mut out, &report).map_err(|e| CliError::Io(e.into()))?;
                    writeln!(out)?;
                }
                ReportFormat::Text => {
                    writeln!(
                        out,
                        "verify n_max={} routes={} checks={}",
                        report.n_max,
                        report.routes.join(","),
                        report.checks
                    )?;
                    for f in &report.failures {
                        writeln!(
                            out,
                            "FAIL n={} k={} check={} {}",
                            f.n, f.k, f.check, f.detail
                        )?;
                    }
                    writeln!(out, "{}", if report.passed { "PASS" } else { "FAILED" })?;
                }
            }
            if let Some(f) = report.first_failure() {
                eprintln!("first failure: (n={}, k={}, check={})", f.n, f.k, f.check);
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            x,
            n,
            route,
            tol_rel,
        } => {
            if n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let w = lambert_w(x)?;
            let d = match route {
                EvalRoute::ClosedForm => w_derivative(n, x, &build_table(n)?)?,
                EvalRoute::Taylor => w_derivative_taylor(n, x, tol_rel)?,
                EvalRoute::Fdiff => w_derivative_fd(n, x)?,
            };
            let mut out = io::stdout().lock();
            writeln!(out, "x = {:.16e}", x)?;
            writeln!(out, "W = {:.16e}", w.w)?;
            writeln!(out, "residual = {:.16e}", w.residual)?;
            writeln!(out, "iterations = {}", w.iterations)?;
            writeln!(out, "route = {}", d.route)?;
            writeln!(out, "d^{n}W/dx^{n} = {:.16e}", d.value)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            n_max,
            routes,
            reps,
            out,
        } => {
            let routes = routes.unwrap_or_else(|| Route::ALL.to_vec());
            let rows = run_bench(n_max, &routes, reps)?;
            let mut w = open_out(out.as_ref())?;
            write_bench_csv(&mut w, &rows)?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
