//! wasm-bindgen surface for the static page in `www/`.
//!
//! Each export returns plain data (JSON strings or `Vec<f64>`) so the page
//! needs no framework, and the same functions run natively under `cargo test`.

use lambert_coeffs::numeric::{lambert_w, log_grid, w_derivative};
use lambert_coeffs::props::{check_row, is_unimodal};
use lambert_coeffs::{build_table, Route};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Rows are capped so the page stays responsive.
pub const MAX_TRIANGLE_ROWS: usize = 60;
/// Largest derivative order the curve panel offers.
pub const MAX_CURVE_ORDER: usize = 12;

#[derive(Serialize)]
struct RowView {
    n: usize,
    beta: Vec<String>,
    /// `log10 beta(n, k)`, for bar heights.
    log10: Vec<f64>,
    mode: Option<usize>,
    /// Every structural property holds (rows `n >= 3`).
    properties_hold: bool,
}

fn log10_big(v: &lambert_coeffs::ExactInt) -> f64 {
    let digits = v.to_string();
    let lead: f64 = digits[..digits.len().min(15)].parse().unwrap_or(0.0);
    lead.log10() + digits.len().saturating_sub(15) as f64
}

/// The triangle up to `n_max` as JSON: `[{n, beta, log10, mode, properties_hold}]`.
#[wasm_bindgen]
pub fn coefficient_triangle(n_max: usize) -> Result<String, String> {
    if n_max == 0 || n_max > MAX_TRIANGLE_ROWS {
        return Err(format!("n_max must be in 1..={MAX_TRIANGLE_ROWS}"));
    }
    let table = build_table(n_max).map_err(|e| e.to_string())?;
    let rows: Vec<RowView> = table
        .rows()
        .map(|(n, row)| {
            let properties_hold = n < 3
                || check_row(n, row)
                    .map(|r| r.iter().all(|p| p.holds))
                    .unwrap_or(false);
            RowView {
                n,
                beta: row.iter().map(|b| b.to_string()).collect(),
                log10: row.iter().map(log10_big).collect(),
                mode: is_unimodal(row).mode_index,
                properties_hold,
            }
        })
        .collect();
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

/// Log-spaced abscissae used by [`signed_derivative_curve`].
#[wasm_bindgen]
pub fn curve_grid(x_min: f64, x_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(x_min > 0.0 && x_max > x_min) || points < 2 {
        return Err("need 0 < x_min < x_max and at least 2 points".into());
    }
    Ok(log_grid(x_min, x_max, points))
}

/// `(-1)^(n-1) d^n W / dx^n` on the log grid; every value is positive when
/// `W'` is completely monotonic.
#[wasm_bindgen]
pub fn signed_derivative_curve(
    n: usize,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    if n == 0 || n > MAX_CURVE_ORDER {
        return Err(format!("n must be in 1..={MAX_CURVE_ORDER}"));
    }
    let grid = curve_grid(x_min, x_max, points)?;
    let table = build_table(n).map_err(|e| e.to_string())?;
    grid.iter()
        .map(|&x| {
            let d = w_derivative(n, x, &table).map_err(|e| e.to_string())?.value;
            Ok(if n % 2 == 1 { d } else { -d })
        })
        .collect()
}

/// `W(x)` on the log grid.
#[wasm_bindgen]
pub fn w_curve(x_min: f64, x_max: f64, points: usize) -> Result<Vec<f64>, String> {
    curve_grid(x_min, x_max, points)?
        .into_iter()
        .map(|x| lambert_w(x).map(|e| e.w).map_err(|e| e.to_string()))
        .collect()
}

#[derive(Serialize)]
struct RouteView {
    route: String,
    n: usize,
    beta: Vec<String>,
    agrees_with_recurrence: bool,
    micros: f64,
}

/// Row `n` by one named route, compared against the recurrence.
#[wasm_bindgen]
pub fn route_row(route: &str, n: usize) -> Result<String, String> {
    if n == 0 || n > MAX_TRIANGLE_ROWS {
        return Err(format!("n must be in 1..={MAX_TRIANGLE_ROWS}"));
    }
    let route: Route = route
        .parse()
        .map_err(|e: lambert_coeffs::Error| e.to_string())?;
    let clock = now_micros();
    let row = route.row(n).map_err(|e| e.to_string())?;
    let micros = now_micros() - clock;
    let reference = Route::Recurrence.row(n).map_err(|e| e.to_string())?;
    let view = RouteView {
        route: route.name().to_owned(),
        n,
        agrees_with_recurrence: row == reference,
        beta: row.iter().map(|b| b.to_string()).collect(),
        micros,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

/// Names accepted by [`route_row`], comma separated.
#[wasm_bindgen]
pub fn route_names() -> String {
    Route::ALL
        .iter()
        .map(|r| r.name())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(target_arch = "wasm32")]
fn now_micros() -> f64 {
    #[wasm_bindgen]
    extern "C" {
        #[wasm_bindgen(js_namespace = performance, js_name = now)]
        fn performance_now() -> f64;
    }
    performance_now() * 1e3
}

#[cfg(not(target_arch = "wasm32"))]
fn now_micros() -> f64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64() * 1e6)
        .unwrap_or(0.0)
}
