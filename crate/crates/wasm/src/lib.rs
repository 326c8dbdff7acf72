//! Three operations for the browser demo. Each returns a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use indeftheta::families::{eisenstein, hurwitz, zagier};
use indeftheta::qseries::{Estimate, EvalPoint};
use indeftheta::rat::{int, parse_rat, rat};

fn point(x: f64, y: f64) -> Result<EvalPoint, String> {
    EvalPoint::new(x, y).map_err(|e| e.to_string())
}

fn pair(e: &Estimate) -> Value {
    json!([e.value.re, e.value.im])
}

/// The completed Hurwitz function at `x + iy` by both routes.
pub fn hurwitz_value(x: f64, y: f64) -> Result<String, String> {
    let pt = point(x, y)?;
    let th = hurwitz::f_maass_eval(&pt, 1e-8, hurwitz::Route::Theta).map_err(|e| e.to_string())?;
    let bf = hurwitz::f_maass_eval(&pt, 1e-8, hurwitz::Route::BetaFormula).map_err(|e| e.to_string())?;
    let holo = hurwitz::holomorphic_part(&pt).map_err(|e| e.to_string())?;
    Ok(json!({
        "tau": [x, y],
        "theta": pair(&th),
        "beta": pair(&bf),
        "holomorphic": pair(&holo),
        "difference": (th.value - bf.value).norm(),
    })
    .to_string())
}

/// Coefficients of `S_x` or `T_x` below `q^n`, as exact rationals.
pub fn zagier_coefficients(series: &str, k: u32, x: &str, n: u32) -> Result<String, String> {
    let kind: zagier::SeriesKind = series.parse().map_err(|e: indeftheta::Error| e.to_string())?;
    let x = parse_rat(x).map_err(|e| e.to_string())?;
    let n = n.clamp(1, 200) as i64;
    let s = match kind {
        zagier::SeriesKind::S => zagier::s_series(k, &x, n),
        zagier::SeriesKind::T => zagier::t_series(k, &x, n),
    }
    .map_err(|e| e.to_string())?;
    let rows: Vec<Value> = (0..n)
        .map(|d| {
            let c = s.coeff(&int(d)).as_rational().map(|r| r.to_string()).unwrap_or_default();
            json!({ "D": d, "coeff": c })
        })
        .collect();
    Ok(json!({ "series": series, "k": k, "x": x.to_string(), "rows": rows }).to_string())
}

/// The theta family approaching `G_k` at `x + iy` along `a = b = (t,t)`.
pub fn eisenstein_limit(k: u32, x: f64, y: f64) -> Result<String, String> {
    let pt = point(x, y)?;
    let ts: Vec<_> = [25, 50, 100, 200].iter().map(|&d| rat(1, d)).collect();
    let r = eisenstein::eisenstein_limit_check(k, &pt, &ts, 1e-5).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = hurwitzValue)]
pub fn hurwitz_value_js(x: f64, y: f64) -> Result<String, JsError> {
    hurwitz_value(x, y).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = zagierCoefficients)]
pub fn zagier_coefficients_js(series: &str, k: u32, x: &str, n: u32) -> Result<String, JsError> {
    zagier_coefficients(series, k, x, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = eisensteinLimit)]
pub fn eisenstein_limit_js(k: u32, x: f64, y: f64) -> Result<String, JsError> {
    eisenstein_limit(k, x, y).map_err(|e| JsError::new(&e))
}
