use serde_json::Value;

use indeftheta_wasm::{eisenstein_limit, hurwitz_value, zagier_coefficients};

#[test]
fn hurwitz_routes_agree() {
    let v: Value = serde_json::from_str(&hurwitz_value(0.1, 0.9).unwrap()).unwrap();
    assert!(v["difference"].as_f64().unwrap() < 1e-7);
}

#[test]
fn zagier_table() {
    let v: Value = serde_json::from_str(&zagier_coefficients("S", 2, "1/2", 8).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[5]["coeff"], "-3/2");
    assert!(zagier_coefficients("U", 2, "1/2", 8).is_err());
    assert!(zagier_coefficients("T", 4, "x", 8).is_err());
}

#[test]
fn eisenstein_curve() {
    let v: Value = serde_json::from_str(&eisenstein_limit(4, 0.0, 1.0).unwrap()).unwrap();
    assert_eq!(v["values"].as_array().unwrap().len(), 4);
    assert_eq!(v["pass"], true);
    assert!(eisenstein_limit(4, 0.0, -1.0).is_err());
}
