//! Error-function kernels: `E(z) = 2 int_0^z exp(-pi u^2) du`, its derivatives,
//! and the incomplete integrals `beta(alpha; x) = int_x^inf u^{alpha-1} exp(-pi u) du`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Absolute accuracy target for numerical routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Accuracy {
    abs_tol: f64,
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy { abs_tol: 1e-14 }
    }
}

impl Accuracy {
    pub fn new(abs_tol: f64) -> Result<Self> {
        if abs_tol > 0.0 && abs_tol < 1e-6 {
            Ok(Accuracy { abs_tol })
        } else {
            Err(Error::Domain(format!("tolerance {abs_tol} outside (0, 1e-6)")))
        }
    }
    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }
}

const SQRT_PI: f64 = 1.772_453_850_905_516;
const SERIES_LIMIT: f64 = 2.0 * SQRT_PI;

/// erf(x) for 0 <= x <= 2 sqrt(pi) from the positive series
/// `erf x = 2/sqrt(pi) e^{-x^2} sum 2^n x^{2n+1} / (2n+1)!!`.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > 1e-18 * sum {
        term *= 2.0 * x2 / (2.0 * n + 3.0);
        sum += term;
        n += 1.0;
    }
    2.0 / SQRT_PI * (-x2).exp() * sum
}

/// erfc(x) for x > 0 from the continued fraction
/// `erfc x = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`.
fn erfc_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let an = n as f64 / 2.0;
        d = x + an * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / SQRT_PI / f
}

fn erfc_pos(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        1.0 - erf_series(x)
    } else {
        erfc_cf(x)
    }
}

/// `E(z) = erf(sqrt(pi) z)`.
pub fn err_e(z: f64) -> f64 {
    let x = SQRT_PI * z.abs();
    let v = if x <= SERIES_LIMIT { erf_series(x) } else { 1.0 - erfc_cf(x) };
    v.copysign(z)
}

/// Coefficients (lowest first) of `h_{k-1}` with `E^{(k)}(z) = h_{k-1}(z) e^{-pi z^2}`.
pub fn err_e_deriv_poly(k: u32) -> Vec<f64> {
    assert!(k >= 1);
    let mut h = vec![2.0];
    for _ in 1..k {
        let mut next = vec![0.0; h.len() + 1];
        for (j, c) in h.iter().enumerate() {
            if j > 0 {
                next[j - 1] += j as f64 * c;
            }
            next[j + 1] -= 2.0 * PI * c;
        }
        h = next;
    }
    h
}

/// `E^{(k)}(z)` for `k >= 1`.
pub fn err_e_deriv(k: u32, z: f64) -> f64 {
    if k == 0 {
        return err_e(z);
    }
    let h = err_e_deriv_poly(k);
    let p = h.iter().rev().fold(0.0, |acc, c| acc * z + c);
    p * (-PI * z * z).exp()
}

/// `beta(x) = beta(1/2; x) = erfc(sqrt(pi x))`.
pub fn beta_half(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("beta_half needs x >= 0, got {x}")));
    }
    Ok(erfc_pos((PI * x).sqrt()))
}

/// Upper incomplete gamma `Gamma(-1/2, y)` for `y > 0`.
fn gamma_minus_half(y: f64) -> f64 {
    if y < 2.0 {
        2.0 * ((-y).exp() / y.sqrt() - SQRT_PI * erfc_pos(y.sqrt()))
    } else {
        // Legendre continued fraction, modified Lentz
        let s = -0.5;
        let tiny = 1e-300;
        let mut b = y + 1.0 - s;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-y + s * y.ln()).exp() * h
    }
}

/// `beta(alpha; x)` for half-integers `alpha = twice_alpha / 2 >= -1/2`.
pub fn beta_gen(twice_alpha: i32, x: f64) -> Result<f64> {
    if twice_alpha % 2 == 0 || twice_alpha < -1 {
        return Err(Error::Domain(format!("unsupported alpha = {twice_alpha}/2")));
    }
    if twice_alpha < 0 {
        if !(x > 0.0) {
            return Err(Error::Domain("beta(-1/2; x) needs x > 0".into()));
        }
        return Ok(SQRT_PI * gamma_minus_half(PI * x));
    }
    let mut v = beta_half(x)?;
    let mut alpha = 0.5;
    let e = (-PI * x).exp();
    while ((2.0 * alpha) as i32) < twice_alpha {
        v = x.powf(alpha) * e / PI + alpha / PI * v;
        alpha += 1.0;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_values() {
        assert_eq!(err_e(0.0), 0.0);
        for z in [0.3, 1.7, 2.5] {
            assert_eq!(err_e(-z), -err_e(z));
        }
        assert!((err_e_deriv(1, 0.0) - 2.0).abs() < 1e-15);
        assert!((err_e_deriv(3, 0.0) + 4.0 * PI).abs() < 1e-13);
        assert!((beta_half(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(beta_half(2.0).unwrap() < beta_half(1.0).unwrap());
        assert!(beta_half(-1.0).is_err());
        assert!(beta_gen(-1, 0.0).is_err());
        assert!(beta_gen(-3, 1.0).is_err());
        assert!(beta_gen(2, 1.0).is_err());
    }

    #[test]
    fn finite_on_wide_range() {
        for i in -400..=400 {
            let z = i as f64 / 10.0;
            assert!(err_e(z).is_finite() && err_e(z).abs() <= 1.0);
            for k in 1..6 {
                assert!(err_e_deriv(k, z).is_finite());
            }
            assert!(beta_half(z * z).unwrap().is_finite());
            if z > 0.0 {
                assert!(beta_gen(-1, z * z).unwrap().is_finite());
            }
        }
    }

    #[test]
    fn second_derivative_closed_form() {
        for z in [-1.3, 0.0, 0.4, 1.0, 2.2] {
            let want = -4.0 * PI * z * (-PI * z * z).exp();
            assert!((err_e_deriv(2, z) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn upward_recurrence() {
        for x in [0.1, 1.0, 5.0] {
            let b3 = beta_gen(3, x).unwrap();
            let want = x.sqrt() * (-PI * x).exp() / PI + 0.5 / PI * beta_half(x).unwrap();
            assert!((b3 - want).abs() < 1e-15);
        }
    }
}
