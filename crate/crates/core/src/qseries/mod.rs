//! Exact truncated q-series with rational exponents and cyclotomic coefficients.

mod cyc;
pub mod numeric;
mod series;
pub mod standard;

pub use cyc::{cyclotomic_poly, CycFile, CycNum};
pub use series::{QSeries, SeriesFile, TermFile};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `tau = x + iy` of the upper half plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub x: f64,
    pub y: f64,
}

impl EvalPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("tau = {x} + {y}i is not in the upper half plane")));
        }
        Ok(EvalPoint { x, y })
    }

    pub fn from_complex(t: Complex64) -> Result<Self> {
        EvalPoint::new(t.re, t.im)
    }

    pub fn i() -> Self {
        EvalPoint { x: 0.0, y: 1.0 }
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn q(&self) -> Complex64 {
        self.q_pow(1.0)
    }

    /// `q^r = e^{2 pi i r tau}`
    pub fn q_pow(&self, r: f64) -> Complex64 {
        Complex64::from_polar((-2.0 * PI * r * self.y).exp(), 2.0 * PI * r * self.x)
    }

    /// `(a tau + b)/(c tau + d)`
    pub fn moebius(&self, g: [[i64; 2]; 2]) -> Result<EvalPoint> {
        let t = self.tau();
        let num = t * g[0][0] as f64 + g[0][1] as f64;
        let den = t * g[1][0] as f64 + g[1][1] as f64;
        if den.norm() == 0.0 {
            return Err(Error::Pole);
        }
        EvalPoint::from_complex(num / den)
    }
}

/// Coefficient growth class `|a_r| <= constant (1 + r)^degree` for exponents `r` past the truncation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub degree: u32,
    pub constant: f64,
}

impl TailBound {
    pub fn new(degree: u32, constant: f64) -> Self {
        TailBound { degree, constant }
    }

    /// Bound for `sum_{r >= start, r in start + Z/den} |a_r| e^{-2 pi y r}`.
    pub fn tail(&self, start: f64, den: u32, y: f64) -> f64 {
        let start = start.max(0.0);
        let x = (-2.0 * PI * y / den as f64).exp();
        let ratio = (1.0 + 1.0 / (den as f64 * (1.0 + start))).powi(self.degree as i32) * x;
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        let first = self.constant * (1.0 + start).powi(self.degree as i32) * (-2.0 * PI * y * start).exp();
        first / (1.0 - ratio)
    }
}

/// A floating value with an absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: Complex64, error: f64) -> Self {
        Estimate { value, error }
    }
    pub fn exact(value: Complex64) -> Self {
        Estimate { value, error: 0.0 }
    }
    pub fn add(&self, o: &Estimate) -> Estimate {
        Estimate { value: self.value + o.value, error: self.error + o.error }
    }
    pub fn sub(&self, o: &Estimate) -> Estimate {
        Estimate { value: self.value - o.value, error: self.error + o.error }
    }
    pub fn scale(&self, s: Complex64) -> Estimate {
        Estimate { value: self.value * s, error: self.error * s.norm() }
    }
    pub fn mul(&self, o: &Estimate) -> Estimate {
        Estimate {
            value: self.value * o.value,
            error: self.error * o.value.norm() + o.error * self.value.norm() + self.error * o.error,
        }
    }
    pub fn div(&self, o: &Estimate) -> Result<Estimate> {
        let d = o.value.norm();
        if d <= o.error {
            return Err(Error::Pole);
        }
        let v = self.value / o.value;
        Ok(Estimate { value: v, error: (self.error + v.norm() * o.error) / (d - o.error) })
    }
}
