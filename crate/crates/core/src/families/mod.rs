//! The three example families: Eisenstein series, Zagier's forms on
//! `Gamma_0(4)` and the Hurwitz class number generating function.

pub mod eisenstein;
pub mod hurwitz;
pub mod zagier;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::EvalPoint;

/// Two evaluations of the same quantity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Comparison {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Comparison {
    /// Passes when `|lhs - rhs| <= tol (1 + |lhs|)`.
    pub fn relative(lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let residual = (lhs - rhs).norm();
        Comparison { lhs, rhs, residual, tolerance: tol, pass: residual <= tol * (1.0 + lhs.norm()) }
    }
    /// Passes when `|lhs - rhs| <= tol`.
    pub fn absolute(lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let residual = (lhs - rhs).norm();
        Comparison { lhs, rhs, residual, tolerance: tol, pass: residual <= tol }
    }
}

/// A matrix of `SL_2(Z)` acting by Moebius transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularSubstitution {
    m: [[i64; 2]; 2],
}

impl ModularSubstitution {
    pub fn new(m: [[i64; 2]; 2]) -> Result<Self> {
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1 {
            return Err(Error::Domain("determinant must be 1".into()));
        }
        Ok(ModularSubstitution { m })
    }
    /// Parses `"a,b;c,d"`.
    pub fn parse(s: &str) -> Result<Self> {
        let rows: Vec<Vec<i64>> = s
            .split(';')
            .map(|r| r.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| Error::Parse(e.to_string()))).collect())
            .collect::<Result<_>>()?;
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(Error::Parse(format!("expected 'a,b;c,d', got '{s}'")));
        }
        ModularSubstitution::new([[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]])
    }
    pub fn t() -> Self {
        ModularSubstitution { m: [[1, 1], [0, 1]] }
    }
    pub fn minus_identity() -> Self {
        ModularSubstitution { m: [[-1, 0], [0, -1]] }
    }
    /// `[[1,0],[4,1]]`
    pub fn gamma_prime() -> Self {
        ModularSubstitution { m: [[1, 0], [4, 1]] }
    }
    /// `[[1,0],[2,1]]`
    pub fn gamma0_2_generator() -> Self {
        ModularSubstitution { m: [[1, 0], [2, 1]] }
    }
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.m
    }
    pub fn in_gamma0(&self, level: i64) -> bool {
        self.m[1][0] % level == 0
    }
    pub fn apply(&self, pt: &EvalPoint) -> Result<EvalPoint> {
        pt.moebius(self.m)
    }
    /// `c tau + d`
    pub fn cocycle(&self, pt: &EvalPoint) -> Complex64 {
        pt.tau() * self.m[1][0] as f64 + self.m[1][1] as f64
    }
}

/// Polynomial extrapolation to `x = 0` through the points `(xs[i], ys[i])`.
pub fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let n = xs.len();
    let mut p: Vec<Complex64> = ys.to_vec();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
    }
    p[0]
}
