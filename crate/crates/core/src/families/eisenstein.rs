//! Eisenstein series as limits of theta series for `Q(v) = v1 v2`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{bernoulli_number, GaussRat, HomPoly};
use crate::qform::{classify_vector, QuadraticForm};
use crate::qseries::{CycNum, Estimate, EvalPoint, QSeries, TailBound};
use crate::rat::{int, to_f64, vec_int, Rat};
use crate::theta::{nonholo_eval, Characteristics, EvalOptions, ThetaSpec};

use super::neville_at_zero;

fn check_k(k: u32) -> Result<()> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::Domain(format!("k must be even and at least 2, got {k}")));
    }
    Ok(())
}

/// `G_k = -B_k/2k + sum_m sigma_{k-1}(m) q^m` up to `q^N`.
pub fn g_series(k: u32, n: i64) -> Result<QSeries> {
    check_k(k)?;
    let mut s = QSeries::zero(1, int(n));
    s.add_term(&Rat::zero(), CycNum::from_rat(-bernoulli_number(k as usize) / int(2 * k as i64)));
    for m in 1..n {
        let mut sigma = BigInt::zero();
        let mut d = 1;
        while d * d <= m {
            if m % d == 0 {
                sigma += BigInt::from(d).pow(k - 1);
                if d * d != m {
                    sigma += BigInt::from(m / d).pow(k - 1);
                }
            }
            d += 1;
        }
        s.add_term(&int(m), CycNum::from_rat(Rat::from_integer(sigma)));
    }
    Ok(s)
}

/// `G_k(tau)` from its q-expansion.
pub fn g_eval(k: u32, pt: &EvalPoint, tol: f64) -> Result<Estimate> {
    let mut n = 32;
    loop {
        let s = g_series(k, n)?;
        match s.evaluate(pt, &TailBound::new(k, 1.0), tol) {
            Ok(e) => return Ok(e),
            Err(e) if n > 4096 => return Err(e),
            Err(_) => n *= 2,
        }
    }
}

/// `f^G_{a,b}(tau) = e^{2 pi i a2 b1} (k-1)! / (2 pi i (a2 tau + b2))^k`
pub fn f_g_eval(a: &[Rat], b: &[Rat], k: u32, pt: &EvalPoint) -> Result<Complex64> {
    if a.len() != 2 || b.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: a.len().min(b.len()) });
    }
    let z = pt.tau() * to_f64(&a[1]) + to_f64(&b[1]);
    if z.norm() == 0.0 {
        return Err(Error::Pole);
    }
    let fact: f64 = (1..k).map(|i| i as f64).product();
    let phase = Complex64::from_polar(1.0, 2.0 * PI * to_f64(&(&a[1] * &b[0])));
    Ok(phase * fact / (Complex64::new(0.0, 2.0 * PI) * z).powu(k))
}

/// `Theta_{a,b}^{c1,c2}[v1^{k-1}]` for `A = [[0,1],[1,0]]`, `c1 = (0,1)`, `c2 = (-1,0)`.
pub fn eisenstein_spec(k: u32, a: Vec<Rat>, b: Vec<Rat>) -> Result<ThetaSpec> {
    if k < 1 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let qf = QuadraticForm::new(vec![vec![0, 1], vec![1, 0]])?;
    let c0 = vec_int(&[-1, 1]);
    let f = HomPoly::monomial(vec![k - 1, 0], GaussRat::one());
    let c1 = classify_vector(&qf, &c0, &vec_int(&[0, 1])).ok_or(Error::NotInCone)?;
    let c2 = classify_vector(&qf, &c0, &vec_int(&[-1, 0])).ok_or(Error::NotInCone)?;
    ThetaSpec::new(qf, c0, f, c1, c2, Characteristics::new(a, b)?, false)
}

/// `Theta_{a,b}/4 - f^G_{a,b}/2` at `tau`. The tolerance is relative to `1 + |f^G|`.
pub fn limit_summand(k: u32, a: Vec<Rat>, b: Vec<Rat>, pt: &EvalPoint, tol: f64) -> Result<Estimate> {
    let fg = f_g_eval(&a, &b, k, pt)?;
    let spec = eisenstein_spec(k, a, b)?;
    let th = nonholo_eval(&spec, pt, &EvalOptions::with_tol(tol * (1.0 + fg.norm())))?;
    Ok(Estimate::new(th.value * 0.25 - fg * 0.5, th.error * 0.25))
}

fn diag(t: &Rat) -> Vec<Rat> {
    vec![t.clone(), t.clone()]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EisensteinReport {
    pub k: u32,
    pub t: Vec<f64>,
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    pub extrapolated: Complex64,
    pub target: Complex64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Values of `Theta/4 - f^G/2` along `a = b = (t,t)` and their extrapolation in `t^2`
/// compared with `G_k(tau)`, for `k >= 4`.
pub fn eisenstein_limit_check(k: u32, pt: &EvalPoint, t_list: &[Rat], tol: f64) -> Result<EisensteinReport> {
    check_k(k)?;
    if k == 2 {
        return Err(Error::Domain("k = 2 depends on the order of the limits; use eisenstein_g2_orders".into()));
    }
    if t_list.is_empty() || t_list.iter().any(|t| t <= &Rat::zero()) {
        return Err(Error::Domain("t values must be positive".into()));
    }
    let target = g_eval(k, pt, 1e-13)?.value;
    let mut values = Vec::new();
    let mut t = Vec::new();
    for s in t_list {
        values.push(limit_summand(k, diag(s), diag(s), pt, 1e-11)?.value);
        t.push(to_f64(s));
    }
    let u: Vec<f64> = t.iter().map(|x| x * x).collect();
    let extrapolated = neville_at_zero(&u, &values);
    let errors = values.iter().map(|v| (v - target).norm()).collect();
    let residual = (extrapolated - target).norm();
    Ok(EisensteinReport { k, t, values, errors, extrapolated, target, residual, tolerance: tol, pass: residual <= tol })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderedLimitsReport {
    /// `lim_b lim_a`, expected `G_2(tau)`.
    pub a_inner: Complex64,
    /// `lim_a lim_b`, expected `G_2(tau) - 1/(4 pi i tau)`.
    pub b_inner: Complex64,
    pub g2: Complex64,
    pub difference: Complex64,
    pub expected_difference: Complex64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// The inner `a`-limit at fixed `b = (s,s)` uses `t = s/4, s/8, s/16, s/32`,
/// inside the radius where the summand is analytic in `t`.
const INNER_RATIOS: [i64; 4] = [4, 8, 16, 32];

/// Both iterated limits of `Theta/4 - f^G/2` for `k = 2` along `a = (t,t)`, `b = (s,s)`.
pub fn eisenstein_g2_orders(pt: &EvalPoint, grid: &[Rat], tol: f64) -> Result<OrderedLimitsReport> {
    if grid.len() < 2 || grid.iter().any(|t| t <= &Rat::zero()) {
        return Err(Error::Domain("need at least two positive grid values".into()));
    }
    let xs: Vec<f64> = grid.iter().map(to_f64).collect();
    let zero = Rat::zero();
    let mut outer = Vec::new();
    for s in grid {
        let ts: Vec<Rat> = INNER_RATIOS.iter().map(|&d| s / int(d)).collect();
        let tx: Vec<f64> = ts.iter().map(to_f64).collect();
        let inner: Vec<Complex64> = ts
            .iter()
            .map(|t| limit_summand(2, diag(t), diag(s), pt, 1e-11).map(|e| e.value))
            .collect::<Result<_>>()?;
        outer.push(neville_at_zero(&tx, &inner));
    }
    let a_inner = neville_at_zero(&xs, &outer);
    let b_vals: Vec<Complex64> = grid
        .iter()
        .map(|t| limit_summand(2, diag(t), diag(&zero), pt, 1e-11).map(|e| e.value))
        .collect::<Result<_>>()?;
    let b_inner = neville_at_zero(&xs, &b_vals);
    let g2 = g_eval(2, pt, 1e-13)?.value;
    let difference = a_inner - b_inner;
    let expected_difference = (Complex64::new(0.0, 4.0 * PI) * pt.tau()).inv();
    let residual = (difference - expected_difference).norm();
    Ok(OrderedLimitsReport {
        a_inner,
        b_inner,
        g2,
        difference,
        expected_difference,
        residual,
        tolerance: tol,
        pass: residual <= tol,
    })
}

/// The characteristic `(t, t)` as used by the limit checks.
pub fn diagonal(t: &Rat) -> Vec<Rat> {
    diag(t)
}
