//! The generating function of the Hurwitz class numbers `H(8n+7)` as an
//! indefinite theta quotient.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{GaussRat, HomPoly};
use crate::qform::{classify_real, classify_vector, QuadraticForm};
use crate::qseries::numeric::{eta, humbert, theta2};
use crate::qseries::{standard, CycNum, Estimate, EvalPoint, QSeries};
use crate::rat::{int, rat, vec_int, Rat};
use crate::special::beta_gen;
use crate::theta::{holomorphic_expansion, nonholo_eval, Characteristics, EvalOptions, ThetaSpec};

use super::{Comparison, ModularSubstitution};

/// Hurwitz class number: reduced positive forms of discriminant `-n`,
/// with forms equivalent to multiples of `x^2 + y^2` and `x^2 + xy + y^2`
/// weighted by `1/2` and `1/3`. `H(0) = -1/12`.
pub fn hurwitz_h(n: i64) -> Rat {
    if n == 0 {
        return rat(-1, 12);
    }
    if n < 0 || n % 4 == 1 || n % 4 == 2 {
        return Rat::zero();
    }
    let mut h = Rat::zero();
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a..=a {
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && (-b == a || a == c)) {
                continue;
            }
            h += if a == b && b == c {
                rat(1, 3)
            } else if b == 0 && a == c {
                rat(1, 2)
            } else {
                int(1)
            };
        }
        a += 1;
    }
    h
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HumbertReport {
    pub checked: usize,
    pub mismatches: Vec<i64>,
    pub pass: bool,
}

/// `1/(q (q)_inf^3) sum (-1)^{m+1} m^2 q^{m(m+1)/2} / (1 + q^m)` up to `q^N`.
pub fn humbert_series(n: i64) -> Result<QSeries> {
    let cube = standard::euler_prod(n + 1).pow(3);
    let num = standard::humbert(n + 1).mul(&cube.inv_unit()?);
    Ok(num.mul_q_power(&int(-1)).truncate(&int(n)))
}

/// Compares the coefficients of [`humbert_series`] with `H(8n+7)` for `n < N`.
pub fn humbert_check(n: i64) -> Result<HumbertReport> {
    if !(1..=2000).contains(&n) {
        return Err(Error::Domain("N must lie in 1..=2000".into()));
    }
    let s = humbert_series(n)?;
    let mismatches: Vec<i64> =
        (0..n).filter(|&m| s.coeff(&int(m)).as_rational() != Some(hurwitz_h(8 * m + 7))).collect();
    Ok(HumbertReport { checked: n as usize, pass: mismatches.is_empty(), mismatches })
}

/// `A = [[1,1],[1,0]]`, `f = n1^2`, `a = (0,1/2)`, `b = (1/2,0)`, `c1 = (0,1)`,
/// `c2 = sqrt(2)(-1,1)`.
pub fn hurwitz_theta_spec() -> ThetaSpec {
    let qf = QuadraticForm::new(vec![vec![1, 1], vec![1, 0]]).expect("fixed form");
    let c0 = vec_int(&[-1, 1]);
    let f = HomPoly::monomial(vec![2, 0], GaussRat::one());
    let c1 = classify_vector(&qf, &c0, &vec_int(&[0, 1])).expect("cusp");
    let r2 = 2f64.sqrt();
    let c2 = classify_real(&qf, &c0, &[-r2, r2], Some(&vec_int(&[-1, 1]))).expect("interior");
    let chars = Characteristics::new(vec![int(0), rat(1, 2)], vec![rat(1, 2), int(0)]).expect("chars");
    ThetaSpec::new(qf, c0, f, c1, c2, chars, true).expect("valid spec")
}

/// `-4i sum (-1)^{m+1} m^2 q^{m(m+1)/2}/(1 + q^m)` against the exact expansion of
/// [`hurwitz_theta_spec`] up to `q^N`.
pub fn holomorphic_bridge(n: i64) -> Result<bool> {
    let e = holomorphic_expansion(&hurwitz_theta_spec(), &int(n))?;
    let h = standard::humbert(n).scale(&CycNum::i().scale(&int(-4)));
    Ok(e.agrees_with(&h) && e.order() == h.order())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    Theta,
    BetaFormula,
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(Route::Theta),
            "beta" | "beta_formula" | "beta-formula" => Ok(Route::BetaFormula),
            _ => Err(Error::Parse(format!("unknown route '{s}'"))),
        }
    }
}

/// Holomorphic part `q^{7/8} H_{8,7}(q)`.
pub fn holomorphic_part(pt: &EvalPoint) -> Result<Estimate> {
    humbert(pt).div(&eta(pt).mul(&eta(pt)).mul(&eta(pt)))
}

/// `(1/8 pi) q^{-1/8} sum_n |2n+1| beta(-1/2; 2(n+1/2)^2 y) q^{-n(n+1)/2}`
pub fn nonholomorphic_part(pt: &EvalPoint) -> Result<Estimate> {
    let y = pt.y;
    let mut sum = Complex64::zero();
    let mut abs = 0.0;
    let mut n = 0i64;
    loop {
        let nf = n as f64;
        let h = nf + 0.5;
        let t = pt.q_pow(-nf * (nf + 1.0) / 2.0) * ((2.0 * nf + 1.0) * beta_gen(-1, 2.0 * h * h * y)?);
        sum += 2.0 * t;
        abs += 2.0 * t.norm();
        if n > 2 && t.norm() < 1e-18 * abs {
            break;
        }
        n += 1;
        if n > 100_000 {
            return Err(Error::ConvergenceNotAchieved { estimate: t.norm(), tolerance: 1e-18 });
        }
    }
    let pre = pt.q_pow(-1.0 / 8.0) / (8.0 * PI);
    Ok(Estimate::new(sum * pre, 8.0 * f64::EPSILON * abs * pre.norm()))
}

/// The completed function `F = q^{7/8} H_{8,7} + (non-holomorphic part)`.
pub fn f_maass_eval(pt: &EvalPoint, tol: f64, route: Route) -> Result<Estimate> {
    let est = match route {
        Route::Theta => {
            let th = nonholo_eval(&hurwitz_theta_spec(), pt, &EvalOptions::with_tol((tol * 1e-2).max(1e-14)))?;
            let e = eta(pt);
            th.scale(Complex64::new(0.0, 0.25)).div(&e.mul(&e).mul(&e))?
        }
        Route::BetaFormula => holomorphic_part(pt)?.add(&nonholomorphic_part(pt)?),
    };
    if !(est.error <= tol) {
        return Err(Error::ConvergenceNotAchieved { estimate: est.error, tolerance: tol });
    }
    Ok(est)
}

/// `theta_2 F` at `gamma tau` against `(c tau + d)^2 theta_2 F` at `tau` for `gamma` in `Gamma_0(2)`.
pub fn gamma0_2_check(g: &ModularSubstitution, pt: &EvalPoint, tol: f64, route: Route) -> Result<Comparison> {
    if !g.in_gamma0(2) {
        return Err(Error::Domain("gamma must lie in Gamma_0(2)".into()));
    }
    let inner = (tol * 1e-3).max(1e-13);
    let gt = g.apply(pt)?;
    let lhs = theta2(&gt).value * f_maass_eval(&gt, inner, route)?.value;
    let rhs = g.cocycle(pt).powu(2) * theta2(pt).value * f_maass_eval(pt, inner, route)?.value;
    Ok(Comparison::relative(lhs, rhs, tol))
}

/// `xi_k(g) = 2i y^k conj(dg/d tau-bar)` by central differences of step `h`.
pub fn xi_numeric(g: &dyn Fn(&EvalPoint) -> Result<Complex64>, weight: f64, pt: &EvalPoint, h: f64) -> Result<Complex64> {
    let at = |dx: f64, dy: f64| g(&EvalPoint::new(pt.x + dx, pt.y + dy)?);
    let dx = (at(h, 0.0)? - at(-h, 0.0)?) / (2.0 * h);
    let dy = (at(0.0, h)? - at(0.0, -h)?) / (2.0 * h);
    let dbar = (dx + Complex64::i() * dy) * 0.5;
    Ok(Complex64::new(0.0, 2.0) * pt.y.powf(weight) * dbar.conj())
}

/// `xi_{3/2}(F)` against `-theta_2 / (4 pi sqrt 2)`.
pub fn xi_check(pt: &EvalPoint, h: f64, tol: f64, route: Route) -> Result<Comparison> {
    if !(1e-5..=1e-3).contains(&h) {
        return Err(Error::Domain("h must lie in [1e-5, 1e-3]".into()));
    }
    if pt.y <= h {
        return Err(Error::Domain("step leaves the upper half plane".into()));
    }
    let f = |p: &EvalPoint| f_maass_eval(p, 1e-12, route).map(|e| e.value);
    let lhs = xi_numeric(&f, 1.5, pt, h)?;
    let rhs = -theta2(pt).value / (4.0 * PI * 2f64.sqrt());
    Ok(Comparison::absolute(lhs, rhs, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers() {
        assert_eq!(hurwitz_h(3), rat(1, 3));
        assert_eq!(hurwitz_h(4), rat(1, 2));
        assert_eq!(hurwitz_h(7), int(1));
        assert_eq!(hurwitz_h(8), int(1));
        assert_eq!(hurwitz_h(12), rat(4, 3));
        assert_eq!(hurwitz_h(15), int(2));
        assert_eq!(hurwitz_h(23), int(3));
        assert_eq!(hurwitz_h(5), int(0));
    }

    #[test]
    fn first_humbert_coefficients() {
        let s = humbert_series(4).unwrap();
        let c: Vec<Rat> = (0..4).map(|n| s.coeff(&int(n)).as_rational().unwrap()).collect();
        assert_eq!(c, vec![int(1), int(2), int(3), int(3)]);
    }
}
