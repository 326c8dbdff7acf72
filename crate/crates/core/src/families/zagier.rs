//! Zagier's generating functions `S_x` and `T_x` of weight `k + 1/2` on `Gamma_0(4)`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{bernoulli_number, bernoulli_poly, periodic_bernoulli, HomPoly, UniPoly};
use crate::qform::{classify_vector, QuadraticForm};
use crate::qseries::numeric::{theta, unary_theta_char};
use crate::qseries::{CycNum, Estimate, EvalPoint, QSeries, TailBound};
use crate::rat::{int, to_f64, vec_int, Rat};
use crate::theta::{nonholo_eval, Characteristics, EvalOptions, ThetaSpec};

use super::{Comparison, ModularSubstitution};

/// Which binary forms `(a, b, c)` of discriminant `D` to collect.
#[derive(Clone, Debug, PartialEq)]
pub enum FormCone {
    /// `a > 0 > c`
    Split,
    /// `a x^2 + b x + c > 0 > a`, with `a >= a_min`. Without `a_min` the
    /// enumeration is complete.
    PositiveAt { x: Rat, a_min: Option<i64> },
}

fn check_disc(d: i64) -> Result<()> {
    if d <= 0 {
        return Err(Error::Domain(format!("discriminant must be positive, got {d}")));
    }
    Ok(())
}

fn check_k(k: u32) -> Result<()> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::Domain(format!("k must be even and at least 2, got {k}")));
    }
    Ok(())
}

fn square_root(d: i64) -> Option<i64> {
    let m = d.sqrt();
    (m * m == d).then_some(m)
}

/// Complete list for `|a| <= D s^2 / 4` where `s` is the denominator of `x`.
fn default_depth(d: i64, x: &Rat) -> i64 {
    let s = x.denom();
    let bound = (BigInt::from(d) * s * s) / BigInt::from(4);
    i64::try_from(bound).unwrap_or(i64::MAX).max(1)
}

/// Forms `(a, b, c)` with `b^2 - 4ac = D` in the given cone.
pub fn enumerate_forms(d: i64, cone: &FormCone) -> Result<Vec<(i64, i64, i64)>> {
    check_disc(d)?;
    let mut out = Vec::new();
    match cone {
        FormCone::Split => {
            let bmax = (d - 1).sqrt();
            for b in -bmax..=bmax {
                if b * b >= d || (d - b * b) % 4 != 0 {
                    continue;
                }
                let n = (d - b * b) / 4;
                for a in 1..=n {
                    if n % a == 0 {
                        out.push((a, b, -n / a));
                    }
                }
            }
        }
        FormCone::PositiveAt { x, a_min } => {
            let depth = match a_min {
                Some(m) if *m >= 0 => return Err(Error::Domain("a_min must be negative".into())),
                Some(m) => -m,
                None => default_depth(d, x),
            };
            let xf = to_f64(x);
            let rd = (d as f64).sqrt();
            for an in 1..=depth {
                let a = -an;
                let centre = -2.0 * a as f64 * xf;
                let lo = (centre - rd).floor() as i64 - 1;
                let hi = (centre + rd).ceil() as i64 + 1;
                for b in lo..=hi {
                    let num = b * b - d;
                    if num % (4 * a) != 0 {
                        continue;
                    }
                    let c = num / (4 * a);
                    let v = form_value(a, b, c, x);
                    if v.is_positive() {
                        out.push((a, b, c));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn form_value(a: i64, b: i64, c: i64, x: &Rat) -> Rat {
    (int(a) * x + int(b)) * x + int(c)
}

/// `x^{2k-2} B_k(m / x)` as a polynomial in `x`.
fn reversed_bernoulli(k: u32, m: i64) -> UniPoly {
    bernoulli_poly(k as usize).rescale_var(&int(m)).reverse_homogenize(2 * k as usize - 2)
}

/// `P_{k,D}(x)`.
pub fn p_kd(k: u32, d: i64) -> Result<UniPoly> {
    check_k(k)?;
    let kr = int(k as i64);
    if d < 0 {
        return Err(Error::Domain("negative discriminant".into()));
    }
    if d == 0 {
        let c = bernoulli_number(k as usize) / (int(2) * &kr);
        let mut v = vec![Rat::zero(); 2 * k as usize - 1];
        v[0] = c.clone();
        v[2 * k as usize - 2] = -c;
        return Ok(UniPoly::new(v));
    }
    let mut p = UniPoly::zero();
    for (a, b, c) in enumerate_forms(d, &FormCone::Split)? {
        let q = UniPoly::new(vec![int(c), int(b), int(a)]);
        p = &p + &q.pow(k - 1);
    }
    if let Some(m) = square_root(d) {
        let bk = bernoulli_poly(k as usize).rescale_var(&int(m));
        let corr = (&bk - &reversed_bernoulli(k, m)).scale(&(Rat::one() / &kr));
        p = &p + &corr;
    }
    Ok(p)
}

/// `kappa(r/s) = 1/s^2`.
pub fn kappa(x: &Rat) -> Rat {
    let s = x.denom();
    Rat::new(BigInt::one(), s * s)
}

/// `F_{k,D}(x)` for rational `x`. The sum over forms is finite.
pub fn f_kd(k: u32, d: i64, x: &Rat) -> Result<Rat> {
    check_k(k)?;
    let kr = int(k as i64);
    if d < 0 {
        return Err(Error::Domain("negative discriminant".into()));
    }
    if d == 0 {
        return Ok(-bernoulli_number(k as usize) / (int(2) * kr));
    }
    let mut s = Rat::zero();
    for (a, b, c) in enumerate_forms(d, &FormCone::PositiveAt { x: x.clone(), a_min: None })? {
        s += num_traits::pow(form_value(a, b, c, x), (k - 1) as usize);
    }
    if let Some(m) = square_root(d) {
        s -= periodic_bernoulli(k as usize, &(int(m) * x)) / &kr;
        if k == 2 {
            s += int(m * m) * kappa(x) / int(2);
        }
    }
    Ok(s)
}

/// Partial sum of `F_{k,D}(x)` over `a_min <= a <= -1` together with a bound
/// for the omitted terms.
pub fn f_kd_truncated(k: u32, d: i64, x: &Rat, a_min: i64) -> Result<(f64, f64)> {
    check_k(k)?;
    if k < 4 {
        return Err(Error::Domain("the truncated sum needs k >= 4".into()));
    }
    let forms = enumerate_forms(d, &FormCone::PositiveAt { x: x.clone(), a_min: Some(a_min) })?;
    let mut s = Rat::zero();
    for (a, b, c) in forms {
        s += num_traits::pow(form_value(a, b, c, x), (k - 1) as usize);
    }
    let rd = (d as f64).sqrt();
    let n = -a_min as f64;
    let tail = (2.0 * rd + 1.0) * (d as f64 / 4.0).powi(k as i32 - 1) / ((k as f64 - 2.0) * n.powi(k as i32 - 2));
    Ok((to_f64(&s), tail))
}

fn one_norm_bernoulli(k: u32) -> f64 {
    bernoulli_poly(k as usize).coeffs().iter().map(|c| to_f64(c).abs()).sum()
}

/// `S_x = sum_D P_{k,D}(x) q^D` up to `q^N`.
pub fn s_series(k: u32, x: &Rat, n: i64) -> Result<QSeries> {
    let mut s = QSeries::zero(1, int(n));
    for d in 0..n {
        s.add_term(&int(d), CycNum::from_rat(p_kd(k, d)?.eval(x)));
    }
    Ok(s)
}

/// `T_x = sum_D F_{k,D}(x) q^D` up to `q^N`.
pub fn t_series(k: u32, x: &Rat, n: i64) -> Result<QSeries> {
    let mut s = QSeries::zero(1, int(n));
    for d in 0..n {
        s.add_term(&int(d), CycNum::from_rat(f_kd(k, d, x)?));
    }
    Ok(s)
}

/// Coefficient growth of `S_x` and `T_x`.
pub fn series_tail(k: u32, x: &Rat) -> TailBound {
    let ax = 1.0 + to_f64(x).abs();
    let s = to_f64(&Rat::from_integer(x.denom().clone()));
    let c = 3.0 * ax.powi(2 * k as i32 - 2) * (1.0 + one_norm_bernoulli(k)) + 3.0 * (1.0 + s) + 4.0;
    TailBound::new(k + 1, c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesKind {
    S,
    T,
}

impl std::str::FromStr for SeriesKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" | "s" => Ok(SeriesKind::S),
            "T" | "t" => Ok(SeriesKind::T),
            _ => Err(Error::Parse(format!("unknown series '{s}'"))),
        }
    }
}

/// Evaluates `S_x` or `T_x` at `tau` from the q-expansion.
pub fn series_eval(kind: SeriesKind, k: u32, x: &Rat, pt: &EvalPoint, tol: f64) -> Result<Estimate> {
    let tail = series_tail(k, x);
    let mut n = 16;
    loop {
        let s = match kind {
            SeriesKind::S => s_series(k, x, n)?,
            SeriesKind::T => t_series(k, x, n)?,
        };
        match s.evaluate(pt, &tail, tol) {
            Ok(e) => return Ok(e),
            Err(e) if n >= 1024 => return Err(e),
            Err(_) => n *= 2,
        }
    }
}

/// `f_{(a,b)}(tau) = -(k-1)!/(8 pi i)^k (a1 tau + b1)^{-k} e^{-8 pi i a1 b3} sum_{m in a2 + Z} q^{m^2} e^{4 pi i b2 m}`
pub fn f_ab_eval(a: &[Rat], b: &[Rat], k: u32, pt: &EvalPoint) -> Result<Estimate> {
    if a.len() != 3 || b.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: a.len().min(b.len()) });
    }
    let z = pt.tau() * to_f64(&a[0]) + to_f64(&b[0]);
    if z.norm() == 0.0 {
        return Err(Error::Pole);
    }
    let fact: f64 = (1..k).map(|i| i as f64).product();
    let pre = -fact / (Complex64::new(0.0, 8.0 * PI)).powu(k) / z.powu(k)
        * Complex64::from_polar(1.0, -8.0 * PI * to_f64(&(&a[0] * &b[2])));
    let th = unary_theta_char(to_f64(&a[1]), 2.0 * to_f64(&b[1]), 1.0, pt);
    Ok(th.scale(pre))
}

/// `j(gamma, tau) = theta(gamma tau) / theta(tau)` for `gamma` in `Gamma_0(4)`.
pub fn j_factor(g: &ModularSubstitution, pt: &EvalPoint) -> Result<Estimate> {
    if !g.in_gamma0(4) {
        return Err(Error::Domain("j is defined on Gamma_0(4)".into()));
    }
    theta(&g.apply(pt)?).div(&theta(pt))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapDirection {
    Tilde,
    Hat,
}

/// The substitutions `v -> v~` and `v -> v^` attached to `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicMap {
    pub x: Rat,
    pub direction: MapDirection,
}

impl CharacteristicMap {
    pub fn new(x: Rat, direction: MapDirection) -> Result<Self> {
        if direction == MapDirection::Hat && x.is_zero() {
            return Err(Error::Domain("the hat map needs x != 0".into()));
        }
        Ok(CharacteristicMap { x, direction })
    }

    pub fn apply(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: v.len() });
        }
        let x = match self.direction {
            MapDirection::Tilde => self.x.clone(),
            MapDirection::Hat => self.x.recip(),
        };
        let (p, m, r) = match self.direction {
            MapDirection::Tilde => (&v[0], &v[1], &v[2]),
            MapDirection::Hat => (&v[2], &v[1], &v[0]),
        };
        Ok(vec![p.clone(), int(2) * p * &x + m, (p * &x + m) * &x + r])
    }
}

/// `(a', b') = (a, b) gamma`
pub fn right_multiply(a: &[Rat], b: &[Rat], g: &ModularSubstitution) -> (Vec<Rat>, Vec<Rat>) {
    let m = g.matrix();
    let ap = a.iter().zip(b).map(|(x, y)| int(m[0][0]) * x + int(m[1][0]) * y).collect();
    let bp = a.iter().zip(b).map(|(x, y)| int(m[0][1]) * x + int(m[1][1]) * y).collect();
    (ap, bp)
}

fn zagier_form() -> QuadraticForm {
    QuadraticForm::new(vec![vec![0, 0, -4], vec![0, 2, 0], vec![-4, 0, 0]]).expect("fixed form")
}

/// `(n1 x^2 + n2 x + n3)^{k-1}`
pub fn zagier_poly(k: u32, x: &Rat) -> HomPoly {
    HomPoly::linear(&[x * x, x.clone(), Rat::one()]).pow(k - 1)
}

fn quarter(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&c| Rat::new(BigInt::from(-c), BigInt::from(4))).collect()
}

/// Theta spec with cusps `-(0,0,1)/4` and `-(1,0,0)/4` (the `S_x` pair) or
/// `-(1,-2x,x^2)/4` and `-(0,0,1)/4` (the `T_x` pair).
pub fn zagier_spec(kind: SeriesKind, k: u32, x: &Rat, a: Vec<Rat>, b: Vec<Rat>) -> Result<ThetaSpec> {
    check_k(k)?;
    let qf = zagier_form();
    let c0 = vec_int(&[-1, 0, -1]);
    let (v1, v2) = match kind {
        SeriesKind::S => (quarter(&[0, 0, 1]), quarter(&[1, 0, 0])),
        SeriesKind::T => {
            let q = Rat::new(BigInt::from(-1), BigInt::from(4));
            (vec![q.clone(), int(-2) * x * &q, x * x * &q], quarter(&[0, 0, 1]))
        }
    };
    let c1 = classify_vector(&qf, &c0, &v1).ok_or(Error::NotInCone)?;
    let c2 = classify_vector(&qf, &c0, &v2).ok_or(Error::NotInCone)?;
    ThetaSpec::new(qf, c0, zagier_poly(k, x), c1, c2, Characteristics::new(a, b)?, false)
}

/// The expression whose limit `a, b -> 0` is `S_x` or `T_x`:
/// `(Theta/2 - f_(a~,b~) + x^{2k-2} f_(a^,b^))/2` for `S` and
/// `(Theta/2 + f_(a~,b~))/2` for `T`. The tolerance is relative to the size of the `f` terms.
pub fn limit_summand(kind: SeriesKind, k: u32, x: &Rat, a: Vec<Rat>, b: Vec<Rat>, pt: &EvalPoint, tol: f64) -> Result<Estimate> {
    let tilde = CharacteristicMap::new(x.clone(), MapDirection::Tilde)?;
    let (at, bt) = (tilde.apply(&a)?, tilde.apply(&b)?);
    let ft = f_ab_eval(&at, &bt, k, pt)?;
    let fh = match kind {
        SeriesKind::S => {
            let hat = CharacteristicMap::new(x.clone(), MapDirection::Hat)?;
            let w = to_f64(&num_traits::pow(x.clone(), 2 * k as usize - 2));
            Some(f_ab_eval(&hat.apply(&a)?, &hat.apply(&b)?, k, pt)?.scale(Complex64::new(w, 0.0)))
        }
        SeriesKind::T => None,
    };
    let scale = 1.0 + ft.value.norm() + fh.map_or(0.0, |e| e.value.norm());
    let spec = zagier_spec(kind, k, x, a, b)?;
    let th = nonholo_eval(&spec, pt, &EvalOptions::with_tol(tol * scale))?.scale(Complex64::new(0.5, 0.0));
    let total = match fh {
        Some(fh) => th.sub(&ft).add(&fh),
        None => th.add(&ft),
    };
    Ok(total.scale(Complex64::new(0.5, 0.0)))
}

/// `|F(gamma tau) - j(gamma,tau)^{2k+1} F(tau)|` for `F = S_x` or `T_x`.
pub fn verify_sx_tx(
    kind: SeriesKind,
    k: u32,
    x: &Rat,
    g: &ModularSubstitution,
    pt: &EvalPoint,
    tol: f64,
) -> Result<Comparison> {
    if !g.in_gamma0(4) {
        return Err(Error::Domain("gamma must lie in Gamma_0(4)".into()));
    }
    let inner = (tol * 1e-3).max(1e-14);
    let gt = g.apply(pt)?;
    let lhs = series_eval(kind, k, x, &gt, inner)?.value;
    let j = j_factor(g, pt)?.value;
    let rhs = j.powu(2 * k + 1) * series_eval(kind, k, x, pt, inner)?.value;
    Ok(Comparison::relative(lhs, rhs, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn small_discriminants() {
        assert_eq!(enumerate_forms(5, &FormCone::Split).unwrap(), vec![(1, -1, -1), (1, 1, -1)]);
        assert_eq!(enumerate_forms(4, &FormCone::Split).unwrap(), vec![(1, 0, -1)]);
        assert!(enumerate_forms(1, &FormCone::Split).unwrap().is_empty());
        assert!(enumerate_forms(0, &FormCone::Split).is_err());
        assert_eq!(p_kd(2, 5).unwrap(), UniPoly::new(vec![int(-2), int(0), int(2)]));
        assert_eq!(kappa(&rat(3, 4)), rat(1, 16));
        assert_eq!(f_kd(4, 0, &rat(1, 2)).unwrap(), rat(1, 240));
    }

    #[test]
    fn p_square_correction() {
        let p = p_kd(2, 1).unwrap();
        assert_eq!(p, UniPoly::new(vec![rat(-5, 12), int(0), rat(5, 12)]));
    }

    #[test]
    fn positive_cone_membership() {
        let x = rat(1, 3);
        for d in 1..30 {
            for (a, b, c) in enumerate_forms(d, &FormCone::PositiveAt { x: x.clone(), a_min: None }).unwrap() {
                assert!(a < 0 && b * b - 4 * a * c == d);
                let w = int(2 * a) * &x + int(b);
                assert!(&w * &w < int(d));
            }
        }
    }

    #[test]
    fn maps_match_hand_values() {
        let t = CharacteristicMap::new(rat(1, 2), MapDirection::Tilde).unwrap();
        assert_eq!(t.apply(&vec_int(&[1, 1, 1])).unwrap(), vec![int(1), int(2), rat(7, 4)]);
        let h = CharacteristicMap::new(rat(1, 2), MapDirection::Hat).unwrap();
        assert_eq!(h.apply(&vec_int(&[1, 1, 1])).unwrap(), vec![int(1), int(5), int(7)]);
        assert!(CharacteristicMap::new(int(0), MapDirection::Hat).is_err());
    }
}
