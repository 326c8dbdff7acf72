use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cyc::{CycFile, CycNum};
use super::{Estimate, EvalPoint, TailBound};
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, int, parse_rat, rat, Rat};

/// `sum_e c_e q^{e/D} + O(q^N)`.
#[derive(Clone, Debug)]
pub struct QSeries {
    exp_den: u32,
    terms: BTreeMap<i64, CycNum>,
    order: Rat,
}

fn ceil_units(order: &Rat, den: u32) -> i64 {
    // smallest e with e/den >= order
    let x = order * int(den as i64);
    x.ceil().to_integer().try_into().expect("exponent fits in i64")
}

impl QSeries {
    pub fn zero(exp_den: u32, order: Rat) -> Self {
        assert!(exp_den >= 1);
        QSeries { exp_den, terms: BTreeMap::new(), order }
    }

    pub fn one(order: Rat) -> Self {
        QSeries::monomial(&Rat::zero(), CycNum::one(), order)
    }

    /// `c q^r + O(q^order)`
    pub fn monomial(r: &Rat, c: CycNum, order: Rat) -> Self {
        let den: u32 = r.denom().try_into().expect("denominator fits in u32");
        let mut s = QSeries::zero(den, order);
        s.add_term(r, c);
        s
    }

    pub fn exp_den(&self) -> u32 {
        self.exp_den
    }

    pub fn order(&self) -> &Rat {
        &self.order
    }

    /// Adds `c q^r`; terms at or past the order are ignored.
    pub fn add_term(&mut self, r: &Rat, c: CycNum) {
        if r >= &self.order {
            return;
        }
        let d = r.denom().clone();
        let den = self.exp_den as i64;
        let need: i64 = d.try_into().expect("denominator fits in i64");
        if den % need != 0 {
            self.set_den((den.lcm(&need)) as u32);
        }
        let e: i64 = (r * int(self.exp_den as i64)).to_integer().try_into().expect("exponent fits in i64");
        match self.terms.get_mut(&e) {
            Some(x) => *x = x.add(&c),
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn set_den(&mut self, new_den: u32) {
        assert!(new_den % self.exp_den == 0);
        let f = (new_den / self.exp_den) as i64;
        let old = std::mem::take(&mut self.terms);
        self.terms = old.into_iter().map(|(e, c)| (e * f, c)).collect();
        self.exp_den = new_den;
    }

    fn with_den(&self, d: u32) -> QSeries {
        let mut s = self.clone();
        if d != s.exp_den {
            s.set_den(d);
        }
        s
    }

    /// Coefficient of `q^r`.
    pub fn coeff(&self, r: &Rat) -> CycNum {
        let x = r * int(self.exp_den as i64);
        if !x.is_integer() {
            return CycNum::zero(1);
        }
        let e: i64 = x.to_integer().try_into().unwrap_or(i64::MAX);
        self.terms.get(&e).cloned().unwrap_or_else(|| CycNum::zero(1))
    }

    /// Nonzero terms as `(exponent, coefficient)` in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (Rat, &CycNum)> {
        let d = self.exp_den as i64;
        self.terms.iter().map(move |(e, c)| (rat(*e, d), c))
    }

    pub fn raw_terms(&self) -> &BTreeMap<i64, CycNum> {
        &self.terms
    }

    /// Drops coefficients that vanish in the cyclotomic field.
    pub fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    /// Smallest exponent with a nonzero coefficient, or the order for the zero series.
    pub fn valuation(&self) -> Rat {
        for (e, c) in &self.terms {
            if !c.is_zero() {
                return rat(*e, self.exp_den as i64);
            }
        }
        self.order.clone()
    }

    pub fn truncate(&self, order: &Rat) -> QSeries {
        let o = if order < &self.order { order.clone() } else { self.order.clone() };
        let lim = ceil_units(&o, self.exp_den);
        QSeries {
            exp_den: self.exp_den,
            terms: self.terms.iter().filter(|(e, _)| **e < lim).map(|(e, c)| (*e, c.clone())).collect(),
            order: o,
        }
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        let d = self.exp_den.lcm(&o.exp_den);
        let order = if self.order < o.order { self.order.clone() } else { o.order.clone() };
        let mut a = self.with_den(d).truncate(&order);
        let b = o.with_den(d);
        let lim = ceil_units(&order, d);
        for (e, c) in b.terms {
            if e >= lim {
                continue;
            }
            match a.terms.get_mut(&e) {
                Some(x) => *x = x.add(&c),
                None => {
                    a.terms.insert(e, c);
                }
            }
        }
        a
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            exp_den: self.exp_den,
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
            order: self.order.clone(),
        }
    }

    pub fn sub(&self, o: &QSeries) -> QSeries {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &CycNum) -> QSeries {
        QSeries {
            exp_den: self.exp_den,
            terms: self.terms.iter().map(|(e, x)| (*e, x.mul(c))).collect(),
            order: self.order.clone(),
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> QSeries {
        QSeries {
            exp_den: self.exp_den,
            terms: self.terms.iter().map(|(e, x)| (*e, x.scale(r))).collect(),
            order: self.order.clone(),
        }
    }

    pub fn mul(&self, o: &QSeries) -> QSeries {
        let d = self.exp_den.lcm(&o.exp_den);
        let a = self.with_den(d);
        let b = o.with_den(d);
        let o1 = &self.order + o.valuation();
        let o2 = &o.order + self.valuation();
        let order = if o1 < o2 { o1 } else { o2 };
        let lim = ceil_units(&order, d);
        let mut terms: BTreeMap<i64, CycNum> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea + eb;
                if e >= lim {
                    break;
                }
                let p = ca.mul(cb);
                match terms.get_mut(&e) {
                    Some(x) => *x = x.add(&p),
                    None => {
                        terms.insert(e, p);
                    }
                }
            }
        }
        QSeries { exp_den: d, terms, order }
    }

    pub fn pow(&self, k: u32) -> QSeries {
        let mut acc = QSeries::one(self.order.clone() + int(1_000_000));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse when the leading coefficient is a unit.
    pub fn inv_unit(&self) -> Result<QSeries> {
        let s = self.clone().normalize();
        let (&v, lead) = s.terms.iter().next().ok_or(Error::NotInvertible)?;
        let lead_inv = lead.inverse()?;
        let d = s.exp_den;
        // known to relative precision order - v, result starts at -v
        let rel = ceil_units(&s.order, d) - v;
        let order = &s.order - rat(2 * v, d as i64);
        let mut r: Vec<CycNum> = Vec::with_capacity(rel.max(0) as usize);
        let rest: Vec<(i64, &CycNum)> = s.terms.iter().skip(1).map(|(e, c)| (e - v, c)).collect();
        for t in 0..rel.max(0) {
            if t == 0 {
                r.push(lead_inv.clone());
                continue;
            }
            let mut acc = CycNum::zero(1);
            for (j, c) in &rest {
                if *j > t {
                    break;
                }
                let prev = &r[(t - j) as usize];
                if !prev.raw_coeffs().iter().all(|x| x.is_zero()) {
                    acc = acc.add(&c.mul(prev));
                }
            }
            r.push(acc.mul(&lead_inv).neg());
        }
        let mut terms = BTreeMap::new();
        for (t, c) in r.into_iter().enumerate() {
            if !c.raw_coeffs().iter().all(|x| x.is_zero()) {
                terms.insert(t as i64 - v, c);
            }
        }
        Ok(QSeries { exp_den: d, terms, order })
    }

    /// `q d/dq`
    pub fn q_derivative(&self) -> QSeries {
        let d = self.exp_den as i64;
        QSeries {
            exp_den: self.exp_den,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(e, c)| (*e, c.scale(&rat(*e, d))))
                .collect(),
            order: self.order.clone(),
        }
    }

    /// The series of `tau -> F(tau + 1)`.
    pub fn shift_tau_by_one(&self) -> QSeries {
        let d = self.exp_den;
        QSeries {
            exp_den: d,
            terms: self.terms.iter().map(|(e, c)| (*e, c.mul(&CycNum::root(d, *e)))).collect(),
            order: self.order.clone(),
        }
    }

    /// `q^r F`
    pub fn mul_q_power(&self, r: &Rat) -> QSeries {
        let mono = QSeries::monomial(r, CycNum::one(), r + &self.order + int(1));
        let d = self.exp_den.lcm(&mono.exp_den);
        let s = self.with_den(d);
        let shift: i64 = (r * int(d as i64)).to_integer().try_into().expect("exponent fits in i64");
        QSeries {
            exp_den: d,
            terms: s.terms.into_iter().map(|(e, c)| (e + shift, c)).collect(),
            order: &self.order + r,
        }
    }

    /// Exact equality of all coefficients below `min(order, other.order)`.
    pub fn agrees_with(&self, o: &QSeries) -> bool {
        let order = if self.order < o.order { self.order.clone() } else { o.order.clone() };
        self.truncate(&order).sub(&o.truncate(&order)).is_zero()
    }

    /// Sums the terms in ascending exponent order and adds the tail bound.
    pub fn evaluate(&self, pt: &EvalPoint, tail: &TailBound, tol: f64) -> Result<Estimate> {
        let est = self.evaluate_unchecked(pt, tail);
        if !(est.error <= tol) {
            return Err(Error::ConvergenceNotAchieved { estimate: est.error, tolerance: tol });
        }
        Ok(est)
    }

    pub fn evaluate_unchecked(&self, pt: &EvalPoint, tail: &TailBound) -> Estimate {
        let d = self.exp_den as f64;
        let mut sum = Complex64::zero();
        let mut abs = 0.0;
        for (e, c) in &self.terms {
            let t = c.eval() * pt.q_pow(*e as f64 / d);
            abs += t.norm();
            sum += t;
        }
        let n = self.terms.len().max(1) as f64;
        let round = 4.0 * f64::EPSILON * abs * n.sqrt();
        let start = ceil_units(&self.order, self.exp_den) as f64 / d;
        Estimate::new(sum, round + tail.tail(start, self.exp_den, pt.y))
    }

    pub fn to_file(&self) -> SeriesFile {
        let s = self.clone().normalize();
        SeriesFile {
            exp_den: s.exp_den,
            order: fmt_rat(&s.order),
            terms: s.terms.iter().map(|(e, c)| TermFile { e: *e, coeff: c.to_file() }).collect(),
        }
    }

    pub fn from_file(f: &SeriesFile) -> Result<QSeries> {
        if f.exp_den == 0 {
            return Err(Error::Parse("exp_den must be positive".into()));
        }
        let order = parse_rat(&f.order)?;
        let mut s = QSeries::zero(f.exp_den, order);
        let lim = ceil_units(&s.order, s.exp_den);
        for t in &f.terms {
            if t.e >= lim {
                return Err(Error::Parse(format!("term exponent {}/{} is past the order", t.e, f.exp_den)));
            }
            let c = CycNum::from_file(&t.coeff)?;
            match s.terms.get_mut(&t.e) {
                Some(x) => *x = x.add(&c),
                None => {
                    s.terms.insert(t.e, c);
                }
            }
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("series serializes")
    }

    pub fn from_json(s: &str) -> Result<QSeries> {
        let f: SeriesFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        QSeries::from_file(&f)
    }

    /// Rational coefficients, when every coefficient is rational.
    pub fn rational_coeffs(&self) -> Option<Vec<(Rat, Rat)>> {
        self.terms().filter(|(_, c)| !c.is_zero()).map(|(r, c)| c.as_rational().map(|x| (r, x))).collect()
    }

    /// Largest coefficient modulus among the stored terms.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.eval().norm()).fold(0.0, f64::max)
    }
}

impl PartialEq for QSeries {
    fn eq(&self, o: &QSeries) -> bool {
        self.order == o.order && self.agrees_with(o)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub e: i64,
    pub coeff: CycFile,
}

/// JSON layout of a series: exponents are `e / exp_den`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesFile {
    pub exp_den: u32,
    pub order: String,
    pub terms: Vec<TermFile>,
}
