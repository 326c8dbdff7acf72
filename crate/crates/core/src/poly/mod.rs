//! Homogeneous polynomials, the Laplacian of a quadratic form and the hat operator.

mod bernoulli;
mod uni;

pub use bernoulli::{
    bernoulli_number, bernoulli_poly, bernoulli_tail_identity, eulerian, power_geometric_closed_form,
    power_geometric_closed_form_rat, power_geometric_series_f64, periodic_bernoulli,
};
pub use uni::UniPoly;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qform::QuadraticForm;
use crate::rat::{int, to_f64, Rat};

/// Gaussian rational `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }
    pub fn real(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }
    pub fn i() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::one() }
    }
    pub fn zero() -> Self {
        GaussRat::default()
    }
    pub fn one() -> Self {
        GaussRat::real(Rat::one())
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn scale(&self, r: &Rat) -> Self {
        GaussRat { re: &self.re * r, im: &self.im * r }
    }
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}
impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}
impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}
impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

/// Homogeneous polynomial of degree `d` in `n` variables with Gaussian rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    n: usize,
    d: u32,
    coeffs: BTreeMap<Vec<u32>, GaussRat>,
}

impl HomPoly {
    pub fn zero(n: usize, d: u32) -> Self {
        HomPoly { n, d, coeffs: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: GaussRat) -> Self {
        let mut p = HomPoly::zero(n, 0);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn monomial(exps: Vec<u32>, c: GaussRat) -> Self {
        let n = exps.len();
        let d = exps.iter().sum();
        let mut p = HomPoly::zero(n, d);
        p.add_term(exps, c);
        p
    }

    /// Builds a polynomial from terms; all exponent vectors must have length `n` and total degree `d`.
    pub fn from_terms(n: usize, d: u32, terms: impl IntoIterator<Item = (Vec<u32>, GaussRat)>) -> Result<Self> {
        let mut p = HomPoly::zero(n, d);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: e.len() });
            }
            if e.iter().sum::<u32>() != d {
                return Err(Error::Domain("monomial degree differs from polynomial degree".into()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// The linear form `sum_i w_i v_i`.
    pub fn linear(w: &[Rat]) -> Self {
        let n = w.len();
        let mut p = HomPoly::zero(n, 1);
        for (i, wi) in w.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, GaussRat::real(wi.clone()));
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e.clone()).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn degree(&self) -> u32 {
        self.d
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(|c| c.im.is_zero())
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &GaussRat)> {
        self.coeffs.iter()
    }
    pub fn coeff(&self, e: &[u32]) -> GaussRat {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &HomPoly) -> Result<HomPoly> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: o.n });
        }
        if self.d != o.d && !self.is_zero() && !o.is_zero() {
            return Err(Error::Domain("adding polynomials of different degrees".into()));
        }
        let d = if self.is_zero() { o.d } else { self.d };
        let mut p = HomPoly { n: self.n, d, coeffs: self.coeffs.clone() };
        for (e, c) in &o.coeffs {
            p.add_term(e.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn scale(&self, c: &GaussRat) -> HomPoly {
        let mut p = HomPoly::zero(self.n, self.d);
        for (e, x) in &self.coeffs {
            p.add_term(e.clone(), x * c);
        }
        p
    }

    pub fn scale_rat(&self, r: &Rat) -> HomPoly {
        self.scale(&GaussRat::real(r.clone()))
    }

    pub fn mul(&self, o: &HomPoly) -> Result<HomPoly> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: o.n });
        }
        let mut p = HomPoly::zero(self.n, self.d + o.d);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        Ok(p)
    }

    pub fn pow(&self, k: u32) -> HomPoly {
        let mut r = HomPoly::constant(self.n, GaussRat::one());
        for _ in 0..k {
            r = r.mul(self).expect("same dimension");
        }
        r
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> HomPoly {
        let mut p = HomPoly::zero(self.n, self.d.saturating_sub(1));
        for (e, c) in &self.coeffs {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            p.add_term(e2, c.scale(&int(e[i] as i64)));
        }
        p
    }

    pub fn eval(&self, v: &[Rat]) -> GaussRat {
        let mut acc = GaussRat::zero();
        for (e, c) in &self.coeffs {
            let mut m = Rat::one();
            for (x, &k) in v.iter().zip(e) {
                if k > 0 {
                    m *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc = &acc + &c.scale(&m);
        }
        acc
    }

    pub fn eval_f64(&self, v: &[f64]) -> Complex64 {
        self.to_num().eval(v)
    }

    pub fn to_num(&self) -> NumPoly {
        NumPoly {
            n: self.n,
            d: self.d,
            terms: self.coeffs.iter().map(|(e, c)| (e.clone(), c.to_c64())).collect(),
        }
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.to_c64().norm()).sum()
    }

    /// Substitutes `v = base + m dir` and returns the coefficients of `m^k`, `k = 0..=d`.
    pub fn along_line(&self, base: &[Rat], dir: &[Rat]) -> Vec<GaussRat> {
        let mut out = Vec::with_capacity(self.d as usize + 1);
        let mut p = self.clone();
        let mut fact = Rat::one();
        for k in 0..=self.d {
            if k > 0 {
                p = directional(dir, &p, 1);
                fact *= int(k as i64);
            }
            out.push(p.eval(base).scale(&(Rat::one() / &fact)));
        }
        out
    }
}

/// Polynomial with floating complex coefficients, used by the numerical evaluators.
#[derive(Clone, Debug, PartialEq)]
pub struct NumPoly {
    n: usize,
    d: u32,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl NumPoly {
    pub fn degree(&self) -> u32 {
        self.d
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn eval(&self, v: &[f64]) -> Complex64 {
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut m = 1.0;
            for (x, &k) in v.iter().zip(e) {
                if k > 0 {
                    m *= x.powi(k as i32);
                }
            }
            acc += c * m;
        }
        acc
    }
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }
    /// `(c . grad)` applied once.
    pub fn directional(&self, c: &[f64]) -> NumPoly {
        let mut map: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        for (e, x) in &self.terms {
            for i in 0..self.n {
                if e[i] == 0 || c[i] == 0.0 {
                    continue;
                }
                let mut e2 = e.clone();
                e2[i] -= 1;
                *map.entry(e2).or_insert_with(Complex64::zero) += x * (e[i] as f64 * c[i]);
            }
        }
        NumPoly {
            n: self.n,
            d: self.d.saturating_sub(1),
            terms: map.into_iter().filter(|(_, v)| *v != Complex64::zero()).collect(),
        }
    }
    pub fn scale(&self, s: Complex64) -> NumPoly {
        NumPoly { n: self.n, d: self.d, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }
}

/// `Delta f = sum_{ij} (A^{-1})_{ij} d_i d_j f`.
pub fn laplacian(qf: &QuadraticForm, f: &HomPoly) -> Result<HomPoly> {
    let n = qf.dim();
    if f.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.dim() });
    }
    if f.degree() < 2 {
        return Ok(HomPoly::zero(n, 0));
    }
    let inv = qf.inverse();
    let mut out = HomPoly::zero(n, f.degree() - 2);
    for i in 0..n {
        let di = f.partial(i);
        for j in 0..n {
            if inv[i][j].is_zero() {
                continue;
            }
            out = out.add(&di.partial(j).scale_rat(&inv[i][j]))?;
        }
    }
    Ok(out)
}

pub fn is_spherical(qf: &QuadraticForm, f: &HomPoly) -> Result<bool> {
    Ok(laplacian(qf, f)?.is_zero())
}

/// `(c . grad)^k p` without normalization.
pub fn directional(c: &[Rat], p: &HomPoly, k: u32) -> HomPoly {
    let mut cur = p.clone();
    for _ in 0..k {
        let mut next = HomPoly::zero(cur.n, cur.d.saturating_sub(1));
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            next = next.add(&cur.partial(i).scale_rat(ci)).expect("same shape");
        }
        cur = next;
    }
    cur
}

/// `f^ = sum_k pi^{-k} p_k` with `p_k = (-1)^k / (8^k k!) Delta^k f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatPoly {
    degree: u32,
    layers: Vec<(u32, HomPoly)>,
}

impl HatPoly {
    pub fn layers(&self) -> &[(u32, HomPoly)] {
        &self.layers
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn base(&self) -> &HomPoly {
        &self.layers[0].1
    }
    /// `f^(v)` with a floating value of pi.
    pub fn eval_f64(&self, v: &[f64]) -> Complex64 {
        self.layers
            .iter()
            .map(|(k, p)| p.eval_f64(v) * std::f64::consts::PI.powi(-(*k as i32)))
            .sum()
    }
    /// Each layer scaled by `(pi y)^{-k}`, i.e. the polynomial `l -> y^{-d/2} f^(l sqrt y)`.
    pub fn scaled_numeric(&self, y: f64) -> Vec<NumPoly> {
        self.layers
            .iter()
            .map(|(k, p)| p.to_num().scale(Complex64::new((std::f64::consts::PI * y).powi(-(*k as i32)), 0.0)))
            .collect()
    }
}

pub fn hat(qf: &QuadraticForm, f: &HomPoly) -> Result<HatPoly> {
    let mut layers = vec![(0u32, f.clone())];
    let mut cur = f.clone();
    let mut k = 0u32;
    let mut denom = Rat::one();
    while cur.degree() >= 2 {
        cur = laplacian(qf, &cur)?;
        k += 1;
        denom *= int(-8 * k as i64);
        if cur.is_zero() {
            break;
        }
        layers.push((k, cur.scale_rat(&(Rat::one() / &denom))));
    }
    Ok(HatPoly { degree: f.degree(), layers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, vec_int};

    fn r(x: i64) -> GaussRat {
        GaussRat::real(int(x))
    }

    #[test]
    fn laplacians() {
        let hyp = QuadraticForm::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let f = HomPoly::monomial(vec![3, 0], r(1));
        assert!(laplacian(&hyp, &f).unwrap().is_zero());
        let g = HomPoly::monomial(vec![1, 1], r(1));
        assert_eq!(laplacian(&hyp, &g).unwrap(), HomPoly::constant(2, r(2)));
        let h = QuadraticForm::new(vec![vec![1, 1], vec![1, 0]]).unwrap();
        assert!(is_spherical(&h, &HomPoly::monomial(vec![2, 0], r(1))).unwrap());
        assert!(!is_spherical(&hyp, &g).unwrap());
        assert!(is_spherical(&hyp, &HomPoly::linear(&vec_int(&[3, 4]))).unwrap());
    }

    #[test]
    fn hat_layers() {
        let hyp = QuadraticForm::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let g = HomPoly::monomial(vec![1, 1], r(1));
        let hg = hat(&hyp, &g).unwrap();
        assert_eq!(hg.layers().len(), 2);
        assert_eq!(hg.layers()[1], (1, HomPoly::constant(2, GaussRat::real(rat(-1, 4)))));
        let f = HomPoly::monomial(vec![3, 0], r(1));
        assert_eq!(hat(&hyp, &f).unwrap().layers(), &[(0, f.clone())]);
        let c = HomPoly::constant(2, r(5));
        assert_eq!(hat(&hyp, &c).unwrap().layers(), &[(0, c.clone())]);
    }

    #[test]
    fn directional_derivatives() {
        let p = HomPoly::monomial(vec![3, 0], r(1));
        assert_eq!(directional(&vec_int(&[1, 0]), &p, 2), HomPoly::monomial(vec![1, 0], r(6)));
        let q = HomPoly::monomial(vec![1, 1], r(1));
        assert_eq!(directional(&vec_int(&[1, 1]), &q, 1), HomPoly::linear(&vec_int(&[1, 1])));
        assert!(directional(&vec_int(&[1, 1]), &q, 3).is_zero());
    }

    #[test]
    fn line_substitution() {
        let p = HomPoly::monomial(vec![1, 1], r(1));
        // (1 + 2m)(3 + m) = 3 + 7m + 2m^2
        let c = p.along_line(&vec_int(&[1, 3]), &vec_int(&[2, 1]));
        assert_eq!(c, vec![r(3), r(7), r(2)]);
    }

    #[test]
    fn numeric_eval_matches_exact() {
        let p = HomPoly::from_terms(
            2,
            2,
            vec![(vec![2, 0], GaussRat::new(rat(1, 3), int(1))), (vec![0, 2], r(-2))],
        )
        .unwrap();
        let v = [rat(1, 2), rat(-3, 4)];
        let e = p.eval(&v).to_c64();
        let f = p.eval_f64(&[0.5, -0.75]);
        assert!((e - f).norm() < 1e-15);
    }
}
