use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::rat::{to_f64, Rat};

/// Univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }
    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }
    pub fn constant(c: Rat) -> Self {
        UniPoly::new(vec![c])
    }
    /// `c X^k`
    pub fn monomial(k: usize, c: Rat) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        UniPoly::new(v)
    }
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }
    pub fn scale(&self, r: &Rat) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * r).collect())
    }
    /// `p(s X)`
    pub fn rescale_var(&self, s: &Rat) -> UniPoly {
        let mut f = Rat::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            v.push(c * &f);
            f *= s;
        }
        UniPoly::new(v)
    }
    /// `X^n p(1/X)` for `n >= deg p`.
    pub fn reverse_homogenize(&self, n: usize) -> UniPoly {
        assert!(self.degree().is_none_or(|d| d <= n));
        let mut v = vec![Rat::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[n - k] = c.clone();
        }
        UniPoly::new(v)
    }
    pub fn pow(&self, k: u32) -> UniPoly {
        let mut r = UniPoly::constant(Rat::one());
        for _ in 0..k {
            r = &r * self;
        }
        r
    }
    /// Parity check `p(-X) = p(X)`.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(k, c)| k % 2 == 0 || c.is_zero())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::new(v)
    }
}

impl UniPoly {
    /// Euclidean division; panics on division by zero polynomial.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        let n = r.len();
        if n <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); n - dd];
        for k in (dd..n).rev() {
            if r[k].is_zero() {
                continue;
            }
            let f = &r[k] / &lead;
            for j in 0..=dd {
                let v = &f * &d.coeffs[j];
                r[k - dd + j] -= v;
            }
            q[k - dd] = f;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    /// Inverse of `self` modulo `m`, if `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &UniPoly) -> Option<UniPoly> {
        let (mut r0, mut r1) = (m.clone(), self.div_rem(m).1);
        let (mut s0, mut s1) = (UniPoly::zero(), UniPoly::constant(Rat::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = Rat::one() / &r0.coeffs[0];
        Some(s0.scale(&c).div_rem(m).1)
    }
}
