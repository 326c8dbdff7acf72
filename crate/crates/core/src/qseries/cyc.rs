use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{GaussRat, UniPoly};
use crate::rat::{fmt_rat, parse_rat, to_f64, Rat};

/// Element `sum_j c_j zeta_M^j` of the cyclotomic field, stored in the group ring.
#[derive(Clone, Debug)]
pub struct CycNum {
    order: u32,
    coeffs: Vec<Rat>,
}

/// The M-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u32) -> UniPoly {
    static MEMO: OnceLock<Mutex<HashMap<u32, UniPoly>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = memo.lock().unwrap_or_else(|e| e.into_inner()).get(&m) {
        return p.clone();
    }
    let mut p = &UniPoly::monomial(m as usize, Rat::one()) - &UniPoly::constant(Rat::one());
    for d in 1..m {
        if m % d == 0 {
            p = p.div_rem(&cyclotomic_poly(d)).0;
        }
    }
    memo.lock().unwrap_or_else(|e| e.into_inner()).insert(m, p.clone());
    p
}

impl CycNum {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1);
        CycNum { order, coeffs: vec![Rat::zero(); order as usize] }
    }
    pub fn from_rat(r: Rat) -> Self {
        CycNum { order: 1, coeffs: vec![r] }
    }
    pub fn one() -> Self {
        CycNum::from_rat(Rat::one())
    }
    /// `zeta_M^j`
    pub fn root(order: u32, j: i64) -> Self {
        let mut c = CycNum::zero(order);
        c.coeffs[j.rem_euclid(order as i64) as usize] = Rat::one();
        c
    }
    pub fn i() -> Self {
        CycNum::root(4, 1)
    }
    pub fn from_gauss(g: &GaussRat) -> Self {
        if g.im.is_zero() {
            return CycNum::from_rat(g.re.clone());
        }
        let mut c = CycNum::zero(4);
        c.coeffs[0] = g.re.clone();
        c.coeffs[1] = g.im.clone();
        c
    }
    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn raw_coeffs(&self) -> &[Rat] {
        &self.coeffs
    }
    /// Group-ring constructor; `coeffs.len()` is the order.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("cyclotomic order must be positive".into()));
        }
        Ok(CycNum { order: coeffs.len() as u32, coeffs })
    }

    pub fn lift(&self, new_order: u32) -> CycNum {
        assert!(new_order % self.order == 0, "order must divide the new order");
        if new_order == self.order {
            return self.clone();
        }
        let f = (new_order / self.order) as usize;
        let mut c = CycNum::zero(new_order);
        for (j, x) in self.coeffs.iter().enumerate() {
            if !x.is_zero() {
                c.coeffs[j * f] = x.clone();
            }
        }
        c
    }

    /// Adds `r zeta_M^j` in place, where `M` divides the current order.
    pub fn add_root_multiple(&mut self, m: u32, j: i64, r: &Rat) {
        if self.order % m != 0 {
            let l = self.order.lcm(&m);
            *self = self.lift(l);
        }
        let f = (self.order / m) as i64;
        let idx = (j * f).rem_euclid(self.order as i64) as usize;
        self.coeffs[idx] += r;
    }

    pub fn add(&self, o: &CycNum) -> CycNum {
        let l = self.order.lcm(&o.order);
        let mut a = self.lift(l);
        let b = o.lift(l);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn neg(&self) -> CycNum {
        CycNum { order: self.order, coeffs: self.coeffs.iter().map(|x| -x.clone()).collect() }
    }

    pub fn sub(&self, o: &CycNum) -> CycNum {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rat) -> CycNum {
        CycNum { order: self.order, coeffs: self.coeffs.iter().map(|x| x * r).collect() }
    }

    pub fn mul(&self, o: &CycNum) -> CycNum {
        let l = self.order.lcm(&o.order) as usize;
        let fa = l / self.order as usize;
        let fb = l / o.order as usize;
        let mut c = CycNum::zero(l as u32);
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                c.coeffs[(i * fa + j * fb) % l] += x * y;
            }
        }
        c
    }

    /// Complex conjugate.
    pub fn conj(&self) -> CycNum {
        let m = self.order as usize;
        let mut c = CycNum::zero(self.order);
        for (j, x) in self.coeffs.iter().enumerate() {
            c.coeffs[(m - j) % m] = x.clone();
        }
        c
    }

    /// Remainder modulo the cyclotomic polynomial, length `phi(M)`.
    pub fn reduced(&self) -> Vec<Rat> {
        let phi = cyclotomic_poly(self.order);
        let r = UniPoly::new(self.coeffs.clone()).div_rem(&phi).1;
        let deg = phi.degree().unwrap_or(0);
        (0..deg).map(|k| r.coeff(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(|x| x.is_zero()) {
            return true;
        }
        self.reduced().iter().all(|x| x.is_zero())
    }

    /// Rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rat> {
        let r = self.reduced();
        if r.iter().skip(1).all(|x| x.is_zero()) {
            Some(r.first().cloned().unwrap_or_else(Rat::zero))
        } else {
            None
        }
    }

    pub fn inverse(&self) -> Result<CycNum> {
        let phi = cyclotomic_poly(self.order);
        let a = UniPoly::new(self.coeffs.clone()).div_rem(&phi).1;
        if a.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv = a.inverse_mod(&phi).ok_or(Error::NotInvertible)?;
        let mut c = CycNum::zero(self.order);
        for (k, x) in inv.coeffs().iter().enumerate() {
            c.coeffs[k] = x.clone();
        }
        Ok(c)
    }

    pub fn eval(&self) -> Complex64 {
        let m = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| Complex64::from_polar(to_f64(x), 2.0 * PI * j as f64 / m))
            .sum()
    }

    /// Smallest order in which the element can be written; the result is
    /// the canonical representative used for serialization.
    pub fn canonical(&self) -> CycNum {
        let m = self.order;
        let mut best = self.clone();
        let mut divisors: Vec<u32> = (1..=m).filter(|d| m % d == 0).collect();
        divisors.sort_unstable();
        for d in divisors {
            if d == m {
                break;
            }
            if let Some(c) = self.try_descend(d) {
                best = c;
                break;
            }
        }
        let red = best.reduced();
        let mut out = CycNum::zero(best.order);
        for (k, x) in red.into_iter().enumerate() {
            out.coeffs[k] = x;
        }
        out
    }

    fn try_descend(&self, d: u32) -> Option<CycNum> {
        // express in Q(zeta_d) by solving against the reduced basis of order M
        let target = self.reduced();
        let phi_d = cyclotomic_poly(d).degree().unwrap_or(0);
        let basis: Vec<Vec<Rat>> = (0..phi_d).map(|k| CycNum::root(d, k as i64).lift(self.order).reduced()).collect();
        // Gaussian elimination on the columns of `basis`
        let rows = target.len();
        let cols = basis.len();
        let mut mat: Vec<Vec<Rat>> = (0..rows)
            .map(|r| {
                let mut row: Vec<Rat> = (0..cols).map(|c| basis[c][r].clone()).collect();
                row.push(target[r].clone());
                row
            })
            .collect();
        let mut piv_cols = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let p = (r..rows).find(|&i| !mat[i][c].is_zero());
            let Some(p) = p else { continue };
            mat.swap(r, p);
            let pv = mat[r][c].clone();
            for x in mat[r].iter_mut() {
                *x /= &pv;
            }
            for i in 0..rows {
                if i != r && !mat[i][c].is_zero() {
                    let f = mat[i][c].clone();
                    for j in 0..=cols {
                        let v = &f * &mat[r][j];
                        mat[i][j] -= v;
                    }
                }
            }
            piv_cols.push(c);
            r += 1;
        }
        for row in mat.iter().skip(r) {
            if !row[cols].is_zero() {
                return None;
            }
        }
        let mut out = CycNum::zero(d);
        for (i, &c) in piv_cols.iter().enumerate() {
            out.coeffs[c] = mat[i][cols].clone();
        }
        Some(out)
    }

    pub fn to_file(&self) -> CycFile {
        let c = self.canonical();
        let coeffs = c.reduced();
        CycFile { order: c.order, coeffs: coeffs.iter().map(fmt_rat).collect() }
    }

    pub fn from_file(f: &CycFile) -> Result<CycNum> {
        if f.order == 0 || f.coeffs.len() > f.order as usize {
            return Err(Error::Parse("bad cyclotomic coefficient block".into()));
        }
        let mut c = CycNum::zero(f.order);
        for (k, s) in f.coeffs.iter().enumerate() {
            c.coeffs[k] = parse_rat(s)?;
        }
        Ok(c)
    }
}

impl PartialEq for CycNum {
    fn eq(&self, o: &CycNum) -> bool {
        self.sub(o).is_zero()
    }
}

/// Serialized cyclotomic number: coefficients in the power basis of Q(zeta_M).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycFile {
    pub order: u32,
    pub coeffs: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), UniPoly::new(vec![int(-1), int(1)]));
        assert_eq!(cyclotomic_poly(4), UniPoly::new(vec![int(1), int(0), int(1)]));
        assert_eq!(cyclotomic_poly(6), UniPoly::new(vec![int(1), int(-1), int(1)]));
        assert_eq!(cyclotomic_poly(12).degree(), Some(4));
    }

    #[test]
    fn reduction_and_equality() {
        let a = CycNum::one().add(&CycNum::root(2, 1));
        assert!(a.is_zero());
        let s: CycNum = (0..5).fold(CycNum::zero(5), |acc, j| acc.add(&CycNum::root(5, j)));
        assert!(s.is_zero());
        assert_eq!(CycNum::root(4, 2), CycNum::from_rat(int(-1)));
        assert_eq!(CycNum::i().mul(&CycNum::i()), CycNum::from_rat(int(-1)));
        assert_eq!(CycNum::root(12, 3), CycNum::i());
    }

    #[test]
    fn inverses() {
        let x = CycNum::from_rat(int(2)).add(&CycNum::root(5, 1).scale(&rat(3, 7)));
        let y = x.inverse().unwrap();
        assert_eq!(x.mul(&y), CycNum::one());
        assert!(CycNum::zero(3).inverse().is_err());
    }

    #[test]
    fn canonical_form() {
        let x = CycNum::root(8, 2).scale(&int(3));
        let c = x.canonical();
        assert_eq!(c.order(), 4);
        assert_eq!(c, x);
        let f = x.to_file();
        assert_eq!(CycNum::from_file(&f).unwrap(), x);
        assert_eq!(CycNum::root(6, 3).canonical().order(), 1);
    }

    #[test]
    fn evaluation() {
        let z = CycNum::root(8, 1).eval();
        assert!((z - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
    }
}
