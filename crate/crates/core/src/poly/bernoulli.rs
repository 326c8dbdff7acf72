use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::UniPoly;
use crate::error::{Error, Result};
use crate::rat::{frac, int, rat, to_f64, Rat};

fn binom(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn bernoulli_table(k: usize) -> Vec<Rat> {
    static TABLE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    let lock = TABLE.get_or_init(|| Mutex::new(Vec::new()));
    let mut t = lock.lock().unwrap_or_else(|e| e.into_inner());
    if t.len() <= k {
        let m_max = (k + 1).max(2 * t.len());
        // Akiyama-Tanigawa
        let mut a: Vec<Rat> = Vec::with_capacity(m_max + 1);
        let mut out = Vec::with_capacity(m_max + 1);
        for m in 0..=m_max {
            a.push(rat(1, (m + 1) as i64));
            for j in (1..=m).rev() {
                let d = &a[j - 1] - &a[j];
                a[j - 1] = d * int(j as i64);
            }
            out.push(a[0].clone());
        }
        out[1] = rat(-1, 2);
        *t = out;
    }
    t[..=k].to_vec()
}

/// Bernoulli number with `B_1 = -1/2`.
pub fn bernoulli_number(k: usize) -> Rat {
    bernoulli_table(k)[k].clone()
}

/// `B_k(X) = sum_j C(k,j) B_j X^{k-j}`.
pub fn bernoulli_poly(k: usize) -> UniPoly {
    let b = bernoulli_table(k);
    let mut v = vec![Rat::zero(); k + 1];
    for j in 0..=k {
        v[k - j] = Rat::from_integer(binom(k as u64, j as u64)) * &b[j];
    }
    UniPoly::new(v)
}

/// `B_k(x - floor x)`.
pub fn periodic_bernoulli(k: usize, x: &Rat) -> Rat {
    bernoulli_poly(k).eval(&frac(x))
}

/// Eulerian number `E(k, j)`: permutations of `k` letters with `j` ascents.
pub fn eulerian(k: u32, j: u32) -> BigInt {
    if k == 0 {
        return if j == 0 { BigInt::one() } else { BigInt::zero() };
    }
    if j >= k {
        return BigInt::zero();
    }
    let mut s = BigInt::zero();
    for i in 0..=(j + 1) {
        let t = binom(k as u64 + 1, i as u64) * BigInt::from(j + 1 - i).pow(k);
        if i % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    s
}

fn eulerian_f64_row(k: u32) -> Vec<f64> {
    (0..k).map(|j| to_f64(&Rat::from_integer(eulerian(k, j)))).collect()
}

/// `sum_{m>=0} m^k x^m` for `|x| < 1`, continued analytically to `|x| > 1`
/// where it equals `-sum_{m<=-1} m^k x^m`.
pub fn power_geometric_closed_form(k: u32, x: Complex64) -> Result<Complex64> {
    if (x.norm() - 1.0).abs() < 1e-15 {
        return Err(Error::Domain("|x| = 1".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    if k == 0 {
        return Ok(one / (one - x));
    }
    let row = eulerian_f64_row(k);
    let mut poly = Complex64::zero();
    for c in row.iter().rev() {
        poly = poly * x + c;
    }
    Ok(x * poly / (one - x).powu(k + 1))
}

/// Exact rational version of [`power_geometric_closed_form`].
pub fn power_geometric_closed_form_rat(k: u32, x: &Rat) -> Result<Rat> {
    if x.abs() == Rat::one() {
        return Err(Error::Domain("|x| = 1".into()));
    }
    let one = Rat::one();
    if k == 0 {
        return Ok(&one / (&one - x));
    }
    let mut poly = Rat::zero();
    for j in (0..k).rev() {
        poly = poly * x + Rat::from_integer(eulerian(k, j));
    }
    Ok(x * poly / num_traits::pow(&one - x, (k + 1) as usize))
}

/// `S_k(r) = sum_{m>=0} m^k r^m` for real `0 <= r < 1`.
pub fn power_geometric_series_f64(k: u32, r: f64) -> f64 {
    power_geometric_closed_form(k, Complex64::new(r, 0.0)).map(|z| z.re).unwrap_or(f64::INFINITY)
}

/// Left side of the generating identity
/// `(-1)^k (k-1)!/z^k - sum_{m>=0} B_{m+k}(x)/(m+k) z^m/m!` with
/// `x = alpha + beta - floor(beta)`, which equals
/// `sum_{n+beta>=0} (n+alpha+beta)^{k-1} e^{(n+alpha+beta)z}` for `Re z < 0`.
pub fn bernoulli_tail_identity(k: u32, alpha: &Rat, beta: &Rat, z: Complex64) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let az = z.norm();
    if !(az > 0.0 && az < 2.0 * PI) {
        return Err(Error::Domain("need 0 < |z| < 2 pi".into()));
    }
    if z.re == 0.0 {
        return Err(Error::Domain("need Re z != 0".into()));
    }
    let x = alpha + beta - beta.floor();
    if x.is_negative() || x > Rat::one() {
        return Err(Error::Domain("alpha + beta - floor(beta) must lie in [0, 1]".into()));
    }
    let mut kfact = 1.0;
    for i in 1..k {
        kfact *= i as f64;
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let mut value = Complex64::new(sign * kfact, 0.0) / z.powu(k);
    let rho = az / (2.0 * PI);
    let mut zpow = Complex64::new(1.0, 0.0);
    let mut mfact = Rat::one();
    // |B_n(x)| <= 2 zeta(2) n!/(2 pi)^n on [0, 1] for n >= 2
    let base_bound = |m: u32| -> f64 {
        let mut t = 3.3 / (2.0 * PI).powi(k as i32);
        for i in 1..k {
            t *= (m + i) as f64;
        }
        t * rho.powi(m as i32)
    };
    for m in 0..4000u32 {
        if m > 0 {
            mfact *= int(m as i64);
            zpow *= z;
        }
        let n = (m + k) as usize;
        let c = bernoulli_poly(n).eval(&x) / (int(n as i64) * &mfact);
        value -= zpow * to_f64(&c);
        let next = m + 1;
        let ratio = (next + k) as f64 / (next + 1) as f64 * rho;
        if ratio < 1.0 && next + k >= 2 {
            let tail = base_bound(next) / (1.0 - ratio);
            if tail <= 1e-17 * value.norm().max(1e-300) {
                return Ok(value);
            }
        }
    }
    Err(Error::ConvergenceNotAchieved { estimate: f64::NAN, tolerance: 1e-17 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli_number(0), int(1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(4), rat(-1, 30));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
        assert_eq!(bernoulli_number(7), int(0));
        assert_eq!(bernoulli_poly(1), UniPoly::new(vec![rat(-1, 2), int(1)]));
        assert_eq!(bernoulli_poly(2), UniPoly::new(vec![rat(1, 6), int(-1), int(1)]));
        let x = rat(2, 7);
        assert_eq!(periodic_bernoulli(4, &(&x + int(1))), periodic_bernoulli(4, &x));
        assert_eq!(periodic_bernoulli(3, &(&x - int(5))), periodic_bernoulli(3, &x));
    }

    #[test]
    fn bernoulli_recurrence_oracle() {
        // sum_{j<=k} C(k+1, j) B_j = 0
        for k in 1..30u64 {
            let s = (0..=k).fold(Rat::zero(), |acc, j| {
                acc + Rat::from_integer(binom(k + 1, j)) * bernoulli_number(j as usize)
            });
            assert!(s.is_zero(), "k = {k}");
        }
    }

    #[test]
    fn eulerian_values() {
        assert_eq!(eulerian(2, 0), BigInt::from(1));
        assert_eq!(eulerian(2, 1), BigInt::from(1));
        assert_eq!(eulerian(4, 1), BigInt::from(11));
        for k in 1..12 {
            for j in 0..k {
                assert_eq!(eulerian(k, j), eulerian(k, k - 1 - j));
            }
            let total: BigInt = (0..k).map(|j| eulerian(k, j)).sum();
            let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
            assert_eq!(total, fact);
        }
    }

    #[test]
    fn geometric_closed_forms() {
        assert_eq!(power_geometric_closed_form_rat(0, &rat(1, 2)).unwrap(), int(2));
        // x(1+x)/(1-x)^3 at x = 1/3
        assert_eq!(power_geometric_closed_form_rat(2, &rat(1, 3)).unwrap(), rat(3, 2));
        assert!(power_geometric_closed_form(3, Complex64::new(0.0, 1.0)).is_err());
        assert!(power_geometric_closed_form_rat(1, &int(-1)).is_err());
    }
}
