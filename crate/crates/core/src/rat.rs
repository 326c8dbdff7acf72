//! Rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn vec_int(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| int(x)).collect()
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let digits = fp.len() as u32;
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let ipart: BigInt = if ip.is_empty() || ip == "-" || ip == "+" {
            BigInt::zero()
        } else {
            ip.parse().map_err(|_| bad())?
        };
        let fpart: BigInt = if fp.is_empty() { BigInt::zero() } else { fp.parse().map_err(|_| bad())? };
        let scale = BigInt::from(10u32).pow(digits);
        let mag = ipart.abs() * &scale + fpart;
        let num = if neg { -mag } else { mag };
        return Ok(Rat::new(num, scale));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(p))
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn vec_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rat) -> Rat {
    r - r.floor()
}

pub fn is_integer(r: &Rat) -> bool {
    r.is_integer()
}

pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn big_to_i64(b: &BigInt) -> Result<i64> {
    b.to_i64().ok_or(Error::Overflow)
}

pub fn rat_to_i64(r: &Rat) -> Result<i64> {
    if !r.is_integer() {
        return Err(Error::Domain(format!("{} is not an integer", fmt_rat(r))));
    }
    big_to_i64(r.numer())
}

pub fn sign_rat(r: &Rat) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub fn dot(u: &[Rat], v: &[Rat]) -> Rat {
    u.iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Scales a nonzero rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[Rat]) -> Result<Vec<i64>> {
    let den = lcm_denominators(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(Error::Domain("zero vector".into()));
    }
    ints.iter().map(|x| big_to_i64(&(x / &g))).collect()
}

/// Smallest positive integer multiple of a rational vector (same ray, integer entries).
pub fn integer_multiple(v: &[Rat]) -> Result<Vec<i64>> {
    let den = lcm_denominators(v.iter());
    v.iter()
        .map(|x| big_to_i64(&(x * Rat::from_integer(den.clone())).to_integer()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rat("-.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("7").unwrap(), int(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn primitive_scaling() {
        assert_eq!(primitive_integer(&[rat(-1, 4), int(0), rat(1, 2)]).unwrap(), vec![-1, 0, 2]);
        assert_eq!(integer_multiple(&[rat(2, 3), int(2)]).unwrap(), vec![2, 6]);
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
    }
}
