//! Direct floating evaluation of the standard series.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Estimate, EvalPoint};

/// Sums `f(n)` over `n = 0, 1, -1, 2, -2, ...` for summands with Gaussian
/// decay. `f` returns the term and `y` times its q-exponent, which must be
/// a convex function of `n`.
pub fn gaussian_sum(f: impl Fn(i64) -> (Complex64, f64)) -> Estimate {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for n in 0i64..10_000_000 {
        let idx: &[i64] = if n == 0 { &[0] } else { &[n, -n] };
        for &m in idx {
            let (t, _) = f(m);
            abs += t.norm();
            sum += t;
        }
        let (ep, en) = (f(n + 1).1, f(-n - 1).1);
        let growing = ep > f(n).1 && en > f(-n).1;
        let next = (-2.0 * PI * ep.min(en)).exp();
        if growing && next < 1e-18 * (1.0 + sum.norm()) {
            return Estimate::new(sum, 4.0 * next + 4.0 * f64::EPSILON * abs);
        }
    }
    Estimate::new(sum, f64::INFINITY)
}

/// `sum_{m in alpha + Z} e^{2 pi i s m^2 tau} e^{2 pi i w m}`
pub fn unary_theta_char(alpha: f64, w: f64, s: f64, pt: &EvalPoint) -> Estimate {
    let tau = pt.tau();
    gaussian_sum(
        |n| {
            let m = alpha + n as f64;
            let arg = Complex64::new(0.0, 2.0 * PI) * (tau * (s * m * m) + w * m);
            (arg.exp(), s * m * m * pt.y)
        },
    )
}

/// `theta(tau) = sum q^{n^2}`
pub fn theta(pt: &EvalPoint) -> Estimate {
    unary_theta_char(0.0, 0.0, 1.0, pt)
}

/// `theta_2(tau) = sum q^{(n + 1/2)^2 / 2}`
pub fn theta2(pt: &EvalPoint) -> Estimate {
    unary_theta_char(0.5, 0.0, 0.5, pt)
}

/// Dedekind eta through the pentagonal series `sum (-1)^k q^{(6k-1)^2/24}`.
pub fn eta(pt: &EvalPoint) -> Estimate {
    let tau = pt.tau();
    gaussian_sum(
        |k| {
            let e = ((6 * k - 1) * (6 * k - 1)) as f64 / 24.0;
            let s = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            (s * (Complex64::new(0.0, 2.0 * PI * e) * tau).exp(), e * pt.y)
        },
    )
}

/// `(q)_inf = q^{-1/24} eta`
pub fn euler_prod(pt: &EvalPoint) -> Estimate {
    eta(pt).scale(pt.q_pow(-1.0 / 24.0))
}

/// `sum_{m >= 1} (-1)^{m+1} m^2 q^{m(m+1)/2} / (1 + q^m)`
pub fn humbert(pt: &EvalPoint) -> Estimate {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    let mut m = 1i64;
    loop {
        let mf = m as f64;
        let qm = pt.q_pow(mf);
        let t = pt.q_pow(mf * (mf + 1.0) / 2.0) * (mf * mf) / (1.0 + qm);
        let t = if m % 2 == 1 { t } else { -t };
        sum += t;
        abs += t.norm();
        let next = (mf + 1.0).powi(2) * (-PI * pt.y * (mf + 1.0) * (mf + 2.0)).exp() / (1.0 - (-2.0 * PI * pt.y * (mf + 1.0)).exp());
        if next < 1e-18 * (1.0 + sum.norm()) || m > 100_000 {
            return Estimate::new(sum, 2.0 * next + 4.0 * f64::EPSILON * abs);
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{standard, TailBound};
    use crate::rat::int;

    #[test]
    fn theta_at_i() {
        let pt = EvalPoint::i();
        let v = theta(&pt).value;
        let direct = 1.0 + 2.0 * (-2.0 * PI).exp() + 2.0 * (-8.0 * PI).exp() + 2.0 * (-18.0 * PI).exp();
        assert!((v.re - direct).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn eta_at_i() {
        // Gamma(1/4) / (2 pi^{3/4})
        let v = eta(&EvalPoint::i()).value;
        assert!((v.re - 0.768_225_422_326_056_7).abs() < 1e-14, "{v}");
    }

    #[test]
    fn series_and_direct_agree() {
        let pt = EvalPoint::new(0.1, 0.3).unwrap();
        let s = standard::humbert(60).evaluate(&pt, &TailBound::new(3, 1.0), 1e-12).unwrap();
        assert!((s.value - humbert(&pt).value).norm() < 1e-12);
        let t2 = standard::theta2(&int(60)).evaluate(&pt, &TailBound::new(0, 2.0), 1e-12).unwrap();
        assert!((t2.value - theta2(&pt).value).norm() < 1e-12);
        let e = standard::eta(&int(40)).evaluate(&pt, &TailBound::new(0, 1.0), 1e-12).unwrap();
        assert!((e.value - eta(&pt).value).norm() < 1e-12);
    }

    #[test]
    fn eta_weight_half_under_s() {
        let pt = EvalPoint::new(0.2, 0.9).unwrap();
        let s = pt.moebius([[0, -1], [1, 0]]).unwrap();
        let lhs = eta(&s).value;
        let rhs = (-Complex64::i() * pt.tau()).sqrt() * eta(&pt).value;
        assert!((lhs - rhs).norm() < 1e-13);
    }
}
