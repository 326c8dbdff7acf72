//! Exact expansions of the standard series.

use num_traits::Zero;

use super::{CycNum, QSeries};
use crate::rat::{int, rat, Rat};

fn r(x: i64) -> CycNum {
    CycNum::from_rat(int(x))
}

/// `(q)_inf = prod (1 - q^n)` by the pentagonal number theorem, complete below `q^order`.
pub fn euler_prod(order: i64) -> QSeries {
    let mut s = QSeries::zero(1, int(order));
    for k in 0i64.. {
        let (e1, e2) = (k * (3 * k - 1) / 2, k * (3 * k + 1) / 2);
        if e1 >= order {
            break;
        }
        let sign = r(if k % 2 == 0 { 1 } else { -1 });
        s.add_term(&int(e1), sign.clone());
        if k > 0 {
            s.add_term(&int(e2), sign);
        }
    }
    s
}

/// `eta = q^{1/24} (q)_inf`, complete below `q^order`.
pub fn eta(order: &Rat) -> QSeries {
    let shift = rat(1, 24);
    let inner = euler_prod(ceil(&(order - &shift)));
    inner.mul_q_power(&shift).truncate(order)
}

/// `theta(tau) = sum_{n in Z} q^{n^2}`
pub fn unary_theta(order: i64) -> QSeries {
    let mut s = QSeries::zero(1, int(order));
    for n in 0i64.. {
        if n * n >= order {
            break;
        }
        s.add_term(&int(n * n), r(if n == 0 { 1 } else { 2 }));
    }
    s
}

/// `theta_2(tau) = sum_{n in Z} q^{(2n+1)^2/8}`
pub fn theta2(order: &Rat) -> QSeries {
    let mut s = QSeries::zero(8, order.clone());
    for n in 0i64.. {
        let e = rat((2 * n + 1) * (2 * n + 1), 8);
        if &e >= order {
            break;
        }
        s.add_term(&e, r(2));
    }
    s
}

/// `sum_{m >= 1} (-1)^{m+1} m^2 q^{m(m+1)/2} / (1 + q^m)`
pub fn humbert(order: i64) -> QSeries {
    let mut s = QSeries::zero(1, int(order));
    for m in 1i64.. {
        let base = m * (m + 1) / 2;
        if base >= order {
            break;
        }
        let sign = if m % 2 == 1 { 1 } else { -1 };
        let mut j = 0;
        while base + m * j < order {
            let sj = if j % 2 == 0 { 1 } else { -1 };
            s.add_term(&int(base + m * j), r(sign * sj * m * m));
            j += 1;
        }
    }
    s.normalize()
}

/// `1/(1 - q)`
pub fn geometric(order: i64) -> QSeries {
    let mut s = QSeries::zero(1, int(order));
    for e in 0..order.max(0) {
        s.add_term(&int(e), CycNum::one());
    }
    s
}

/// `sum_{m >= 0} (-1)^m (2m+1) q^{m(m+1)/2} = (q)_inf^3` (Jacobi).
pub fn jacobi_cube(order: i64) -> QSeries {
    let mut s = QSeries::zero(1, int(order));
    for m in 0i64.. {
        let e = m * (m + 1) / 2;
        if e >= order {
            break;
        }
        s.add_term(&int(e), r(if m % 2 == 0 { 2 * m + 1 } else { -(2 * m + 1) }));
    }
    s
}

fn ceil(x: &Rat) -> i64 {
    let c = x.ceil().to_integer();
    if c.is_zero() {
        0
    } else {
        c.try_into().expect("order fits in i64")
    }
}
