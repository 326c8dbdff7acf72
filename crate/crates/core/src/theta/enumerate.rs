//! Fincke-Pohst enumeration of shifted lattice points in an ellipsoid.

use crate::error::{Error, Result};

/// Decomposition `x^T G x / 2 = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2` of a positive definite Gram matrix.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    n: usize,
    q: Vec<Vec<f64>>,
}

impl Ellipsoid {
    pub fn new(gram: &[Vec<f64>]) -> Result<Self> {
        let n = gram.len();
        let mut q: Vec<Vec<f64>> = gram.iter().map(|r| r.iter().map(|x| 0.5 * x).collect()).collect();
        for i in 0..n {
            if !(q[i][i] > 0.0) {
                return Err(Error::Domain("Gram matrix is not positive definite".into()));
            }
            for j in i + 1..n {
                q[j][i] = q[i][j];
                q[i][j] /= q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    q[k][l] -= q[k][i] * q[i][l];
                }
            }
        }
        Ok(Ellipsoid { n, q })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `det G`
    pub fn det(&self) -> f64 {
        (0..self.n).map(|i| 2.0 * self.q[i][i]).product()
    }

    /// Visits every `k in Z^n` with `(s + k)^T G (s + k) / 2 <= bound`, possibly together
    /// with a few points just outside. Returns the number of visited points.
    pub fn enumerate(
        &self,
        shift: &[f64],
        bound: f64,
        max_points: u64,
        visit: &mut dyn FnMut(&[i64]) -> Result<()>,
    ) -> Result<u64> {
        if bound < 0.0 {
            return Ok(0);
        }
        let bound = bound * (1.0 + 1e-9) + 1e-9;
        let mut k = vec![0i64; self.n];
        let mut x = vec![0.0f64; self.n];
        let mut count = 0u64;
        self.level(self.n, 0.0, bound, shift, &mut k, &mut x, &mut count, max_points, visit)?;
        Ok(count)
    }

    #[allow(clippy::too_many_arguments)]
    fn level(
        &self,
        i: usize,
        partial: f64,
        bound: f64,
        shift: &[f64],
        k: &mut [i64],
        x: &mut [f64],
        count: &mut u64,
        max_points: u64,
        visit: &mut dyn FnMut(&[i64]) -> Result<()>,
    ) -> Result<()> {
        if i == 0 {
            *count += 1;
            if *count > max_points {
                return Err(Error::EnumerationBound { points: max_points });
            }
            return visit(k);
        }
        let i = i - 1;
        let center: f64 = -(i + 1..self.n).map(|j| self.q[i][j] * x[j]).sum::<f64>();
        let rem = bound - partial;
        if rem < 0.0 {
            return Ok(());
        }
        let r = (rem / self.q[i][i]).sqrt();
        let eps = 1e-9 * (1.0 + r);
        let lo = (center - r - shift[i] - eps).ceil() as i64;
        let hi = (center + r - shift[i] + eps).floor() as i64;
        for ki in lo..=hi {
            k[i] = ki;
            x[i] = shift[i] + ki as f64;
            let d = x[i] - center;
            self.level(i, partial + self.q[i][i] * d * d, bound, shift, k, x, count, max_points, visit)?;
        }
        Ok(())
    }
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Geometry of a positive definite form `x^T G x / 2` used by the tail bounds.
#[derive(Clone, Debug)]
pub struct LatticeInfo {
    pub n: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub det: f64,
}

impl LatticeInfo {
    pub fn new(gram: &[Vec<f64>]) -> Result<Self> {
        let ev = symmetric_eigenvalues(gram);
        let lambda_min = ev[0];
        if !(lambda_min > 0.0) {
            return Err(Error::Domain("Gram matrix is not positive definite".into()));
        }
        let det = Ellipsoid::new(gram)?.det();
        Ok(LatticeInfo { n: gram.len(), lambda_min, lambda_max: ev[ev.len() - 1], det })
    }

    /// Upper bound for the number of points of any translate of `Z^n` with `x^T G x / 2 <= r`.
    pub fn count_bound(&self, r: f64) -> f64 {
        let n = self.n as f64;
        let s = (n * self.lambda_max).sqrt() / 2.0;
        let vol = std::f64::consts::PI.powf(n / 2.0) / gamma_half_int(self.n + 2);
        vol * ((2.0 * r.max(0.0)).sqrt() + s).powi(self.n as i32) / self.det.sqrt()
    }

    /// Euclidean radius bound for points with `x^T G x / 2 <= r`.
    pub fn radius(&self, r: f64) -> f64 {
        (2.0 * r.max(0.0) / self.lambda_min).sqrt()
    }
}

/// `Gamma(m / 2)` for a positive integer `m`.
fn gamma_half_int(m: usize) -> f64 {
    let mut g = if m % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut k = if m % 2 == 0 { 2 } else { 1 };
    while k < m {
        g *= k as f64 / 2.0;
        k += 2;
    }
    g
}

/// Bound for `sum_{x : M(x) > r} u(|x|) e^{-2 pi y (M(x) - shift)}` over a translate of `Z^n`.
pub fn shell_tail(info: &LatticeInfo, r: f64, y: f64, shift: f64, u: &dyn Fn(f64) -> f64) -> f64 {
    let h = 1.0 / (2.0 * std::f64::consts::PI * y);
    let mut sum = 0.0;
    for j in 0..100_000 {
        let lo = r + j as f64 * h;
        let hi = lo + h;
        let t = info.count_bound(hi) * u(info.radius(hi)) * (-2.0 * std::f64::consts::PI * y * (lo - shift)).exp();
        if !t.is_finite() {
            return f64::INFINITY;
        }
        sum += t;
        if j > 8 && t < 1e-18 * sum.max(1e-300) {
            break;
        }
    }
    sum
}

/// Smallest radius (up to bisection accuracy) with `tail(r) <= target`.
pub fn choose_radius(tail: &dyn Fn(f64) -> f64, target: f64, start: f64) -> Result<f64> {
    let mut hi = start.max(1e-3);
    let mut steps = 0;
    while !(tail(hi) <= target) {
        hi *= 2.0;
        steps += 1;
        if steps > 60 {
            return Err(Error::ConvergenceNotAchieved { estimate: tail(hi), tolerance: target });
        }
    }
    let mut lo = if steps == 0 { 0.0 } else { hi / 2.0 };
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_brute_force() {
        let g = vec![vec![2.0, 1.0, 0.0], vec![1.0, 3.0, -1.0], vec![0.0, -1.0, 2.5]];
        let e = Ellipsoid::new(&g).unwrap();
        let shift = [0.25, -1.0 / 3.0, 0.5];
        let bound = 6.5;
        let val = |k: &[i64]| {
            let x: Vec<f64> = k.iter().zip(&shift).map(|(a, b)| *a as f64 + b).collect();
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += x[i] * g[i][j] * x[j];
                }
            }
            s / 2.0
        };
        let mut found = 0;
        e.enumerate(&shift, bound, 1_000_000, &mut |k| {
            if val(k) <= bound {
                found += 1;
            }
            Ok(())
        })
        .unwrap();
        let mut brute = 0;
        for a in -10..=10 {
            for b in -10..=10 {
                for c in -10..=10 {
                    if val(&[a, b, c]) <= bound {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(found, brute);
        let info = LatticeInfo::new(&g).unwrap();
        assert!(info.count_bound(bound) >= brute as f64);
    }

    #[test]
    fn eigenvalues() {
        let ev = symmetric_eigenvalues(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn budget_is_enforced() {
        let e = Ellipsoid::new(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = e.enumerate(&[0.0, 0.0], 1e4, 100, &mut |_| Ok(()));
        assert!(matches!(r, Err(Error::EnumerationBound { .. })));
    }
}
