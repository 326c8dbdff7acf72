//! Numerical evaluation of the completed theta series.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{eulerian, HatPoly, NumPoly};
use crate::qform::{majorant_f64, ConeKind, ConeVector, QuadraticForm};
use crate::qseries::{EvalPoint, Estimate};
use crate::rat::{frac, to_f64, Rat};
use crate::special::{beta_half, err_e, err_e_deriv, err_e_deriv_poly};

use super::enumerate::{choose_radius, shell_tail, Ellipsoid, LatticeInfo};
use super::expand::check_boundary_line;
use super::lattice::{pieces, sgn, IntLattice, Piece, Slab};
use super::ThetaSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct EvalOptions {
    /// Requested absolute accuracy.
    pub tol: f64,
    /// Factor applied to every enumeration radius after it has been chosen.
    pub radius_multiplier: f64,
    pub max_points: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { tol: 1e-12, radius_multiplier: 1.0, max_points: 20_000_000 }
    }
}

impl EvalOptions {
    pub fn with_tol(tol: f64) -> Self {
        EvalOptions { tol, ..Default::default() }
    }
}

fn sign_f(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `p^c[f](v)` for a cusp or an interior vector `c`.
pub fn p_c_eval(qf: &QuadraticForm, c: &ConeVector, fhat: &HatPoly, v: &[f64]) -> Complex64 {
    let layers = fhat.scaled_numeric(1.0);
    let bcv = qf.b_f64(c.real(), v);
    let fv: Complex64 = layers.iter().map(|p| p.eval(v)).sum();
    match c.kind() {
        ConeKind::Cusp => fv * sign_f(bcv),
        ConeKind::Interior => {
            let nq = -c.qc();
            let z = bcv / nq.sqrt();
            let mut acc = fv * err_e(z);
            let mut cur = layers;
            for k in 1..=fhat.degree() {
                cur = cur.iter().map(|p| p.directional(c.real())).collect();
                let d: Complex64 = cur.iter().map(|p| p.eval(v)).sum();
                let coef = (-1f64).powi(k as i32) / ((4.0 * PI).powi(k as i32) * factorial(k)) * nq.powf(-(k as f64) / 2.0);
                acc += d * (coef * err_e_deriv(k, z));
            }
            acc
        }
    }
}

/// `sum_{m>=0} m^k e^{m z}` for `Re z < 0`, accurate as `z -> 0`.
fn power_sum_log(rows: &[Vec<f64>], k: u32, z: Complex64) -> Complex64 {
    power_sum(rows, k, z, false)
}

/// `sum_{m>=1} m^k e^{m z}` for `Re z < 0`.
fn power_sum_pos(rows: &[Vec<f64>], k: u32, z: Complex64) -> Complex64 {
    power_sum(rows, k, z, true)
}

fn power_sum(rows: &[Vec<f64>], k: u32, z: Complex64, skip_zero: bool) -> Complex64 {
    let w = z.exp();
    let e = z.re.exp_m1();
    let half = (z.im / 2.0).sin();
    let expm1 = Complex64::new(e * z.im.cos() - 2.0 * half * half, w.im);
    let one_minus = -expm1;
    if k == 0 {
        return if skip_zero { w / one_minus } else { one_minus.inv() };
    }
    let mut p = Complex64::zero();
    for c in rows[k as usize].iter().rev() {
        p = p * w + c;
    }
    w * p / one_minus.powu(k + 1)
}

fn eulerian_rows(d: u32) -> Vec<Vec<f64>> {
    (0..=d).map(|k| (0..k).map(|j| eulerian(k, j).to_f64().unwrap_or(f64::INFINITY)).collect()).collect()
}

struct Ctx<'a> {
    spec: &'a ThetaSpec,
    lat: IntLattice,
    pt: EvalPoint,
    /// layers of `g(l) = y^{-d/2} f^(l sqrt y)`
    g: Vec<NumPoly>,
    opts: &'a EvalOptions,
    rows: Vec<Vec<f64>>,
}

/// `|p(l)| <= norm * rho^deg` for `|l| <= rho`.
fn poly_bound(polys: &[NumPoly], rho: f64) -> f64 {
    polys.iter().map(|p| p.l1_norm() * rho.max(1.0).powi(p.degree() as i32)).sum()
}

impl<'a> Ctx<'a> {
    fn new(spec: &'a ThetaSpec, pt: &EvalPoint, opts: &'a EvalOptions) -> Result<Self> {
        if !(opts.tol > 0.0) || !(opts.radius_multiplier >= 1.0) {
            return Err(Error::Domain("tolerance must be positive and the radius multiplier at least 1".into()));
        }
        let lat = IntLattice::new(spec)?;
        let g = spec.fhat().scaled_numeric(pt.y);
        Ok(Ctx { spec, lat, pt: *pt, g, opts, rows: eulerian_rows(spec.degree()) })
    }

    /// `q^{Q(l)} e^{2 pi i B(l, b)}`
    fn term(&self, l: &[i128]) -> Complex64 {
        let q = self.lat.q_f64(l);
        let ph = self.lat.phase_index(l) as f64 / self.lat.phase_mod as f64;
        let ang = 2.0 * PI * ((self.pt.x * q).rem_euclid(1.0) + ph);
        Complex64::from_polar((-2.0 * PI * self.pt.y * q).exp(), ang)
    }

    fn radius(&self, tail: &dyn Fn(f64) -> f64, target: f64) -> Result<f64> {
        Ok(choose_radius(tail, target, 1.0)? * self.opts.radius_multiplier)
    }

    fn double_interior(&self, c1: &[i64], c2: &[i64], gram: &[Vec<f64>], target: f64) -> Result<Estimate> {
        let info = LatticeInfo::new(gram)?;
        let y = self.pt.y;
        let u = |rho: f64| 2.0 * poly_bound(&self.g, rho);
        let tail = |r: f64| shell_tail(&info, r, y, 0.0, &u);
        let r = self.radius(&tail, target)?;
        let (a1, a2) = (self.lat.apply(c1), self.lat.apply(c2));
        let e = Ellipsoid::new(gram)?;
        let mut sum = Complex64::zero();
        let mut abs = 0.0;
        e.enumerate(&self.lat.shift_f64(), r, self.opts.max_points, &mut |k| {
            let l = self.lat.point(k);
            let w = sgn(IntLattice::dot(&a1, &l)) - sgn(IntLattice::dot(&a2, &l));
            if w == 0 {
                return Ok(());
            }
            let lf = self.lat.to_f64(&l);
            let gv: Complex64 = self.g.iter().map(|p| p.eval(&lf)).sum();
            let t = gv * self.term(&l) * w as f64;
            abs += t.norm();
            sum += t;
            Ok(())
        })?;
        Ok(Estimate::new(sum, tail(r) + 1e-15 * abs))
    }

    fn slab(&self, sl: &Slab, target: f64) -> Result<Estimate> {
        let d = self.spec.degree();
        let y = self.pt.y;
        let n = self.lat.n;
        let ccf: Vec<f64> = sl.cc.iter().map(|&x| x as f64).collect();
        // pk[k][j] = (cc . grad)^k g_j / k!
        let mut pk: Vec<Vec<NumPoly>> = vec![self.g.clone()];
        for k in 1..=d {
            let prev = &pk[k as usize - 1];
            pk.push(
                prev.iter()
                    .map(|p| p.directional(&ccf).scale(Complex64::new(1.0 / k as f64, 0.0)))
                    .collect(),
            );
        }
        let ac = self.lat.apply(&sl.cc);
        let ai = self.lat.apply(&sl.ci);
        // B(cc, a + k) ranges over B(cc, a) + gZ
        let g = ac.iter().fold(0i128, |g, &x| num_integer::Integer::gcd(&g, &x));
        let bca = to_f64(&frac(&(self.spec.qf().b(&sl.cc.iter().map(|&x| Rat::from_integer(x.into())).collect::<Vec<_>>(), self.spec.chars().a()) / Rat::from_integer(g.into()))));
        let delta = {
            let dd = bca.min(1.0 - bca) * g as f64;
            if dd > 0.0 {
                dd
            } else {
                g as f64
            }
        };
        let z_delta = Complex64::new(-2.0 * PI * y * delta, 0.0);
        let sk: Vec<f64> = (0..=d).map(|k| power_sum_log(&self.rows, k, z_delta).re).collect();
        let u = |rho: f64| 3.0 * (0..=d as usize).map(|k| sk[k] * poly_bound(&pk[k], rho)).sum::<f64>();
        let info = LatticeInfo::new(&sl.gram)?;
        let extra = sl.extra();
        let tail = |r: f64| shell_tail(&info, r, y, extra, &u);
        let r = self.radius(&tail, target)?;
        let bcb = {
            let ccr: Vec<Rat> = sl.cc.iter().map(|&x| Rat::from_integer(x.into())).collect();
            to_f64(&frac(&self.spec.qf().b(&ccr, self.spec.chars().b())))
        };
        let layers: Vec<&crate::poly::HomPoly> = self.spec.fhat().layers().iter().map(|(_, p)| p).collect();
        let dbeta = sl.beta * self.lat.da;
        let e = Ellipsoid::new(&sl.gram)?;
        let mut sum = Complex64::zero();
        let mut abs = 0.0;
        let tau = self.pt.tau();
        let sign = if sl.negate { -1.0 } else { 1.0 };
        e.enumerate(&self.lat.shift_f64(), r + extra, self.opts.max_points, &mut |k| {
            let mu = self.lat.point(k);
            let bi = IntLattice::dot(&ai, &mu);
            if !(dbeta < bi && bi <= 0) {
                return Ok(());
            }
            let bc = IntLattice::dot(&ac, &mu);
            if bc == 0 {
                return check_boundary_line(self.spec, &layers, &self.lat, &mu, &sl.cc);
            }
            let muf = self.lat.to_f64(&mu);
            let _ = n;
            let p: Vec<Complex64> = pk.iter().map(|ps| ps.iter().map(|q| q.eval(&muf)).sum()).collect();
            let z = Complex64::new(0.0, 2.0 * PI) * (tau * (bc as f64 / self.lat.da as f64) + bcb);
            let mut line = Complex64::zero();
            if bc > 0 {
                for (kk, pv) in p.iter().enumerate() {
                    line -= 2.0 * pv * power_sum_log(&self.rows, kk as u32, z);
                }
            } else {
                for (kk, pv) in p.iter().enumerate() {
                    line += 2.0 * pv * power_sum_pos(&self.rows, kk as u32, -z) * (-1f64).powi(kk as i32);
                }
            }
            if bi == 0 {
                line += p[0];
            }
            let t = line * self.term(&mu) * sign;
            abs += t.norm();
            sum += t;
            Ok(())
        })?;
        Ok(Estimate::new(sum, tail(r) + 1e-14 * abs))
    }

    fn sign_part(&self, target: f64) -> Result<Estimate> {
        let ps = pieces(self.spec)?;
        let mut est = Estimate::exact(Complex64::zero());
        let share = target / ps.len().max(1) as f64;
        for p in &ps {
            let e = match p {
                Piece::DoubleInterior { c1, c2, gram } => self.double_interior(c1, c2, gram, share)?,
                Piece::Slab(sl) => self.slab(sl, share)?,
            };
            est = est.add(&e);
        }
        Ok(est)
    }

    /// `sum_l R_c(l) q^{Q(l)} e^{2 pi i B(l, b)}` for an interior `c`.
    fn correction(&self, c: &ConeVector, target: f64) -> Result<Estimate> {
        let d = self.spec.degree();
        let y = self.pt.y;
        let nq = -c.qc();
        let qf = self.spec.qf();
        let cr = c.real();
        // dk[k] = y^{-k/2} (c . grad)^k g
        let mut dk: Vec<Vec<NumPoly>> = vec![self.g.clone()];
        for k in 1..=d {
            let prev = &dk[k as usize - 1];
            dk.push(prev.iter().map(|p| p.directional(cr).scale(Complex64::new(y.powf(-0.5), 0.0))).collect());
        }
        let coef: Vec<f64> = (0..=d)
            .map(|k| (-1f64).powi(k as i32) / ((4.0 * PI).powi(k as i32) * factorial(k)) * nq.powf(-(k as f64) / 2.0))
            .collect();
        let hpoly: Vec<Vec<f64>> = (0..=d).map(|k| if k == 0 { vec![] } else { err_e_deriv_poly(k) }).collect();
        let acn = qf.apply_f64(cr).iter().map(|x| x * x).sum::<f64>().sqrt();
        let u = |rho: f64| {
            let zmax = y.sqrt() * acn * rho / nq.sqrt();
            let mut s = poly_bound(&dk[0], rho);
            for k in 1..=d as usize {
                let h: f64 = hpoly[k].iter().enumerate().map(|(i, c)| c.abs() * zmax.powi(i as i32)).sum();
                s += coef[k].abs() * h * poly_bound(&dk[k], rho);
            }
            s
        };
        let gram = majorant_f64(qf, c)?;
        let info = LatticeInfo::new(&gram)?;
        let tail = |r: f64| shell_tail(&info, r, y, 0.0, &u);
        let r = self.radius(&tail, target)?;
        let e = Ellipsoid::new(&gram)?;
        let mut sum = Complex64::zero();
        let mut abs = 0.0;
        let mut err = None;
        e.enumerate(&self.lat.shift_f64(), r, self.opts.max_points, &mut |k| {
            let l = self.lat.point(k);
            let lf = self.lat.to_f64(&l);
            let z = qf.b_f64(cr, &lf) * y.sqrt() / nq.sqrt();
            let mut v = Complex64::zero();
            if z != 0.0 {
                match beta_half(z * z) {
                    Ok(b) => {
                        let gv: Complex64 = dk[0].iter().map(|p| p.eval(&lf)).sum();
                        v -= gv * (sign_f(z) * b);
                    }
                    Err(e) => err = Some(e),
                }
            }
            for kk in 1..=d {
                let dv: Complex64 = dk[kk as usize].iter().map(|p| p.eval(&lf)).sum();
                v += dv * (coef[kk as usize] * err_e_deriv(kk, z));
            }
            let t = v * self.term(&l);
            abs += t.norm();
            sum += t;
            Ok(())
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(Estimate::new(sum, tail(r) + 1e-14 * abs))
    }
}

fn finish(est: Estimate, tol: f64) -> Result<Estimate> {
    if !(est.error <= tol) {
        return Err(Error::ConvergenceNotAchieved { estimate: est.error, tolerance: tol });
    }
    Ok(est)
}

/// `theta^_{a,b}^{c1,c2}[f](tau)`, the non-holomorphic completion, with a rigorous error estimate.
pub fn nonholo_eval(spec: &ThetaSpec, pt: &EvalPoint, opts: &EvalOptions) -> Result<Estimate> {
    let ctx = Ctx::new(spec, pt, opts)?;
    if spec.is_trivial() {
        return Ok(Estimate::exact(Complex64::zero()));
    }
    let interiors: Vec<(f64, &ConeVector)> = [(1.0, spec.c1()), (-1.0, spec.c2())]
        .into_iter()
        .filter(|(_, c)| c.kind() == ConeKind::Interior)
        .collect();
    let parts = 1 + interiors.len();
    let share = 0.5 * opts.tol / parts as f64;
    let mut est = ctx.sign_part(share)?;
    for (s, c) in interiors {
        let e = ctx.correction(c, share)?;
        est = est.add(&e.scale(Complex64::new(s, 0.0)));
    }
    finish(est, opts.tol)
}

/// `Theta^_{a,b}^{c1,c2}[f](tau)`: the sign weights applied to `f^`.
pub fn almost_holo_eval(spec: &ThetaSpec, pt: &EvalPoint, opts: &EvalOptions) -> Result<Estimate> {
    let ctx = Ctx::new(spec, pt, opts)?;
    if spec.is_trivial() {
        return Ok(Estimate::exact(Complex64::zero()));
    }
    let est = ctx.sign_part(0.5 * opts.tol)?;
    finish(est, opts.tol)
}
