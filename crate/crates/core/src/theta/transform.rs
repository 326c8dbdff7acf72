//! Modular transformation laws, their verification and the cone limit probe.

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::HomPoly;
use crate::qform::{classify_vector, ConeKind, ConeVector, QuadraticForm};
use crate::qseries::{CycNum, EvalPoint, QSeries};
use crate::rat::{frac, int, parse_rat, to_f64, Rat};

use super::eval::{nonholo_eval, EvalOptions};
use super::expand::holomorphic_expansion;
use super::{Characteristics, ThetaSpec};

/// Generators of the transformation group acting on theta series.
#[derive(Clone, Debug, PartialEq)]
pub enum Move {
    /// `a -> a + lambda` with `lambda` integral.
    ShiftA(Vec<i64>),
    /// `b -> b + mu` with `mu` in `A^{-1} Z^n`.
    ShiftB(Vec<Rat>),
    /// `(a, b) -> (-a, -b)`
    Negate,
    /// `tau -> tau + 1`
    T,
    /// `tau -> -1/tau`
    S,
}

impl Move {
    /// Parses `T`, `S`, `negate`, `shift-a:1,0` or `shift-b:1/2,0`.
    pub fn parse(s: &str) -> Result<Move> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "t" => return Ok(Move::T),
            "s" => return Ok(Move::S),
            "negate" | "n" => return Ok(Move::Negate),
            _ => {}
        }
        let (head, tail) = s.split_once(':').ok_or_else(|| Error::Parse(format!("unknown move '{s}'")))?;
        let parts: Vec<&str> = tail.split(',').map(str::trim).collect();
        match head.to_ascii_lowercase().as_str() {
            "shift-a" | "shifta" => parts
                .iter()
                .map(|p| p.parse::<i64>().map_err(|e| Error::Parse(e.to_string())))
                .collect::<Result<Vec<_>>>()
                .map(Move::ShiftA),
            "shift-b" | "shiftb" => parts.iter().map(|p| parse_rat(p)).collect::<Result<Vec<_>>>().map(Move::ShiftB),
            _ => Err(Error::Parse(format!("unknown move '{s}'"))),
        }
    }

    /// The point `gamma tau` at which the left-hand side is evaluated.
    pub fn target(&self, pt: &EvalPoint) -> Result<EvalPoint> {
        match self {
            Move::T => pt.moebius([[1, 1], [0, 1]]),
            Move::S => pt.moebius([[0, -1], [1, 0]]),
            _ => Ok(*pt),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Move::ShiftA(l) => format!("shift-a:{}", l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
            Move::ShiftB(m) => {
                format!("shift-b:{}", m.iter().map(crate::rat::fmt_rat).collect::<Vec<_>>().join(","))
            }
            Move::Negate => "negate".into(),
            Move::T => "T".into(),
            Move::S => "S".into(),
        }
    }
}

/// `theta(gamma tau) = prefactor(tau) * sum_i w_i theta_{spec_i}(tau)`.
#[derive(Clone, Debug)]
pub struct TransformResult {
    /// Exponent of `(-i tau)`, present for `S`.
    pub tau_power: Option<Rat>,
    /// Root of unity part of the constant.
    pub constant: CycNum,
    /// The constant carries `1/sqrt(inv_sqrt_det)`.
    pub inv_sqrt_det: u64,
    pub specs: Vec<(CycNum, ThetaSpec)>,
}

impl TransformResult {
    pub fn prefactor(&self, pt: &EvalPoint) -> Complex64 {
        let mut p = self.constant.eval() / (self.inv_sqrt_det as f64).sqrt();
        if let Some(e) = &self.tau_power {
            let w = Complex64::new(0.0, -1.0) * pt.tau();
            p *= w.powf(to_f64(e));
        }
        p
    }
}

/// `e^{2 pi i r}`
fn root_of(r: &Rat) -> Result<CycNum> {
    let f = frac(r);
    let den = f.denom().to_u32().ok_or(Error::Overflow)?;
    let num = f.numer().to_i64().ok_or(Error::Overflow)?;
    Ok(CycNum::root(den, num))
}

fn neg_vec(v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|x| -x).collect()
}

fn add_vec(u: &[Rat], v: &[Rat]) -> Vec<Rat> {
    u.iter().zip(v).map(|(x, y)| x + y).collect()
}

/// Applies one of the transformation laws to `spec`.
pub fn transform(spec: &ThetaSpec, mv: &Move) -> Result<TransformResult> {
    let qf = spec.qf();
    let n = qf.dim();
    let a = spec.chars().a().to_vec();
    let b = spec.chars().b().to_vec();
    let d = spec.degree();
    let single = |constant: CycNum, s: ThetaSpec| TransformResult {
        tau_power: None,
        constant,
        inv_sqrt_det: 1,
        specs: vec![(CycNum::one(), s)],
    };
    match mv {
        Move::ShiftA(l) => {
            if l.len() != n {
                return Err(Error::InvalidMove(format!("shift needs {n} entries")));
            }
            let a2 = add_vec(&a, &l.iter().map(|&x| int(x)).collect::<Vec<_>>());
            Ok(single(CycNum::one(), spec.with_chars(a2, b)?))
        }
        Move::ShiftB(m) => {
            if m.len() != n {
                return Err(Error::InvalidMove(format!("shift needs {n} entries")));
            }
            if !qf.apply(m).iter().all(|x| x.is_integer()) {
                return Err(Error::InvalidMove("mu is not in A^{-1} Z^n".into()));
            }
            let phase = root_of(&-qf.b(&a, m))?;
            Ok(single(phase, spec.with_chars(a, add_vec(&b, m))?))
        }
        Move::Negate => {
            let sign = if d % 2 == 0 { -Rat::one() } else { Rat::one() };
            Ok(single(CycNum::from_rat(sign), spec.with_chars(neg_vec(&a), neg_vec(&b))?))
        }
        Move::T => {
            let qa = qf.q(&a);
            if qf.is_even() {
                let phase = root_of(&-qa)?;
                return Ok(single(phase, spec.with_chars(a.clone(), add_vec(&a, &b))?));
            }
            let astar: Vec<Rat> = qf.diag().iter().map(|&x| int(x)).collect();
            let shift: Vec<Rat> = qf.apply_inverse(&astar).into_iter().map(|x| x / int(2)).collect();
            let bshift: Rat = astar.iter().zip(&a).map(|(x, y)| x * y).sum();
            let phase = root_of(&(-qa - bshift / int(2)))?;
            let b2 = add_vec(&add_vec(&a, &b), &shift);
            Ok(single(phase, spec.with_chars(a, b2)?))
        }
        Move::S => {
            let constant = CycNum::root(4, d as i64 + 1).mul(&root_of(&qf.b(&a, &b))?);
            let mut specs = Vec::new();
            for p in coset_reps(qf) {
                specs.push((CycNum::one(), spec.with_chars(add_vec(&b, &p), neg_vec(&a))?));
            }
            Ok(TransformResult {
                tau_power: Some(spec.weight()),
                constant,
                inv_sqrt_det: qf.det().unsigned_abs(),
                specs,
            })
        }
    }
}

/// Representatives of `A^{-1} Z^n / Z^n` from the Hermite normal form of `A`.
pub fn coset_reps(qf: &QuadraticForm) -> Vec<Vec<Rat>> {
    let n = qf.dim();
    let mut m: Vec<Vec<i128>> = qf.matrix().iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            while m[i][j] != 0 {
                let q = m[i][i].checked_div(m[i][j]).unwrap_or(0);
                for r in 0..n {
                    let v = m[r][j];
                    m[r][i] -= q * v;
                }
                for r in 0..n {
                    let t = m[r][i];
                    m[r][i] = m[r][j];
                    m[r][j] = t;
                }
            }
        }
    }
    let h: Vec<i128> = (0..n).map(|i| m[i][i].abs()).collect();
    let mut out = Vec::new();
    let mut v = vec![0i128; n];
    loop {
        let vr: Vec<Rat> = v.iter().map(|&x| Rat::from_integer(x.into())).collect();
        out.push(qf.apply_inverse(&vr).iter().map(frac).collect());
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            v[i] += 1;
            if v[i] < h[i] {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// Numerical comparison of both sides of a transformation law.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModularityReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub error_estimate: f64,
    pub pass: bool,
}

pub fn verify_modularity(spec: &ThetaSpec, mv: &Move, pt: &EvalPoint, tol: f64) -> Result<ModularityReport> {
    let tr = transform(spec, mv)?;
    let opts = EvalOptions::with_tol((tol * 1e-2).max(1e-13));
    let lhs = nonholo_eval(spec, &mv.target(pt)?, &opts)?;
    let pre = tr.prefactor(pt);
    let mut rhs = Complex64::zero();
    let mut err = lhs.error;
    for (w, s) in &tr.specs {
        let e = nonholo_eval(s, pt, &opts)?;
        let wv = w.eval() * pre;
        rhs += e.value * wv;
        err += e.error * wv.norm();
    }
    let residual = (lhs.value - rhs).norm();
    Ok(ModularityReport { lhs: lhs.value, rhs, residual, error_estimate: err, pass: residual <= tol * (1.0 + lhs.value.norm()) })
}

/// Checks a law coefficientwise on the holomorphic q-expansions up to `q^N`.
pub fn verify_exact(spec: &ThetaSpec, mv: &Move, order: &Rat) -> Result<bool> {
    if *mv == Move::S {
        return Err(Error::InvalidMove("the S law has no coefficientwise form".into()));
    }
    let tr = transform(spec, mv)?;
    let mut lhs = holomorphic_expansion(spec, order)?;
    if *mv == Move::T {
        lhs = lhs.shift_tau_by_one();
    }
    let mut rhs = QSeries::zero(1, order.clone());
    for (w, s) in &tr.specs {
        rhs = rhs.add(&holomorphic_expansion(s, order)?.scale(&w.mul(&tr.constant)));
    }
    Ok(lhs == rhs)
}

/// Errors `|theta^{c1,c(t)} - theta^{c1,c2}|` along `c(t) = c2 + t c3`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitReport {
    pub t: Vec<f64>,
    pub errors: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub reference: Complex64,
    pub decreasing: bool,
    pub pass: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn limit_probe(
    qf: &QuadraticForm,
    c0: &[Rat],
    f: &HomPoly,
    c1: &ConeVector,
    c2: &ConeVector,
    c3: &ConeVector,
    chars: &Characteristics,
    pt: &EvalPoint,
    t_list: &[Rat],
    tol: f64,
) -> Result<LimitReport> {
    if !c2.is_cusp() {
        return Err(Error::NotCusp);
    }
    if c3.kind() != ConeKind::Interior {
        return Err(Error::NotInterior);
    }
    let opts = EvalOptions::with_tol((tol * 1e-3).max(1e-13));
    let mk = |c: ConeVector| ThetaSpec::new(qf.clone(), c0.to_vec(), f.clone(), c1.clone(), c, chars.clone(), false);
    let reference = nonholo_eval(&mk(c2.clone())?, pt, &opts)?;
    let (e2, e3) = (c2.exact_or_err()?, c3.exact_or_err()?);
    let mut report = LimitReport {
        t: vec![],
        errors: vec![],
        error_estimates: vec![],
        reference: reference.value,
        decreasing: true,
        pass: false,
    };
    for t in t_list {
        if !t.is_positive() {
            return Err(Error::Domain("t must be positive; c(0) is a cusp".into()));
        }
        let ct: Vec<Rat> = e2.iter().zip(e3).map(|(x, y)| x + t * y).collect();
        let cv = classify_vector(qf, c0, &ct).filter(|c| c.kind() == ConeKind::Interior).ok_or(Error::NotInterior)?;
        let v = nonholo_eval(&mk(cv)?, pt, &opts)?;
        let err = (v.value - reference.value).norm();
        if let Some(prev) = report.errors.last() {
            report.decreasing &= err < *prev;
        }
        report.t.push(to_f64(t));
        report.errors.push(err);
        report.error_estimates.push(v.error + reference.error);
    }
    report.pass = report.decreasing && report.errors.last().is_some_and(|e| *e <= tol);
    Ok(report)
}

