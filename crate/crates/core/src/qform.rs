//! Integral quadratic forms of signature (n-1, 1), cones and cusps.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{dot, int, integer_multiple, primitive_integer, sign_rat, to_f64, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    n: usize,
    a: Vec<Vec<i64>>,
    a_inv: Vec<Vec<Rat>>,
    det: i64,
    diag: Vec<i64>,
    is_even: bool,
}

/// Counts positive and negative pivots of a congruence diagonalization.
pub fn signature(m: &[Vec<Rat>]) -> Result<(usize, usize)> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
    }
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        let piv = (k..n).find(|&i| !a[i][i].is_zero());
        let p = match piv {
            Some(i) => i,
            None => {
                let mut found = None;
                'outer: for i in k..n {
                    for j in k..n {
                        if i != j && !a[i][j].is_zero() {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                let (i, j) = found.ok_or(Error::SingularMatrix)?;
                // e_i -> e_i + e_j makes the diagonal entry 2 a_ij
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
                i
            }
        };
        a.swap(k, p);
        for row in a.iter_mut() {
            row.swap(k, p);
        }
        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
        for i in k + 1..n {
            a[k][i] = Rat::zero();
            let _ = i;
        }
        for i in k + 1..n {
            a[i][k] = Rat::zero();
        }
    }
    Ok((pos, neg))
}

pub fn is_positive_definite(m: &[Vec<Rat>]) -> bool {
    matches!(signature(m), Ok((p, 0)) if p == m.len())
}

fn inverse_and_det(a: &[Vec<Rat>]) -> Result<(Vec<Vec<Rat>>, Rat)> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    let mut det = Rat::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero()).ok_or(Error::SingularMatrix)?;
        if p != k {
            m.swap(k, p);
            inv.swap(k, p);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for j in 0..n {
            m[k][j] = &m[k][j] / &pivot;
            inv[k][j] = &inv[k][j] / &pivot;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in 0..n {
                let v = &f * &m[k][j];
                m[i][j] -= v;
                let w = &f * &inv[k][j];
                inv[i][j] -= w;
            }
        }
    }
    Ok((inv, det))
}

/// Rational inverse of a square rational matrix.
pub fn rat_inverse(a: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    inverse_and_det(a).map(|(i, _)| i)
}

impl QuadraticForm {
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self> {
        let n = a.len();
        if n < 2 {
            return Err(Error::Domain("dimension must be at least 2".into()));
        }
        let ar: Vec<Vec<Rat>> = a
            .iter()
            .map(|row| {
                if row.len() != n {
                    Err(Error::DimensionMismatch { expected: n, got: row.len() })
                } else {
                    Ok(row.iter().map(|&x| int(x)).collect())
                }
            })
            .collect::<Result<_>>()?;
        let (pos, neg) = signature(&ar)?;
        if neg != 1 || pos != n - 1 {
            return Err(Error::WrongSignature { pos, neg });
        }
        let (a_inv, det) = inverse_and_det(&ar)?;
        let det = crate::rat::rat_to_i64(&det)?;
        let diag: Vec<i64> = (0..n).map(|i| a[i][i]).collect();
        let is_even = diag.iter().all(|d| d % 2 == 0);
        Ok(QuadraticForm { n, a, a_inv, det, diag, is_even })
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }
    pub fn inverse(&self) -> &[Vec<Rat>] {
        &self.a_inv
    }
    pub fn det(&self) -> i64 {
        self.det
    }
    pub fn diag(&self) -> &[i64] {
        &self.diag
    }
    pub fn is_even(&self) -> bool {
        self.is_even
    }

    pub fn matrix_rat(&self) -> Vec<Vec<Rat>> {
        self.a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    pub fn matrix_f64(&self) -> Vec<Vec<f64>> {
        self.a.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect()
    }

    fn check(&self, v: &[Rat]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        Ok(())
    }

    /// A v
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        self.a
            .iter()
            .map(|row| row.iter().zip(v).fold(Rat::zero(), |acc, (&x, y)| acc + y * int(x)))
            .collect()
    }

    pub fn apply_i64(&self, v: &[i64]) -> Vec<i64> {
        self.a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
    }

    pub fn apply_f64(&self, v: &[f64]) -> Vec<f64> {
        self.a.iter().map(|row| row.iter().zip(v).map(|(&x, y)| x as f64 * y).sum()).collect()
    }

    pub fn b(&self, u: &[Rat], v: &[Rat]) -> Rat {
        dot(u, &self.apply(v))
    }

    pub fn q(&self, v: &[Rat]) -> Rat {
        self.b(v, v) / int(2)
    }

    pub fn b_f64(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter().zip(self.apply_f64(v)).map(|(x, y)| x * y).sum()
    }

    pub fn q_f64(&self, v: &[f64]) -> f64 {
        0.5 * self.b_f64(v, v)
    }

    /// `(Q(v), B(u, v))`
    pub fn evaluate(&self, u: &[Rat], v: &[Rat]) -> Result<(Rat, Rat)> {
        self.check(u)?;
        self.check(v)?;
        Ok((self.q(v), self.b(u, v)))
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.n - 1, 1)
    }

    /// A^{-1} v
    pub fn apply_inverse(&self, v: &[Rat]) -> Vec<Rat> {
        self.a_inv.iter().map(|row| dot(row, v)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeKind {
    Interior,
    Cusp,
}

/// A vector in the closure of the cone. Cusps are stored as primitive integer
/// vectors. Interior vectors keep their exact representative when one exists
/// and always carry a floating copy used by the numerical evaluators.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeVector {
    exact: Option<Vec<Rat>>,
    real: Vec<f64>,
    kind: ConeKind,
    qc: f64,
}

impl ConeVector {
    pub fn kind(&self) -> ConeKind {
        self.kind
    }
    pub fn is_cusp(&self) -> bool {
        self.kind == ConeKind::Cusp
    }
    pub fn exact(&self) -> Option<&[Rat]> {
        self.exact.as_deref()
    }
    pub fn exact_or_err(&self) -> Result<&[Rat]> {
        self.exact.as_deref().ok_or_else(|| {
            Error::Domain("exact computation needs a rational representative of the cone vector".into())
        })
    }
    pub fn real(&self) -> &[f64] {
        &self.real
    }
    /// Q(c) for the floating representative.
    pub fn qc(&self) -> f64 {
        self.qc
    }
    pub fn qc_exact(&self, qf: &QuadraticForm) -> Option<Rat> {
        self.exact.as_ref().map(|c| qf.q(c))
    }

    /// Integer vector on the same ray: primitive for cusps, least integer multiple otherwise.
    pub fn integer_ray(&self) -> Result<Vec<i64>> {
        let c = self.exact_or_err()?;
        match self.kind {
            ConeKind::Cusp => primitive_integer(c),
            ConeKind::Interior => integer_multiple(c),
        }
    }

    pub fn same_ray(&self, other: &ConeVector) -> bool {
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            let pa = primitive_integer(a);
            let pb = primitive_integer(b);
            return matches!((pa, pb), (Ok(x), Ok(y)) if x == y);
        }
        let na: f64 = self.real.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb: f64 = other.real.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.real.iter().zip(&other.real).all(|(x, y)| (x / na - y / nb).abs() < 1e-13)
    }
}

/// Classifies `c` relative to the component containing the anchor `c0`.
pub fn classify_vector(qf: &QuadraticForm, c0: &[Rat], c: &[Rat]) -> Option<ConeVector> {
    if c.len() != qf.dim() || c0.len() != qf.dim() {
        return None;
    }
    if !qf.q(c0).is_negative() || c.iter().all(|x| x.is_zero()) {
        return None;
    }
    if !qf.b(c, c0).is_negative() {
        return None;
    }
    let qc = qf.q(c);
    if qc.is_negative() {
        let real: Vec<f64> = c.iter().map(to_f64).collect();
        let qcf = qf.q_f64(&real);
        Some(ConeVector { exact: Some(c.to_vec()), real, kind: ConeKind::Interior, qc: qcf })
    } else if qc.is_zero() {
        let p: Vec<Rat> = primitive_integer(c).ok()?.into_iter().map(int).collect();
        let real: Vec<f64> = p.iter().map(to_f64).collect();
        Some(ConeVector { exact: Some(p), real, kind: ConeKind::Cusp, qc: 0.0 })
    } else {
        None
    }
}

/// Interior vector given by floating entries, optionally with a rational
/// vector on the same ray for the exact engine.
pub fn classify_real(
    qf: &QuadraticForm,
    c0: &[Rat],
    c: &[f64],
    rational_rep: Option<&[Rat]>,
) -> Option<ConeVector> {
    if c.len() != qf.dim() {
        return None;
    }
    let c0f: Vec<f64> = c0.iter().map(to_f64).collect();
    let qc = qf.q_f64(c);
    let scale: f64 = c.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300);
    if !(qc < -1e-12 * scale * scale) || !(qf.b_f64(c, &c0f) < 0.0) {
        return None;
    }
    let exact = match rational_rep {
        Some(r) => {
            let rv = classify_vector(qf, c0, r)?;
            if rv.kind != ConeKind::Interior {
                return None;
            }
            let rf = rv.real.clone();
            let nr: f64 = rf.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nc: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !rf.iter().zip(c).all(|(x, y)| (x / nr - y / nc).abs() < 1e-12) {
                return None;
            }
            Some(r.to_vec())
        }
        None => None,
    };
    Some(ConeVector { exact, real: c.to_vec(), kind: ConeKind::Interior, qc })
}

/// gcd of the entries of A c for a cusp c in primitive form; B(c, Z^n) = g Z.
pub fn cusp_lattice_gcd(qf: &QuadraticForm, c: &ConeVector) -> Result<i64> {
    let ci = c.integer_ray()?;
    let ac = qf.apply_i64(&ci);
    Ok(ac.iter().fold(0i64, |g, &x| g.gcd(&x)))
}

/// Admissibility of `a` for `c`: interior vectors admit everything; a cusp
/// admits `a` when B(c, l) never vanishes on `a + Z^n`.
pub fn characteristic_admissible(qf: &QuadraticForm, c: &ConeVector, a: &[Rat]) -> bool {
    match c.kind {
        ConeKind::Interior => true,
        ConeKind::Cusp => {
            let cr = match c.exact() {
                Some(x) => x,
                None => return false,
            };
            let g = match cusp_lattice_gcd(qf, c) {
                Ok(g) if g != 0 => g,
                _ => return false,
            };
            let v = qf.b(cr, a) / int(g);
            !v.is_integer()
        }
    }
}

/// Gram matrix G of the positive definite form M(v) = Q(v) - B(c,v)^2/(2Q(c)) = v^T G v / 2.
pub fn majorant(qf: &QuadraticForm, c: &ConeVector) -> Result<Vec<Vec<Rat>>> {
    if c.kind != ConeKind::Interior {
        return Err(Error::NotInterior);
    }
    let cr = c.exact_or_err()?;
    let qc = qf.q(cr);
    let ac = qf.apply(cr);
    let n = qf.dim();
    let g: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| int(qf.a[i][j]) - &ac[i] * &ac[j] / &qc).collect())
        .collect();
    if !is_positive_definite(&g) {
        return Err(Error::Domain("majorant is not positive definite".into()));
    }
    Ok(g)
}

/// Floating version of [`majorant`] usable for irrational interior vectors.
pub fn majorant_f64(qf: &QuadraticForm, c: &ConeVector) -> Result<Vec<Vec<f64>>> {
    if c.kind != ConeKind::Interior {
        return Err(Error::NotInterior);
    }
    let ac = qf.apply_f64(&c.real);
    let qc = c.qc;
    let n = qf.dim();
    Ok((0..n)
        .map(|i| (0..n).map(|j| qf.a[i][j] as f64 - ac[i] * ac[j] / qc).collect())
        .collect())
}

/// The interior vector c1 + c2 between two cusps of the same component.
pub fn interior_between(qf: &QuadraticForm, c0: &[Rat], c1: &ConeVector, c2: &ConeVector) -> Result<ConeVector> {
    if !c1.is_cusp() || !c2.is_cusp() {
        return Err(Error::NotCusp);
    }
    let (a, b) = (c1.exact_or_err()?, c2.exact_or_err()?);
    if !qf.b(a, b).is_negative() {
        return Err(Error::OppositeComponents);
    }
    let s: Vec<Rat> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    match classify_vector(qf, c0, &s) {
        Some(v) if v.kind == ConeKind::Interior => Ok(v),
        _ => Err(Error::NotInCone),
    }
}

/// Sign of B(c, l) for an exact cone vector and a rational point.
pub fn sign_b(qf: &QuadraticForm, c: &[Rat], l: &[Rat]) -> i32 {
    sign_rat(&qf.b(c, l))
}

pub fn det_big(m: &[Vec<Rat>]) -> Result<Rat> {
    inverse_and_det(m).map(|(_, d)| d).or_else(|e| if e == Error::SingularMatrix { Ok(Rat::zero()) } else { Err(e) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, vec_int};

    fn hyp() -> QuadraticForm {
        QuadraticForm::new(vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn evaluation() {
        let qf = hyp();
        let v = vec_int(&[1, 1]);
        let (q, b) = qf.evaluate(&v, &v).unwrap();
        assert_eq!(q, int(1));
        assert_eq!(b, int(2));
        let h = QuadraticForm::new(vec![vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(h.q(&vec_int(&[3, 5])), rat(9, 2) + int(15));
        let z = QuadraticForm::new(vec![vec![0, 0, -4], vec![0, 2, 0], vec![-4, 0, 0]]).unwrap();
        assert_eq!(z.q(&vec_int(&[2, 3, 5])), int(9 - 40));
        assert!(qf.evaluate(&vec_int(&[1]), &v).is_err());
    }

    #[test]
    fn signatures() {
        let r = |m: Vec<Vec<i64>>| -> Vec<Vec<Rat>> { m.into_iter().map(|r| vec_int(&r)).collect() };
        assert_eq!(signature(&r(vec![vec![0, 1], vec![1, 0]])).unwrap(), (1, 1));
        assert_eq!(signature(&r(vec![vec![0, 0, -4], vec![0, 2, 0], vec![-4, 0, 0]])).unwrap(), (2, 1));
        assert_eq!(signature(&r(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])).unwrap(), (3, 0));
        assert!(QuadraticForm::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).is_err());
        assert_eq!(signature(&r(vec![vec![1, 1], vec![1, 1]])), Err(Error::SingularMatrix));
        let z = QuadraticForm::new(vec![vec![0, 0, -4], vec![0, 2, 0], vec![-4, 0, 0]]).unwrap();
        assert_eq!(z.det(), -32);
        assert!(!z.is_even() || z.diag().iter().all(|d| d % 2 == 0));
    }

    #[test]
    fn classification() {
        let qf = hyp();
        let c0 = vec_int(&[-1, 1]);
        assert!(classify_vector(&qf, &vec_int(&[-1, -1]), &vec_int(&[0, -1])).is_none());
        let c1 = classify_vector(&qf, &c0, &vec_int(&[0, 1])).unwrap();
        let c2 = classify_vector(&qf, &c0, &vec_int(&[-1, 0])).unwrap();
        assert_eq!(c1.kind(), ConeKind::Cusp);
        assert_eq!(c2.kind(), ConeKind::Cusp);
        assert_eq!(qf.b(c1.exact().unwrap(), c2.exact().unwrap()), int(-1));
        let s = interior_between(&qf, &c0, &c1, &c2).unwrap();
        assert_eq!(s.exact().unwrap(), &vec_int(&[-1, 1])[..]);
        assert_eq!(qf.q(s.exact().unwrap()), int(-1));
        let h = QuadraticForm::new(vec![vec![1, 1], vec![1, 0]]).unwrap();
        let r2 = 2f64.sqrt();
        let c = classify_real(&h, &c0, &[-r2, r2], Some(&vec_int(&[-1, 1]))).unwrap();
        assert_eq!(c.kind(), ConeKind::Interior);
        assert!((c.qc() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn cusp_scaling_is_primitive() {
        let qf = hyp();
        let c0 = vec_int(&[-1, 1]);
        let c = classify_vector(&qf, &c0, &[int(0), rat(3, 4)]).unwrap();
        assert_eq!(c.exact().unwrap(), &vec_int(&[0, 1])[..]);
    }

    #[test]
    fn admissibility() {
        let qf = hyp();
        let c0 = vec_int(&[-1, 1]);
        let c = classify_vector(&qf, &c0, &vec_int(&[0, 1])).unwrap();
        assert!(characteristic_admissible(&qf, &c, &[rat(1, 3), rat(1, 5)]));
        assert!(!characteristic_admissible(&qf, &c, &[int(1), rat(1, 5)]));
        let h = QuadraticForm::new(vec![vec![1, 1], vec![1, 0]]).unwrap();
        let c1 = classify_vector(&h, &c0, &vec_int(&[0, 1])).unwrap();
        assert!(!characteristic_admissible(&h, &c1, &[int(0), rat(1, 2)]));
    }

    #[test]
    fn majorants() {
        let qf = hyp();
        let c0 = vec_int(&[-1, 1]);
        let c = classify_vector(&qf, &c0, &vec_int(&[-1, 1])).unwrap();
        let g = majorant(&qf, &c).unwrap();
        // M(v) = v1 v2 + (v1 - v2)^2 / 2 = (v1^2 + v2^2) / 2
        assert_eq!(g, vec![vec_int(&[1, 0]), vec_int(&[0, 1])]);
        let cr = c.exact().unwrap();
        let m = dot(cr, &g.iter().map(|r| dot(r, cr)).collect::<Vec<_>>()) / int(2);
        assert_eq!(m, -qf.q(cr));
        let c3 = classify_vector(&qf, &c0, &vec_int(&[-1, 3])).unwrap();
        assert!(is_positive_definite(&majorant(&qf, &c3).unwrap()));
        let cusp = classify_vector(&qf, &c0, &vec_int(&[0, 1])).unwrap();
        assert_eq!(majorant(&qf, &cusp), Err(Error::NotInterior));
    }
}
