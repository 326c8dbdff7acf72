//! Integer bookkeeping for the points of `a + Z^n` and the cone geometry
//! shared by the exact and numerical engines.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::qform::{interior_between, is_positive_definite, ConeKind};
use crate::rat::{lcm_denominators, Rat};

use super::ThetaSpec;

/// Points `l = L / da` of `a + Z^n` stored through the integer vector `L`.
pub(crate) struct IntLattice {
    pub n: usize,
    pub a: Vec<Vec<i128>>,
    pub da: i128,
    l0: Vec<i128>,
    ab: Vec<i128>,
    pub phase_mod: i128,
}

fn big_i128(b: &num_bigint::BigInt) -> Result<i128> {
    b.to_i128().ok_or(Error::Overflow)
}

impl IntLattice {
    pub fn new(spec: &ThetaSpec) -> Result<Self> {
        let qf = spec.qf();
        let n = qf.dim();
        let a: Vec<Vec<i128>> = qf.matrix().iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let ch = spec.chars();
        let da = big_i128(&lcm_denominators(ch.a().iter()))?;
        let db = big_i128(&lcm_denominators(ch.b().iter()))?;
        let l0 = ch
            .a()
            .iter()
            .map(|x| big_i128(&(x * Rat::from_integer(da.into())).to_integer()))
            .collect::<Result<Vec<_>>>()?;
        let bi = ch
            .b()
            .iter()
            .map(|x| big_i128(&(x * Rat::from_integer(db.into())).to_integer()))
            .collect::<Result<Vec<_>>>()?;
        let ab = (0..n).map(|i| (0..n).map(|j| a[i][j] * bi[j]).sum()).collect();
        Ok(IntLattice { n, a, da, l0, ab, phase_mod: da * db })
    }

    pub fn point(&self, k: &[i64]) -> Vec<i128> {
        self.l0.iter().zip(k).map(|(l, &x)| l + self.da * x as i128).collect()
    }

    pub fn shift_f64(&self) -> Vec<f64> {
        self.l0.iter().map(|&l| l as f64 / self.da as f64).collect()
    }

    pub fn apply(&self, c: &[i64]) -> Vec<i128> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.a[i][j] * c[j] as i128).sum()).collect()
    }

    /// `L^T A L = 2 da^2 Q(l)`
    pub fn q_num(&self, l: &[i128]) -> i128 {
        let mut s = 0;
        for i in 0..self.n {
            let mut r = 0;
            for j in 0..self.n {
                r += self.a[i][j] * l[j];
            }
            s += l[i] * r;
        }
        s
    }

    /// `Q(l)` as a float.
    pub fn q_f64(&self, l: &[i128]) -> f64 {
        self.q_num(l) as f64 / (2.0 * (self.da as f64).powi(2))
    }

    /// `(A c) . L = da B(c, l)`
    pub fn dot(ac: &[i128], l: &[i128]) -> i128 {
        ac.iter().zip(l).map(|(x, y)| x * y).sum()
    }

    /// `j` with `B(l, b) = j / phase_mod mod 1`.
    pub fn phase_index(&self, l: &[i128]) -> i128 {
        Self::dot(&self.ab, l).rem_euclid(self.phase_mod)
    }

    pub fn to_f64(&self, l: &[i128]) -> Vec<f64> {
        l.iter().map(|&x| x as f64 / self.da as f64).collect()
    }

    pub fn to_rat(&self, l: &[i128]) -> Vec<Rat> {
        l.iter().map(|&x| Rat::new(x.into(), self.da.into())).collect()
    }
}

/// One summand of the sign-difference part after the cocycle reduction.
pub(crate) enum Piece {
    /// Two interior vectors, enumerated through the form `M_W`.
    DoubleInterior { c1: Vec<i64>, c2: Vec<i64>, gram: Vec<Vec<f64>> },
    /// Interior `ci` and cusp `cc` in the order `(ci, cc)`, negated if `negate`.
    Slab(Slab),
}

pub(crate) struct Slab {
    pub ci: Vec<i64>,
    pub cc: Vec<i64>,
    pub negate: bool,
    /// `B(ci, cc) < 0`
    pub beta: i128,
    /// `2 Q(ci) < 0`
    pub two_qci: i128,
    pub gram: Vec<Vec<f64>>,
}

impl Slab {
    /// Bound for `M_ci(mu) - Q(mu)` on the slab.
    pub fn extra(&self) -> f64 {
        (self.beta as f64).powi(2) / (self.two_qci.abs() as f64)
    }
}

fn ray_data(spec: &ThetaSpec, which: usize) -> Result<(ConeKind, Vec<i64>)> {
    let c = if which == 1 { spec.c1() } else { spec.c2() };
    Ok((c.kind(), c.integer_ray()?))
}

fn dot_i(a: &[Vec<i128>], u: &[i64], v: &[i64]) -> i128 {
    let n = u.len();
    let mut s = 0;
    for i in 0..n {
        for j in 0..n {
            s += u[i] as i128 * a[i][j] * v[j] as i128;
        }
    }
    s
}

fn slab(a: &[Vec<i128>], ci: Vec<i64>, cc: Vec<i64>, negate: bool) -> Result<Slab> {
    let n = ci.len();
    let beta = dot_i(a, &ci, &cc);
    let two_qci = dot_i(a, &ci, &ci);
    if beta >= 0 || two_qci >= 0 {
        return Err(Error::OppositeComponents);
    }
    let aci: Vec<f64> = (0..n).map(|i| (0..n).map(|j| (a[i][j] * ci[j] as i128) as f64).sum()).collect();
    let qci = two_qci as f64 / 2.0;
    let gram = (0..n).map(|i| (0..n).map(|j| a[i][j] as f64 - aci[i] * aci[j] / qci).collect()).collect();
    Ok(Slab { ci, cc, negate, beta, two_qci, gram })
}

/// Splits `sign B(c1, l) - sign B(c2, l)` into pieces with finite enumeration regions.
pub(crate) fn pieces(spec: &ThetaSpec) -> Result<Vec<Piece>> {
    if spec.is_trivial() {
        return Ok(vec![]);
    }
    let a: Vec<Vec<i128>> = spec.qf().matrix().iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (k1, r1) = ray_data(spec, 1)?;
    let (k2, r2) = ray_data(spec, 2)?;
    match (k1, k2) {
        (ConeKind::Interior, ConeKind::Interior) => {
            let n = r1.len();
            let b12 = dot_i(&a, &r1, &r2);
            let det = dot_i(&a, &r1, &r1) * dot_i(&a, &r2, &r2) - b12 * b12;
            if b12 >= 0 || det >= 0 {
                return Err(Error::OppositeComponents);
            }
            let kappa = Rat::new(b12.into(), det.into());
            let ac1: Vec<i128> = (0..n).map(|i| (0..n).map(|j| a[i][j] * r1[j] as i128).sum()).collect();
            let ac2: Vec<i128> = (0..n).map(|i| (0..n).map(|j| a[i][j] * r2[j] as i128).sum()).collect();
            let g: Vec<Vec<Rat>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            Rat::from_integer(a[i][j].into())
                                + &kappa * Rat::from_integer((ac1[i] * ac2[j] + ac2[i] * ac1[j]).into())
                        })
                        .collect()
                })
                .collect();
            if !is_positive_definite(&g) {
                return Err(Error::Domain("majorant of the double interior region is not positive definite".into()));
            }
            let gram = g.iter().map(|r| r.iter().map(crate::rat::to_f64).collect()).collect();
            Ok(vec![Piece::DoubleInterior { c1: r1, c2: r2, gram }])
        }
        (ConeKind::Interior, ConeKind::Cusp) => Ok(vec![Piece::Slab(slab(&a, r1, r2, false)?)]),
        (ConeKind::Cusp, ConeKind::Interior) => Ok(vec![Piece::Slab(slab(&a, r2, r1, true)?)]),
        (ConeKind::Cusp, ConeKind::Cusp) => {
            let cs = interior_between(spec.qf(), spec.anchor(), spec.c1(), spec.c2())?;
            let rs = cs.integer_ray()?;
            Ok(vec![
                Piece::Slab(slab(&a, rs.clone(), r1, true)?),
                Piece::Slab(slab(&a, rs, r2, false)?),
            ])
        }
    }
}

pub(crate) fn sgn(x: i128) -> i32 {
    x.signum() as i32
}
