//! Exact q-expansions of the holomorphic theta series.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::HomPoly;
use crate::qseries::{CycNum, QSeries};
use crate::rat::{lcm_denominators, Rat};

use super::enumerate::Ellipsoid;
use super::lattice::{pieces, sgn, IntLattice, Piece};
use super::ThetaSpec;

const DEFAULT_BUDGET: u64 = 50_000_000;

/// `f` with a common denominator, evaluated on integer vectors.
pub(crate) struct IntPoly {
    terms: Vec<(Vec<u32>, i128, i128)>,
    pub den: i128,
    pub degree: u32,
    pub complex: bool,
}

impl IntPoly {
    pub fn new(f: &HomPoly) -> Result<Self> {
        let den = lcm_denominators(f.terms().flat_map(|(_, c)| [&c.re, &c.im]));
        let denr = Rat::from_integer(den.clone());
        let conv = |r: &Rat| (r * &denr).to_integer().to_i128().ok_or(Error::Overflow);
        let mut terms = Vec::new();
        let mut complex = false;
        for (e, c) in f.terms() {
            let (re, im) = (conv(&c.re)?, conv(&c.im)?);
            complex |= im != 0;
            terms.push((e.clone(), re, im));
        }
        Ok(IntPoly { terms, den: den.to_i128().ok_or(Error::Overflow)?, degree: f.degree(), complex })
    }

    pub fn eval(&self, l: &[i128]) -> Result<(i128, i128)> {
        let (mut re, mut im) = (0i128, 0i128);
        for (e, cr, ci) in &self.terms {
            let mut m: i128 = 1;
            for (x, &k) in l.iter().zip(e) {
                for _ in 0..k {
                    m = m.checked_mul(*x).ok_or(Error::Overflow)?;
                }
            }
            re = re.checked_add(cr.checked_mul(m).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            im = im.checked_add(ci.checked_mul(m).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
        }
        Ok((re, im))
    }
}

struct Accumulator<'a> {
    lat: &'a IntLattice,
    poly: IntPoly,
    /// `B(l, b) mod 1 = (j / reduce) / order`
    reduce: i128,
    order: u32,
    total: u32,
    bound_num: i128,
    bound_den: i128,
    sums: BTreeMap<i128, Vec<i128>>,
}

impl<'a> Accumulator<'a> {
    fn new(spec: &ThetaSpec, lat: &'a IntLattice, n_order: &Rat) -> Result<Self> {
        let poly = IntPoly::new(spec.f())?;
        let n = lat.n;
        // phases B(l, b) = (ab . l0 + da (ab . k)) / pm
        let zero = vec![0i64; n];
        let base = lat.phase_index(&lat.point(&zero));
        let mut g = lat.phase_mod;
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            let step = (lat.phase_index(&lat.point(&e)) - base).rem_euclid(lat.phase_mod);
            g = g.gcd(&step);
        }
        let reduce = g.gcd(&base).max(1);
        let order = (lat.phase_mod / reduce).to_u32().ok_or(Error::Overflow)?;
        let total = if poly.complex { order.lcm(&4) } else { order };
        let bound_num = (n_order.numer() * num_bigint::BigInt::from(2 * lat.da * lat.da)).to_i128().ok_or(Error::Overflow)?;
        let bound_den = n_order.denom().to_i128().ok_or(Error::Overflow)?;
        Ok(Accumulator { lat, poly, reduce, order, total, bound_num, bound_den, sums: BTreeMap::new() })
    }

    /// `Q(l) < N`
    fn below(&self, qn: i128) -> bool {
        qn * self.bound_den < self.bound_num
    }

    fn add(&mut self, l: &[i128], qn: i128, weight: i32) -> Result<()> {
        if weight == 0 {
            return Ok(());
        }
        let (re, im) = self.poly.eval(l)?;
        if re == 0 && im == 0 {
            return Ok(());
        }
        let j = self.lat.phase_index(l) / self.reduce;
        let s = (self.total / self.order) as i128;
        let total = self.total as i128;
        let slots = self.sums.entry(qn).or_insert_with(|| vec![0; self.total as usize]);
        let w = weight as i128;
        let k = ((j * s) % total) as usize;
        slots[k] += w * re;
        if im != 0 {
            let k2 = ((j * s + total / 4) % total) as usize;
            slots[k2] += w * im;
        }
        Ok(())
    }

    fn finish(self, n_order: &Rat) -> Result<QSeries> {
        let da = self.lat.da;
        let qden = Rat::from_integer((2 * da * da).into());
        let scale = Rat::from_integer(self.poly.den.into()) * Rat::from_integer(da.into()).pow(self.poly.degree as i32);
        let mut out = QSeries::zero(1, n_order.clone());
        for (qn, slots) in self.sums {
            if slots.iter().all(|x| *x == 0) {
                continue;
            }
            let coeffs: Vec<Rat> = slots.into_iter().map(|x| Rat::from_integer(x.into()) / &scale).collect();
            let c = CycNum::from_coeffs(coeffs)?;
            if c.is_zero() {
                continue;
            }
            out.add_term(&(Rat::from_integer(qn.into()) / &qden), c);
        }
        Ok(out.normalize())
    }
}

/// `Theta_{a,b}^{c1,c2}[f]` up to `q^N`, exact.
pub fn holomorphic_expansion(spec: &ThetaSpec, n_order: &Rat) -> Result<QSeries> {
    holomorphic_expansion_with_budget(spec, n_order, DEFAULT_BUDGET)
}

/// As [`holomorphic_expansion`] with an explicit limit on the number of enumerated lattice points.
pub fn holomorphic_expansion_with_budget(spec: &ThetaSpec, n_order: &Rat, max_points: u64) -> Result<QSeries> {
    if n_order <= &Rat::zero() {
        return Err(Error::Domain("expansion order must be positive".into()));
    }
    let lat = IntLattice::new(spec)?;
    let mut acc = Accumulator::new(spec, &lat, n_order)?;
    let shift = lat.shift_f64();
    let nf = crate::rat::to_f64(n_order);
    for piece in pieces(spec)? {
        match piece {
            Piece::DoubleInterior { c1, c2, gram } => {
                let (a1, a2) = (lat.apply(&c1), lat.apply(&c2));
                let e = Ellipsoid::new(&gram)?;
                e.enumerate(&shift, nf, max_points, &mut |k| {
                    let l = lat.point(k);
                    let w = sgn(IntLattice::dot(&a1, &l)) - sgn(IntLattice::dot(&a2, &l));
                    if w == 0 {
                        return Ok(());
                    }
                    let qn = lat.q_num(&l);
                    if acc.below(qn) {
                        acc.add(&l, qn, w)?;
                    }
                    Ok(())
                })?;
            }
            Piece::Slab(sl) => {
                let (ai, ac) = (lat.apply(&sl.ci), lat.apply(&sl.cc));
                let step: Vec<i128> = sl.cc.iter().map(|&x| x as i128 * lat.da).collect();
                let dbeta = sl.beta * lat.da;
                let sign = if sl.negate { -1 } else { 1 };
                let e = Ellipsoid::new(&sl.gram)?;
                let mut walked = 0u64;
                e.enumerate(&shift, nf + sl.extra(), max_points, &mut |k| {
                    let mu = lat.point(k);
                    let bi = IntLattice::dot(&ai, &mu);
                    if !(dbeta < bi && bi <= 0) {
                        return Ok(());
                    }
                    let bc = IntLattice::dot(&ac, &mu);
                    if bc == 0 {
                        return check_boundary_line(spec, &[spec.f()], &lat, &mu, &sl.cc);
                    }
                    let dir: i128 = if bc > 0 { 1 } else { -1 };
                    let mut m: i128 = 0;
                    loop {
                        let l: Vec<i128> = mu.iter().zip(&step).map(|(x, s)| x + m * s).collect();
                        let qn = lat.q_num(&l);
                        if !acc.below(qn) {
                            break;
                        }
                        walked += 1;
                        if walked > max_points {
                            return Err(Error::EnumerationBound { points: max_points });
                        }
                        let w = sgn(IntLattice::dot(&ai, &l)) - sgn(IntLattice::dot(&ac, &l));
                        acc.add(&l, qn, sign * w)?;
                        m += dir;
                    }
                    Ok(())
                })?;
            }
        }
    }
    acc.finish(n_order)
}

/// On a line `mu + m cc` with `B(cc, mu) = 0` every listed polynomial must vanish identically.
pub(crate) fn check_boundary_line(
    spec: &ThetaSpec,
    polys: &[&HomPoly],
    lat: &IntLattice,
    mu: &[i128],
    cc: &[i64],
) -> Result<()> {
    if !spec.boundary_override() {
        return Err(Error::BoundaryContribution);
    }
    let base = lat.to_rat(mu);
    let dir: Vec<Rat> = cc.iter().map(|&x| Rat::from_integer(x.into())).collect();
    for p in polys {
        if p.along_line(&base, &dir).iter().any(|c| !c.is_zero()) {
            return Err(Error::BoundaryContribution);
        }
    }
    Ok(())
}
