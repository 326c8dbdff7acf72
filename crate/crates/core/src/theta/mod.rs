//! Indefinite theta series: specifications, exact q-expansions, numerical
//! evaluation of the completions and the modular transformation laws.

mod enumerate;
mod eval;
mod expand;
mod lattice;
mod transform;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::poly::{hat, HatPoly, HomPoly};
use crate::qform::{characteristic_admissible, ConeVector, QuadraticForm};
use crate::rat::{lcm_denominators, Rat};

pub use enumerate::{choose_radius, shell_tail, symmetric_eigenvalues, Ellipsoid, LatticeInfo};
pub use eval::{almost_holo_eval, nonholo_eval, p_c_eval, EvalOptions};
pub use expand::{holomorphic_expansion, holomorphic_expansion_with_budget};
pub use transform::{
    coset_reps, limit_probe, transform, verify_exact, verify_modularity, LimitReport, ModularityReport, Move, TransformResult,
};

/// Characteristic vectors `a`, `b` of a theta series.
#[derive(Clone, Debug, PartialEq)]
pub struct Characteristics {
    a: Vec<Rat>,
    b: Vec<Rat>,
    denominator: BigInt,
}

impl Characteristics {
    pub fn new(a: Vec<Rat>, b: Vec<Rat>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
        }
        let denominator = lcm_denominators(a.iter().chain(b.iter()));
        Ok(Characteristics { a, b, denominator })
    }
    pub fn zero(n: usize) -> Self {
        Characteristics::new(vec![Rat::from_integer(0.into()); n], vec![Rat::from_integer(0.into()); n]).unwrap()
    }
    pub fn a(&self) -> &[Rat] {
        &self.a
    }
    pub fn b(&self) -> &[Rat] {
        &self.b
    }
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }
}

/// The data `(Q, f, c1, c2, a, b)` of a theta series.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaSpec {
    qf: QuadraticForm,
    c0: Vec<Rat>,
    f: HomPoly,
    fhat: HatPoly,
    c1: ConeVector,
    c2: ConeVector,
    chars: Characteristics,
    boundary_override: bool,
}

impl ThetaSpec {
    /// Validates dimensions, orientation and admissibility. With `boundary_override`
    /// an inadmissible cusp is accepted and the vanishing of the boundary terms is
    /// checked later by the evaluators.
    pub fn new(
        qf: QuadraticForm,
        c0: Vec<Rat>,
        f: HomPoly,
        c1: ConeVector,
        c2: ConeVector,
        chars: Characteristics,
        boundary_override: bool,
    ) -> Result<Self> {
        let n = qf.dim();
        for len in [c0.len(), f.dim(), c1.real().len(), c2.real().len(), chars.a.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        if !qf.q(&c0).is_negative() {
            return Err(Error::NotInterior);
        }
        let c0f: Vec<f64> = c0.iter().map(crate::rat::to_f64).collect();
        for c in [&c1, &c2] {
            let neg = match c.exact() {
                Some(e) => qf.b(e, &c0).is_negative(),
                None => qf.b_f64(c.real(), &c0f) < 0.0,
            };
            if !neg {
                return Err(Error::OppositeComponents);
            }
        }
        if !boundary_override {
            for c in [&c1, &c2] {
                if !characteristic_admissible(&qf, c, &chars.a) {
                    return Err(Error::InadmissibleCharacteristic);
                }
            }
        }
        let fhat = hat(&qf, &f)?;
        Ok(ThetaSpec { qf, c0, f, fhat, c1, c2, chars, boundary_override })
    }

    pub fn qf(&self) -> &QuadraticForm {
        &self.qf
    }
    pub fn anchor(&self) -> &[Rat] {
        &self.c0
    }
    pub fn f(&self) -> &HomPoly {
        &self.f
    }
    pub fn fhat(&self) -> &HatPoly {
        &self.fhat
    }
    pub fn c1(&self) -> &ConeVector {
        &self.c1
    }
    pub fn c2(&self) -> &ConeVector {
        &self.c2
    }
    pub fn chars(&self) -> &Characteristics {
        &self.chars
    }
    pub fn boundary_override(&self) -> bool {
        self.boundary_override
    }
    pub fn degree(&self) -> u32 {
        self.f.degree()
    }
    /// `n/2 + d`
    pub fn weight(&self) -> Rat {
        Rat::new((self.qf.dim() as i64 + 2 * self.f.degree() as i64).into(), 2.into())
    }
    /// `c1` and `c2` span the same ray, so the series vanishes.
    pub fn is_trivial(&self) -> bool {
        self.c1.same_ray(&self.c2)
    }
    /// Whether `f` is annihilated by the Laplacian of `Q`.
    pub fn is_spherical(&self) -> bool {
        self.fhat.layers().len() == 1
    }

    pub fn with_chars(&self, a: Vec<Rat>, b: Vec<Rat>) -> Result<Self> {
        ThetaSpec::new(
            self.qf.clone(),
            self.c0.clone(),
            self.f.clone(),
            self.c1.clone(),
            self.c2.clone(),
            Characteristics::new(a, b)?,
            self.boundary_override,
        )
    }

    pub fn with_cones(&self, c1: ConeVector, c2: ConeVector) -> Result<Self> {
        ThetaSpec::new(
            self.qf.clone(),
            self.c0.clone(),
            self.f.clone(),
            c1,
            c2,
            self.chars.clone(),
            self.boundary_override,
        )
    }

    pub fn with_override(&self, boundary_override: bool) -> Result<Self> {
        ThetaSpec::new(
            self.qf.clone(),
            self.c0.clone(),
            self.f.clone(),
            self.c1.clone(),
            self.c2.clone(),
            self.chars.clone(),
            boundary_override,
        )
    }
}
