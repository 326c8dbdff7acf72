//! JSON schema for theta specs, shared by the command line tool and the browser demo.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{GaussRat, HomPoly};
use crate::qform::{classify_real, classify_vector, ConeKind, ConeVector, QuadraticForm};
use crate::rat::{fmt_rat, parse_rat, Rat};
use crate::theta::{Characteristics, ThetaSpec};

/// A rational entry, written as a JSON integer or as a string `"p/q"`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatJson(pub String);

impl Serialize for RatJson {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.parse::<i64>() {
            Ok(n) => s.serialize_i64(n),
            Err(_) => s.serialize_str(&self.0),
        }
    }
}

impl<'de> Deserialize<'de> for RatJson {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Int(n) => RatJson(n.to_string()),
            Raw::Str(s) => RatJson(s),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coeff: RatJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_im: Option<RatJson>,
}

/// A cone parameter: either an exact rational vector, or floating entries
/// with an optional rational vector on the same ray.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConeJson {
    Exact(Vec<RatJson>),
    Real {
        real: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rational: Option<Vec<RatJson>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecJson {
    pub matrix: Vec<Vec<i64>>,
    pub anchor: Vec<RatJson>,
    pub polynomial: Vec<TermJson>,
    pub c1: ConeJson,
    pub c2: ConeJson,
    pub a: Vec<RatJson>,
    pub b: Vec<RatJson>,
    #[serde(default)]
    pub boundary_override: bool,
}

fn parse_vec(v: &[RatJson]) -> Result<Vec<Rat>> {
    v.iter().map(|s| parse_rat(&s.0)).collect()
}

fn fmt_vec(v: &[Rat]) -> Vec<RatJson> {
    v.iter().map(|r| RatJson(fmt_rat(r))).collect()
}

fn cone_from(qf: &QuadraticForm, c0: &[Rat], c: &ConeJson) -> Result<ConeVector> {
    match c {
        ConeJson::Exact(v) => classify_vector(qf, c0, &parse_vec(v)?).ok_or(Error::NotInCone),
        ConeJson::Real { real, rational } => {
            let r = rational.as_ref().map(|r| parse_vec(r)).transpose()?;
            classify_real(qf, c0, real, r.as_deref()).ok_or(Error::NotInCone)
        }
    }
}

fn cone_to(c: &ConeVector) -> ConeJson {
    match (c.kind(), c.exact()) {
        (ConeKind::Cusp, Some(e)) => ConeJson::Exact(fmt_vec(e)),
        (_, e) => {
            let exactly_real = e.is_some_and(|e| e.iter().map(crate::rat::to_f64).eq(c.real().iter().copied()));
            if exactly_real {
                ConeJson::Exact(fmt_vec(e.unwrap()))
            } else {
                ConeJson::Real { real: c.real().to_vec(), rational: e.map(fmt_vec) }
            }
        }
    }
}

impl SpecJson {
    pub fn to_spec(&self) -> Result<ThetaSpec> {
        let qf = QuadraticForm::new(self.matrix.clone())?;
        let n = qf.dim();
        let c0 = parse_vec(&self.anchor)?;
        let d = match self.polynomial.first() {
            Some(t) => t.exponents.iter().sum(),
            None => 0,
        };
        let mut terms = Vec::new();
        for t in &self.polynomial {
            let im = match &t.coeff_im {
                Some(s) => parse_rat(&s.0)?,
                None => Rat::from_integer(0.into()),
            };
            terms.push((t.exponents.clone(), GaussRat::new(parse_rat(&t.coeff.0)?, im)));
        }
        let f = HomPoly::from_terms(n, d, terms)?;
        let c1 = cone_from(&qf, &c0, &self.c1)?;
        let c2 = cone_from(&qf, &c0, &self.c2)?;
        let chars = Characteristics::new(parse_vec(&self.a)?, parse_vec(&self.b)?)?;
        ThetaSpec::new(qf, c0, f, c1, c2, chars, self.boundary_override)
    }

    pub fn from_spec(s: &ThetaSpec) -> Self {
        let polynomial = s
            .f()
            .terms()
            .map(|(e, c)| TermJson {
                exponents: e.clone(),
                coeff: RatJson(fmt_rat(&c.re)),
                coeff_im: (!num_traits::Zero::is_zero(&c.im)).then(|| RatJson(fmt_rat(&c.im))),
            })
            .collect();
        SpecJson {
            matrix: s.qf().matrix().to_vec(),
            anchor: fmt_vec(s.anchor()),
            polynomial,
            c1: cone_to(s.c1()),
            c2: cone_to(s.c2()),
            a: fmt_vec(s.chars().a()),
            b: fmt_vec(s.chars().b()),
            boundary_override: s.boundary_override(),
        }
    }
}

pub fn spec_from_json(s: &str) -> Result<ThetaSpec> {
    let j: SpecJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_spec()
}

pub fn spec_to_json(s: &ThetaSpec) -> String {
    serde_json::to_string_pretty(&SpecJson::from_spec(s)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{eisenstein, hurwitz};
    use crate::rat::rat;

    #[test]
    fn round_trips() {
        let e = eisenstein::eisenstein_spec(4, vec![rat(1, 5), rat(1, 5)], vec![rat(1, 5), rat(1, 5)]).unwrap();
        let h = hurwitz::hurwitz_theta_spec();
        for s in [e, h] {
            let j = spec_to_json(&s);
            let back = spec_from_json(&j).unwrap();
            assert_eq!(spec_to_json(&back), j);
            assert_eq!(back.f(), s.f());
            assert_eq!(back.c2().real(), s.c2().real());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(spec_from_json("{"), Err(Error::Parse(_))));
        assert!(spec_from_json(r#"{"matrix":[[0,1],[1,0]]}"#).is_err());
    }

    #[test]
    fn integers_as_numbers() {
        let j = r#"{"matrix":[[0,1],[1,0]],"anchor":[-1,1],"polynomial":[{"exponents":[1,0],"coeff":1}],
            "c1":[0,1],"c2":[-1,"0"],"a":["1/5","2/7"],"b":["1/3","0.2"]}"#;
        let s = spec_from_json(j).unwrap();
        assert_eq!(s.chars().b()[1], rat(1, 5));
        assert!(spec_to_json(&s).contains("\"anchor\": [\n    -1,"));
    }
}
