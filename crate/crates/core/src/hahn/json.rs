//! JSON forms of fields, exponent groups and series.
//!
//! Rationals are written as JSON integers when integral and as `"a/b"`
//! strings otherwise; both forms are accepted on input.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{parse_rational, Field, FiniteField, GaloisField, Rationals};
use crate::intpoly::IntPoly;
use crate::realalg::AlgebraicReal;

use super::group::{Exponent, ExponentGroup, Weight};
use super::series::HahnSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rat(pub BigRational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.is_integer().then(|| self.0.to_integer().to_i64()).flatten() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string like \"-3/4\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
                Ok(Rat(BigRational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
                Ok(Rat(BigRational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
                parse_rational(v).map(Rat).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl From<BigRational> for Rat {
    fn from(q: BigRational) -> Self {
        Rat(q)
    }
}

/// `p = 0` selects the rationals; otherwise `F_{p^k}` with an optional
/// explicit modulus (ascending, monic).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default)]
    pub p: u64,
    #[serde(default = "one_u32")]
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

fn one_u32() -> u32 {
    1
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec { p: 0, k: 1, modulus: None }
    }

    pub fn finite(p: u64, k: u32) -> Self {
        FieldSpec { p, k, modulus: None }
    }

    pub fn build_finite(&self) -> Result<GaloisField> {
        if self.p == 0 {
            return Err(Error::CharacteristicZero);
        }
        match &self.modulus {
            Some(m) => {
                let f = GaloisField::with_modulus(self.p, m.clone())?;
                if f.degree() != self.k {
                    return Err(Error::Invalid(format!("modulus has degree {}, expected k = {}", f.degree(), self.k)));
                }
                Ok(f)
            }
            None => GaloisField::new(self.p, self.k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Rational(Rat),
    Algebraic { minpoly: Vec<i64>, interval: [Rat; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub weights: Vec<WeightSpec>,
    #[serde(default = "one_u64")]
    pub d: u64,
}

fn one_u64() -> u64 {
    1
}

impl Default for GroupSpec {
    fn default() -> Self {
        GroupSpec { weights: vec![WeightSpec::Rational(Rat(BigRational::from_integer(1.into())))], d: 1 }
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<Arc<ExponentGroup>> {
        let weights = self
            .weights
            .iter()
            .map(|w| match w {
                WeightSpec::Rational(q) => Ok(Weight::Rational(q.0.clone())),
                WeightSpec::Algebraic { minpoly, interval } => {
                    let a = AlgebraicReal::new(IntPoly::from_i64(minpoly), interval[0].0.clone(), interval[1].0.clone())?;
                    Ok(Weight::Algebraic(Arc::new(a)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        ExponentGroup::new(weights, self.d)
    }
}

/// Terms and precision of a series whose field and group come from context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermsSpec {
    #[serde(default)]
    pub terms: Vec<(Vec<Rat>, Rat)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<Vec<Rat>>,
}

/// Self-contained series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub field: FieldSpec,
    pub group: GroupSpec,
    #[serde(flatten)]
    pub body: TermsSpec,
}

/// Coefficient conversion for the fields that have a JSON form.
pub trait JsonField: Field {
    fn parse_coeff(&self, c: &Rat) -> Result<Self::Elem>;
    fn coeff_json(&self, c: &Self::Elem) -> Rat;
}

impl JsonField for Rationals {
    fn parse_coeff(&self, c: &Rat) -> Result<BigRational> {
        Ok(c.0.clone())
    }
    fn coeff_json(&self, c: &BigRational) -> Rat {
        Rat(c.clone())
    }
}

impl JsonField for GaloisField {
    /// The packed index `Σ a_i p^i`; in degree one any integer is reduced mod `p`.
    fn parse_coeff(&self, c: &Rat) -> Result<Vec<u64>> {
        if !c.0.is_integer() {
            return Err(Error::Invalid(format!("finite-field coefficient must be an integer, got {}", c.0)));
        }
        let n = c.0.to_integer();
        if self.degree() == 1 {
            let p = BigInt::from(self.characteristic());
            let r = ((n % &p) + &p) % &p;
            return Ok(self.element(r.to_u64().expect("residue fits")));
        }
        match n.to_u64().filter(|&i| i < self.order()) {
            Some(i) => Ok(self.element(i)),
            None => Err(Error::Invalid(format!("coefficient {n} is not an element index below {}", self.order()))),
        }
    }
    fn coeff_json(&self, c: &Vec<u64>) -> Rat {
        Rat(BigRational::from_integer(self.index_of(c).into()))
    }
}

pub fn exponent_from(group: &ExponentGroup, coords: &[Rat]) -> Result<Exponent> {
    group.exponent(coords.iter().map(|c| c.0.clone()).collect())
}

pub fn exponent_json(e: &Exponent) -> Vec<Rat> {
    e.coords().iter().cloned().map(Rat).collect()
}

pub fn series_from<F: JsonField>(field: &F, group: &Arc<ExponentGroup>, spec: &TermsSpec) -> Result<HahnSeries<F>> {
    let terms = spec
        .terms
        .iter()
        .map(|(e, c)| Ok((exponent_from(group, e)?, field.parse_coeff(c)?)))
        .collect::<Result<Vec<_>>>()?;
    let precision = spec.precision.as_deref().map(|p| exponent_from(group, p)).transpose()?;
    HahnSeries::new(field.clone(), group.clone(), terms, precision)
}

pub fn series_json<F: JsonField>(a: &HahnSeries<F>) -> TermsSpec {
    TermsSpec {
        terms: a.terms().iter().map(|(e, c)| (exponent_json(e), a.field().coeff_json(c))).collect(),
        precision: a.precision().map(exponent_json),
    }
}

/// A series over either supported coefficient field.
#[derive(Debug, Clone)]
pub enum AnySeries {
    Rational(HahnSeries<Rationals>),
    Finite(HahnSeries<GaloisField>),
}

impl AnySeries {
    pub fn from_spec(spec: &SeriesSpec) -> Result<Self> {
        let group = spec.group.build()?;
        if spec.field.p == 0 {
            Ok(AnySeries::Rational(series_from(&Rationals, &group, &spec.body)?))
        } else {
            let f = spec.field.build_finite()?;
            Ok(AnySeries::Finite(series_from(&f, &group, &spec.body)?))
        }
    }

    pub fn body(&self) -> TermsSpec {
        match self {
            AnySeries::Rational(a) => series_json(a),
            AnySeries::Finite(a) => series_json(a),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AnySeries::Rational(a) => a.is_zero(),
            AnySeries::Finite(a) => a.is_zero(),
        }
    }
}
