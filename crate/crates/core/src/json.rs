//! JSON schemas for configurations, paths, covers, linear varieties and the
//! results of every operation. Inputs are exact: rationals are written as
//! `"p/q"`, integers or decimals; complex numbers as `{"re": .., "im": ..}`
//! or as a bare real. Floating-point outputs are decimal strings at the
//! working precision.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bialg::RankVerdict;
use crate::error::{Error, Result};
use crate::mpf::Mpf;
use crate::path::{DetourPolicy, IntegrationPath};
use crate::periods::default_paths;
use crate::poly::Poly;
use crate::scalar::{parse_rational, GaussRat, Real, Scalar};
use crate::strata::{validate_signature, DiffConfig, Normalization};
use crate::torus::AffineLattice;
use crate::varieties::cover::CoverSpec;
use crate::varieties::linear::{AlgebraicEquation, LinearVarietySpec};

/// Parses `text`, reporting syntax and schema errors with line and column.
pub fn from_json_str<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m);
        Error::InvalidInput(format!("line {}, column {}: {message}", e.line(), e.column()))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalJson {
    Text(String),
    Number(serde_json::Number),
}

impl RationalJson {
    pub fn to_rational(&self) -> Result<BigRational> {
        let s = match self {
            RationalJson::Text(s) => s.clone(),
            RationalJson::Number(n) => n.to_string(),
        };
        parse_rational(&s).ok_or_else(|| Error::InvalidInput(format!("not a rational number: {s:?}")))
    }
}

impl From<&BigRational> for RationalJson {
    fn from(q: &BigRational) -> Self {
        RationalJson::Text(rational_string(q))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexJson {
    Parts {
        re: RationalJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im: Option<RationalJson>,
    },
    Real(RationalJson),
}

impl ComplexJson {
    pub fn to_gauss(&self) -> Result<GaussRat> {
        match self {
            ComplexJson::Parts { re, im } => Ok(Complex::new(
                re.to_rational()?,
                im.as_ref().map(|v| v.to_rational()).transpose()?.unwrap_or_else(BigRational::zero),
            )),
            ComplexJson::Real(re) => Ok(Complex::new(re.to_rational()?, BigRational::zero())),
        }
    }
}

impl From<&GaussRat> for ComplexJson {
    fn from(z: &GaussRat) -> Self {
        if z.im.is_zero() {
            ComplexJson::Real((&z.re).into())
        } else {
            ComplexJson::Parts { re: (&z.re).into(), im: Some((&z.im).into()) }
        }
    }
}

fn gauss_list(v: &[ComplexJson]) -> Result<Vec<GaussRat>> {
    v.iter().map(|z| z.to_gauss()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NormalizationJson {
    Canonical,
    #[default]
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DetourJson {
    #[default]
    Ccw,
    Cw,
    Forbid,
}

/// A polyline from `x_0` to `x_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathJson {
    pub waypoints: Vec<ComplexJson>,
    #[serde(default)]
    pub detour: DetourJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigJson {
    pub mu: Vec<i64>,
    pub lambda: ComplexJson,
    pub zeros: Vec<ComplexJson>,
    pub poles: Vec<ComplexJson>,
    #[serde(default)]
    pub normalization: NormalizationJson,
    /// One path per relative period; straight segments when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<PathJson>>,
}

impl ConfigJson {
    pub fn to_config(&self) -> Result<DiffConfig<GaussRat>> {
        let sig = validate_signature(&self.mu)?;
        let norm = match self.normalization {
            NormalizationJson::Canonical => Normalization::Canonical,
            NormalizationJson::Free => Normalization::Free,
        };
        DiffConfig::new(sig, self.lambda.to_gauss()?, gauss_list(&self.zeros)?, gauss_list(&self.poles)?, norm)
    }

    /// The explicit paths, or the default straight segments.
    pub fn paths<R: Real>(&self, cfg: &DiffConfig<GaussRat>) -> Result<Vec<IntegrationPath<R>>> {
        let Some(paths) = &self.paths else { return Ok(default_paths(cfg)) };
        paths
            .iter()
            .map(|p| {
                let pts = gauss_list(&p.waypoints)?.iter().map(|z| z.to_complex::<R>()).collect::<Vec<_>>();
                if pts.len() < 2 {
                    return Err(Error::InvalidInput("a path needs at least two waypoints".into()));
                }
                let detour = match p.detour {
                    DetourJson::Ccw => DetourPolicy::Ccw,
                    DetourJson::Cw => DetourPolicy::Cw,
                    DetourJson::Forbid => DetourPolicy::Forbid,
                };
                Ok(IntegrationPath::new(pts).with_detour(detour))
            })
            .collect()
    }

    pub fn from_config(cfg: &DiffConfig<GaussRat>) -> Self {
        ConfigJson {
            mu: cfg.signature.orders().to_vec(),
            lambda: (&cfg.lambda).into(),
            zeros: cfg.zeros.iter().map(Into::into).collect(),
            poles: cfg.poles.iter().map(Into::into).collect(),
            normalization: match cfg.normalization {
                Normalization::Canonical => NormalizationJson::Canonical,
                Normalization::Free => NormalizationJson::Free,
            },
            paths: None,
        }
    }
}

/// A rational map by ascending coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverJson {
    pub numerator: Vec<ComplexJson>,
    #[serde(default = "one_poly")]
    pub denominator: Vec<ComplexJson>,
}

fn one_poly() -> Vec<ComplexJson> {
    vec![ComplexJson::Real(RationalJson::Number(1.into()))]
}

impl CoverJson {
    pub fn polys(&self) -> Result<(Poly<GaussRat>, Poly<GaussRat>)> {
        Ok((Poly::new(gauss_list(&self.numerator)?), Poly::new(gauss_list(&self.denominator)?)))
    }

    pub fn to_cover(&self) -> Result<CoverSpec> {
        let (n, d) = self.polys()?;
        if d.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        CoverSpec::new(n, d)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearVarietySpecJson {
    #[serde(rename = "A")]
    pub a: Vec<Vec<RationalJson>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<ComplexJson>>,
    pub q: Vec<RationalJson>,
}

impl LinearVarietySpecJson {
    pub fn to_spec(&self) -> Result<LinearVarietySpec> {
        let a = self
            .a
            .iter()
            .map(|r| r.iter().map(|x| x.to_rational()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let b = self.b.iter().map(|r| gauss_list(r)).collect::<Result<Vec<_>>>()?;
        let q = self.q.iter().map(|x| x.to_rational()).collect::<Result<Vec<_>>>()?;
        LinearVarietySpec::new(a, b, q)
    }

    pub fn from_spec(spec: &LinearVarietySpec) -> Self {
        LinearVarietySpecJson {
            a: spec.a.iter().map(|r| r.iter().map(Into::into).collect()).collect(),
            b: spec.b.iter().map(|r| r.iter().map(Into::into).collect()).collect(),
            q: spec.q.iter().map(Into::into).collect(),
        }
    }
}

/// An affine lattice by integer basis rows; the offset defaults to zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub k: usize,
    pub basis: Vec<Vec<i64>>,
}

impl LatticeJson {
    pub fn to_lattice(&self) -> Result<AffineLattice> {
        let basis = self.basis.iter().map(|r| r.iter().map(|&a| BigInt::from(a)).collect()).collect();
        AffineLattice::from_basis(self.k, basis)
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A bare rational string for real values, `{"re", "im"}` otherwise.
pub fn gauss_value(z: &GaussRat) -> Value {
    if z.im.is_zero() {
        Value::String(rational_string(&z.re))
    } else {
        json!({"re": rational_string(&z.re), "im": rational_string(&z.im)})
    }
}

pub fn decimal_value<R: Real>(x: &R) -> Value {
    Value::String(x.to_decimal_string())
}

pub fn complex_value<R: Real>(z: &Complex<R>) -> Value {
    json!({"re": z.re.to_decimal_string(), "im": z.im.to_decimal_string()})
}

pub fn complex_list<R: Real>(v: &[Complex<R>]) -> Value {
    Value::Array(v.iter().map(complex_value).collect())
}

pub fn bigint_value(a: &BigInt) -> Value {
    match a.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(a.to_string()),
    }
}

pub fn integer_rows(rows: &[Vec<BigInt>]) -> Value {
    Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(bigint_value).collect())).collect())
}

pub fn lattice_value(l: &AffineLattice) -> Value {
    json!({"k": l.k, "basis": integer_rows(&l.basis)})
}

pub fn numeric_config_value(cfg: &DiffConfig<Complex<Mpf>>) -> Value {
    json!({
        "mu": cfg.signature.orders(),
        "lambda": complex_value(&cfg.lambda),
        "zeros": complex_list(&cfg.zeros),
        "poles": complex_list(&cfg.poles),
        "normalization": match cfg.normalization {
            Normalization::Canonical => "canonical",
            Normalization::Free => "free",
        },
    })
}

pub fn equation_value(eq: &AlgebraicEquation) -> Value {
    let c = match eq.c_exact() {
        Some(c) => gauss_value(&c),
        None => complex_value(&eq.c::<Mpf>()),
    };
    json!({"c": c, "exponents": integer_rows(&eq.exponents), "turns": gauss_value(&eq.turns)})
}

pub fn verdict_value(v: &RankVerdict) -> Value {
    json!({
        "dim_S": v.dim_s,
        "dim_ASV": v.dim_asv,
        "fib": v.fib,
        "verdict": v.verdict,
        "heuristic": v.heuristic,
        "inequalities_hold": v.inequalities_hold,
        "per_sample": v.per_sample.iter().map(|s| json!({"dim_S": s.dim_s, "dim_ASV": s.dim_asv, "fib": s.fib})).collect::<Vec<_>>(),
        "lattice": lattice_value(&v.lattice),
    })
}
