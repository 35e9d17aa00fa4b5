//! Linear varieties of dimension two through a point with real periods.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mpf::Mpf;
use crate::path::IntegrationPath;
use crate::periods::period_vector;
use crate::scalar::{mpf_to_rational, recognize_rational, ComplexExt, Real, Scalar};
use crate::strata::{residues, DiffConfig};

use super::linear::LinearVarietySpec;

/// Largest denominator accepted for a residue ratio.
pub const MAX_RATIO_DENOMINATOR: u64 = 1_000_000;
/// Imaginary parts of normalized periods below this count as zero.
pub const REALITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct TeichmuellerCurve {
    pub spec: LinearVarietySpec,
    /// Factor `t` with `2πi·R_n = 1` after `λ ↦ t·λ`.
    pub lambda_scale: Complex<f64>,
    /// Normalized relative periods `∫_{x_0}^{x_i} ω / (2πi R_n)`.
    pub normalized_periods: Vec<f64>,
    /// `dim St − codim S_M`.
    pub dimension: usize,
}

/// The variety cut out by `∫_{x_0}^{x_i} ω + p_i·2πi R_n = 0` for
/// `i = 1..m−1` (with `p_i = −∫_{x_0}^{x_i} ω` once `2πi R_n = 1`) and by the
/// residue ratios of `cfg`. The periods are taken along `paths` at the
/// working precision.
pub fn teichmueller_curve_from_point<S: Scalar>(
    cfg: &DiffConfig<S>,
    paths: &[IntegrationPath<Mpf>],
) -> Result<TeichmuellerCurve> {
    if !cfg.signature.is_simple_pole() {
        return Err(Error::NotSimplePole);
    }
    if !cfg.is_canonical() {
        return Err(Error::NotCanonical("the construction uses canonical coordinates".into()));
    }
    let m = cfg.signature.m();
    let res: Vec<Complex<Mpf>> = residues(cfg)?.finite.iter().map(|r| r.to_complex()).collect();
    let n = res.len() - 1;
    let tol = Mpf::pow2(-(Mpf::precision_bits() as i64) / 2);
    let mut q = Vec::with_capacity(n);
    for (j, r) in res.iter().enumerate().skip(1) {
        let ratio = r.clone() / res[0].clone();
        let scale = ComplexExt::abs(&ratio).max_of(Mpf::from_i64(1));
        let recognized = if ratio.im.clone().abs() <= tol.clone() * scale.clone() {
            recognize_rational(&ratio.re, MAX_RATIO_DENOMINATOR, &(tol.clone() * scale))
        } else {
            None
        };
        match recognized {
            Some(v) => q.push(v),
            None => {
                return Err(Error::NonRationalResidueRatios(format!("R_{j}/R_0 ≈ {:.6e}", ratio.re.to_f64())));
            }
        }
    }
    let tpi = <Complex<Mpf> as ComplexExt<Mpf>>::two_pi_i();
    let scale = Complex::new(Mpf::from_i64(1), Mpf::from_i64(0)) / (tpi * res[n].clone());
    let phi = period_vector(cfg, paths)?;
    let mut normalized = Vec::with_capacity(m);
    for (i, p) in phi.relative.iter().enumerate() {
        let v = p.clone() * scale.clone();
        let bound = Mpf::from_f64(REALITY_TOLERANCE) * ComplexExt::abs(&v).max_of(Mpf::from_i64(1));
        if v.im.clone().abs() > bound {
            return Err(Error::NonRealPeriods(format!(
                "normalized period {} has imaginary part {:.3e}",
                i + 1,
                v.im.to_f64()
            )));
        }
        normalized.push(v.re);
    }
    let k = m.saturating_sub(1);
    let a: Vec<Vec<BigRational>> = (0..k)
        .map(|i| (0..m).map(|c| if c == i { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let b = (0..k)
        .map(|i| {
            let mut row = vec![Complex::new(BigRational::zero(), BigRational::zero()); n + 1];
            row[n] = Complex::new(-mpf_to_rational(&normalized[i]), BigRational::zero());
            row
        })
        .collect();
    let spec = LinearVarietySpec::new(a, b, q)?;
    let dimension = cfg.signature.dimension() - spec.codimension();
    Ok(TeichmuellerCurve {
        spec,
        lambda_scale: Complex::new(scale.re.to_f64(), scale.im.to_f64()),
        normalized_periods: normalized.iter().map(|v| v.to_f64()).collect(),
        dimension,
    })
}
