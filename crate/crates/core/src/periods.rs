//! Relative periods `∫_{x_0}^{x_j} ω` and residues `2πi R_k`, in closed form
//! (algebraic part plus branch-tracked logarithms) and by quadrature.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::path::{tracked_log, winding_offset, IntegrationPath, ResolvedPath};
use crate::quadrature::integrate_path;
use crate::ratfunc::PartialFractionForm;
use crate::scalar::{ComplexExt, Real, Scalar};
use crate::strata::{config_partial_fractions, DiffConfig};

/// Period coordinates `(∫_{x_0}^{x_1} ω, ..., ∫_{x_0}^{x_m} ω, 2πi R_0, ..., 2πi R_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodVector<R> {
    pub relative: Vec<Complex<R>>,
    pub scaled_residues: Vec<Complex<R>>,
    /// `branch_data[j][k]`: integer `w` with tracked log of `y_k` along the
    /// `j`-th path equal to the principal value plus `2πi·w`.
    pub branch_data: Vec<Vec<i64>>,
}

impl<R: Real> PeriodVector<R> {
    pub fn coordinates(&self) -> Vec<Complex<R>> {
        self.relative.iter().chain(&self.scaled_residues).cloned().collect()
    }
}

/// `G(z) = ∫Q + Σ_i Σ_{j≥2} a_ij / ((1 − j)(z − y_i)^{j−1})`, the rational
/// part of an antiderivative.
fn rational_antiderivative<S: Scalar>(pf: &PartialFractionForm<S>, z: &S) -> S {
    let mut g = pf.polynomial_part.integral().eval(z);
    for (y, coeffs) in &pf.pole_terms {
        let d = z.clone() - y.clone();
        let mut power = S::one();
        for (jm1, a) in coeffs.iter().enumerate() {
            let j = jm1 + 1;
            if j >= 2 {
                power = power * d.clone();
                g = g + a.clone() / (S::from_i64(1 - j as i64) * power.clone());
            }
        }
    }
    g
}

/// `F^alg_j = G(x_j) − G(x_0)` for `j = 1..m`.
pub fn algebraic_period_part<S: Scalar>(cfg: &DiffConfig<S>) -> Result<Vec<S>> {
    let pf = config_partial_fractions(cfg)?;
    Ok(algebraic_part_from(&pf, &cfg.zeros))
}

fn algebraic_part_from<S: Scalar>(pf: &PartialFractionForm<S>, zeros: &[S]) -> Vec<S> {
    if zeros.len() < 2 {
        return Vec::new();
    }
    let g0 = rational_antiderivative(pf, &zeros[0]);
    zeros[1..]
        .iter()
        .map(|x| rational_antiderivative(pf, x) - g0.clone())
        .collect()
}

fn check_endpoints<R: Real>(path: &ResolvedPath<R>, from: &Complex<R>, to: &Complex<R>) -> Result<()> {
    let tol = R::epsilon().sqrt();
    let close = |a: &Complex<R>, b: &Complex<R>| {
        let scale = ComplexExt::abs(b).max_of(R::one());
        ComplexExt::abs(&(a.clone() - b.clone())) <= tol.clone() * scale
    };
    match (path.start(), path.end()) {
        (Some(s), Some(e)) if close(&s, from) && close(&e, to) => Ok(()),
        _ => Err(Error::InvalidInput("path does not run from x_0 to x_j".into())),
    }
}

/// Numerical locations of the finite poles.
pub fn pole_points<S: Scalar, R: Real>(cfg: &DiffConfig<S>) -> Vec<Complex<R>> {
    cfg.poles.iter().map(|y| y.to_complex()).collect()
}

/// Straight path from `x_0` to `x_j` with the default detour policy.
pub fn default_path<S: Scalar, R: Real>(cfg: &DiffConfig<S>, j: usize) -> IntegrationPath<R> {
    IntegrationPath::straight(cfg.zeros[0].to_complex(), cfg.zeros[j].to_complex())
}

pub fn default_paths<S: Scalar, R: Real>(cfg: &DiffConfig<S>) -> Vec<IntegrationPath<R>> {
    (1..cfg.zeros.len()).map(|j| default_path(cfg, j)).collect()
}

/// Moves the first and last waypoints to `x_0` and `x_j` of `cfg`.
pub fn retarget<S: Scalar, R: Real>(path: &IntegrationPath<R>, cfg: &DiffConfig<S>, j: usize) -> IntegrationPath<R> {
    let mut p = path.clone();
    let last = p.waypoints.len() - 1;
    p.waypoints[0] = cfg.zeros[0].to_complex();
    p.waypoints[last] = cfg.zeros[j].to_complex();
    p
}

/// Tracked logs `log(x_j − y_k) − log(x_0 − y_k)` along `path` for every pole.
pub fn tracked_pole_logs<S: Scalar, R: Real>(
    cfg: &DiffConfig<S>,
    j: usize,
    path: &IntegrationPath<R>,
) -> Result<(Vec<Complex<R>>, Vec<i64>)> {
    let poles = pole_points::<S, R>(cfg);
    let resolved = path.resolve(&poles)?;
    check_endpoints(&resolved, &cfg.zeros[0].to_complex(), &cfg.zeros[j].to_complex())?;
    let mut logs = Vec::with_capacity(poles.len());
    let mut winding = Vec::with_capacity(poles.len());
    for y in &poles {
        let l = tracked_log(y, &resolved)?;
        winding.push(winding_offset(y, &resolved, &l));
        logs.push(l);
    }
    Ok((logs, winding))
}

/// `F^alg_j + Σ_k R_k·(tracked log of y_k)`, the closed form of `∫_{x_0}^{x_j} ω`.
pub fn closed_form_period<S: Scalar, R: Real>(
    cfg: &DiffConfig<S>,
    j: usize,
    path: &IntegrationPath<R>,
) -> Result<Complex<R>> {
    if j == 0 || j >= cfg.zeros.len() {
        return Err(Error::InvalidInput(format!("zero index {j} out of range")));
    }
    let pf = config_partial_fractions(cfg)?;
    let falg = algebraic_part_from(&pf, &cfg.zeros);
    let (logs, _) = tracked_pole_logs(cfg, j, path)?;
    Ok(combine(&falg[j - 1], &pf.residues(), &logs))
}

fn combine<S: Scalar, R: Real>(falg: &S, residues: &[S], logs: &[Complex<R>]) -> Complex<R> {
    residues
        .iter()
        .zip(logs)
        .fold(falg.to_complex::<R>(), |acc, (r, l)| acc + r.to_complex::<R>() * l.clone())
}

/// `∫_path ω` in closed form between arbitrary endpoints: the rational part
/// of the antiderivative plus residues times logs tracked along the path.
pub fn closed_form_integral<S: Scalar, R: Real>(cfg: &DiffConfig<S>, path: &IntegrationPath<R>) -> Result<Complex<R>> {
    let pf = config_partial_fractions(cfg)?.map(|a| a.to_complex::<R>());
    let poles = pole_points::<S, R>(cfg);
    let resolved = path.resolve(&poles)?;
    let (Some(a), Some(b)) = (resolved.start(), resolved.end()) else {
        return Err(Error::InvalidInput("empty path".into()));
    };
    let mut total = rational_antiderivative(&pf, &b) - rational_antiderivative(&pf, &a);
    for (y, r) in poles.iter().zip(pf.residues()) {
        total = total + r * tracked_log(y, &resolved)?;
    }
    Ok(total)
}

/// `ω/dz` evaluated in product form.
pub fn omega_at<R: Real>(cfg: &DiffConfig<Complex<R>>, z: &Complex<R>) -> Result<Complex<R>> {
    let mut v = cfg.lambda.clone();
    for (x, e) in cfg.zero_factors() {
        let d = z.clone() - x;
        for _ in 0..e {
            v = v * d.clone();
        }
    }
    for (y, e) in cfg.pole_factors() {
        let d = z.clone() - y;
        if d.is_zero() {
            return Err(Error::PoleEvaluation);
        }
        for _ in 0..e {
            v = v / d.clone();
        }
    }
    Ok(v)
}

/// Numerical `∫_path ω` to absolute error `tol`.
pub fn quadrature_period<S: Scalar, R: Real>(
    cfg: &DiffConfig<S>,
    path: &IntegrationPath<R>,
    tol: &R,
) -> Result<Complex<R>> {
    let num = cfg.to_numeric::<R>();
    let resolved = path.resolve(&pole_points::<S, R>(cfg))?;
    integrate_path(|z| omega_at(&num, z), &resolved, tol)
}

/// Full period vector, one path per relative period.
pub fn period_vector<S: Scalar, R: Real>(
    cfg: &DiffConfig<S>,
    paths: &[IntegrationPath<R>],
) -> Result<PeriodVector<R>> {
    let m = cfg.signature.m();
    if paths.len() != m {
        return Err(Error::ShapeMismatch(format!("{m} relative periods need {m} paths, got {}", paths.len())));
    }
    let pf = config_partial_fractions(cfg)?;
    let falg = algebraic_part_from(&pf, &cfg.zeros);
    let residues = pf.residues();
    let mut relative = Vec::with_capacity(m);
    let mut branch_data = Vec::with_capacity(m);
    for (j, path) in paths.iter().enumerate() {
        let (logs, winding) = tracked_pole_logs(cfg, j + 1, path)?;
        relative.push(combine(&falg[j], &residues, &logs));
        branch_data.push(winding);
    }
    let tpi = <Complex<R> as ComplexExt<R>>::two_pi_i();
    let scaled_residues = residues.iter().map(|r| tpi.clone() * r.to_complex::<R>()).collect();
    Ok(PeriodVector { relative, scaled_residues, branch_data })
}

/// Free parameters of a canonical configuration: `(λ, x_1..x_m, y_1..y_n)`.
pub fn canonical_parameters<S: Scalar>(cfg: &DiffConfig<S>) -> Vec<S> {
    let mut p = vec![cfg.lambda.clone()];
    p.extend(cfg.zeros[1..].iter().cloned());
    p.extend(cfg.poles[1..].iter().cloned());
    p
}

pub fn with_canonical_parameters<S: Scalar>(cfg: &DiffConfig<S>, p: &[S]) -> DiffConfig<S> {
    let m = cfg.zeros.len() - 1;
    let mut out = cfg.clone();
    out.lambda = p[0].clone();
    out.zeros[1..].clone_from_slice(&p[1..=m]);
    out.poles[1..].clone_from_slice(&p[m + 1..]);
    out
}

/// Central finite-difference derivative of `f` at `p` in every parameter.
/// Returns the Jacobian (rows = outputs) and the largest discrepancy between
/// step `h` and step `h/2`.
pub fn finite_difference_jacobian<R: Real, F>(f: F, p: &[Complex<R>], h: &R) -> Result<(Vec<Vec<Complex<R>>>, R)>
where
    F: Fn(&[Complex<R>]) -> Result<Vec<Complex<R>>>,
{
    let two = R::from_i64(2);
    let mut cols = Vec::with_capacity(p.len());
    let mut discrepancy = R::zero();
    for k in 0..p.len() {
        let diff = |step: &R| -> Result<Vec<Complex<R>>> {
            let mut plus = p.to_vec();
            let mut minus = p.to_vec();
            plus[k] = plus[k].clone() + Complex::new(step.clone(), R::zero());
            minus[k] = minus[k].clone() - Complex::new(step.clone(), R::zero());
            let (a, b) = (f(&plus)?, f(&minus)?);
            let denom = step.clone() * two.clone();
            Ok(a.into_iter().zip(b).map(|(x, y)| (x - y).unscale_by(&denom)).collect())
        };
        let d1 = diff(h)?;
        let d2 = diff(&(h.clone() / two.clone()))?;
        for (x, y) in d1.iter().zip(&d2) {
            let scale = ComplexExt::abs(y).max_of(R::one());
            discrepancy = discrepancy.max_of(ComplexExt::abs(&(x.clone() - y.clone())) / scale);
        }
        cols.push(d2);
    }
    Ok((crate::linalg::transpose(&cols), discrepancy))
}

trait Unscale<R> {
    fn unscale_by(&self, s: &R) -> Self;
}

impl<R: Real> Unscale<R> for Complex<R> {
    fn unscale_by(&self, s: &R) -> Self {
        Complex::new(self.re.clone() / s.clone(), self.im.clone() / s.clone())
    }
}

/// Default finite-difference step for the working precision: `2^{−bits/3}`.
pub fn default_step<R: Real>() -> R {
    let bits = R::precision_bits() as i32;
    R::from_mpf(&crate::mpf::Mpf::pow2(-(bits as i64) / 3))
}

/// Jacobian of the period vector with respect to the canonical parameters.
pub fn period_jacobian<R: Real>(
    cfg: &DiffConfig<Complex<R>>,
    paths: &[IntegrationPath<R>],
) -> Result<(Vec<Vec<Complex<R>>>, R)> {
    if !cfg.is_canonical() {
        return Err(Error::NotCanonical("period Jacobian uses canonical parameters".into()));
    }
    let p = canonical_parameters(cfg);
    let f = |q: &[Complex<R>]| -> Result<Vec<Complex<R>>> {
        let c = with_canonical_parameters(cfg, q);
        let ps: Vec<IntegrationPath<R>> = paths.iter().enumerate().map(|(j, pa)| retarget(pa, &c, j + 1)).collect();
        Ok(period_vector(&c, &ps)?.coordinates())
    };
    finite_difference_jacobian(f, &p, &default_step::<R>())
}
