//! Pullback of a differential along a covering map `f: P^1 → P^1`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;
use crate::scalar::{ComplexExt, GaussRat, Real, Scalar};
use crate::strata::{differential_from_config, DiffConfig};

use super::groups::{config_from_groups, group_points, group_residue, product_form_lambda, PointGroup};

/// A covering map `f = numerator/denominator`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverSpec {
    pub map: RationalFunction<GaussRat>,
}

impl CoverSpec {
    pub fn new(numerator: Poly<GaussRat>, denominator: Poly<GaussRat>) -> Result<Self> {
        let map = RationalFunction::new(numerator, denominator)?;
        if map.is_constant() {
            return Err(Error::ConstantMap);
        }
        Ok(CoverSpec { map })
    }

    pub fn degree(&self) -> usize {
        let n = self.map.numerator().degree().unwrap_or(0);
        let d = self.map.denominator().degree().unwrap_or(0);
        n.max(d)
    }

    /// `f − b` cleared of denominators: `N − b·D`.
    fn fiber_polynomial(&self, b: &GaussRat) -> Poly<GaussRat> {
        self.map.numerator() - &self.map.denominator().scale(b)
    }
}

/// The marked base point a group of preimages lies over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasePoint {
    Zero(usize),
    Pole(usize),
    Infinity,
}

/// `f*ω` with its marked points grouped by the base point they lie over.
#[derive(Clone, Debug, PartialEq)]
pub struct Pullback<R> {
    /// `f*ω / du`, exactly.
    pub differential: RationalFunction<GaussRat>,
    pub groups: Vec<PointGroup>,
    pub over: Vec<BasePoint>,
    /// Numerical roots of each group, in group order.
    pub points: Vec<Vec<Complex<R>>>,
    pub config: DiffConfig<Complex<R>>,
    /// The base configuration, numerically.
    pub base: DiffConfig<Complex<R>>,
}

/// `f*ω = ω(f(u))·f'(u) du`, in free normalization. Every branch value of
/// `f` must be a marked point of the base.
pub fn pullback_by_cover<R: Real>(base: &DiffConfig<GaussRat>, cover: &CoverSpec) -> Result<Pullback<R>> {
    let f = &cover.map;
    let omega = differential_from_config(base)?;
    let differential = omega.compose(f)?.mul(&f.derivative()?)?;
    let d = cover.degree();

    let mut marked: Vec<(BasePoint, Option<GaussRat>, i64)> = Vec::new();
    for (i, (x, e)) in base.zero_factors().into_iter().enumerate() {
        marked.push((BasePoint::Zero(i), Some(x), e as i64));
    }
    for (j, (y, e)) in base.pole_factors().into_iter().enumerate() {
        marked.push((BasePoint::Pole(j), Some(y), -(e as i64)));
    }
    let inf_order = base.signature.order_at_infinity();
    if inf_order != 0 {
        marked.push((BasePoint::Infinity, None, inf_order));
    }

    let mut groups = Vec::new();
    let mut over = Vec::new();
    let mut ramification = 0usize;
    for (bp, b, e) in marked {
        let fiber = match &b {
            Some(b) => cover.fiber_polynomial(b),
            None => f.denominator().clone(),
        };
        let finite_deg = fiber.degree().unwrap_or(0);
        let mut preimages = 0usize;
        for (g, r) in fiber.squarefree_decomposition() {
            let order = r as i64 * (e + 1) - 1;
            preimages += g.degree().unwrap_or(0);
            let exact_residue = group_residue(&differential, &g, order);
            groups.push(PointGroup { factor: Some(g), order, local_degree: r, exact_residue });
            over.push(bp.clone());
        }
        if finite_deg < d {
            let r = d - finite_deg;
            let order = r as i64 * (e + 1) - 1;
            preimages += 1;
            groups.push(PointGroup {
                factor: None,
                order,
                local_degree: r,
                exact_residue: Some(if order == -1 { differential.residue_at_infinity() } else { GaussRat::zero() }),
            });
            over.push(bp.clone());
        }
        ramification += d - preimages;
    }
    // Riemann–Hurwitz: total ramification of a degree-d self-map of P^1.
    if ramification != 2 * d - 2 {
        return Err(Error::UnmarkedBranchValue(format!(
            "marked base points account for ramification {ramification} of {}",
            2 * d - 2
        )));
    }
    if !groups.iter().any(|g| g.is_infinity()) {
        groups.push(PointGroup { factor: None, order: 0, local_degree: 1, exact_residue: Some(GaussRat::zero()) });
        over.push(BasePoint::Infinity);
    }
    let points = group_points::<R>(&groups)?;
    let config = config_from_groups(&groups, &points, product_form_lambda(&differential))?;
    Ok(Pullback { differential, groups, over, points, config, base: base.to_numeric() })
}

fn map_value<R: Real>(p: &Poly<GaussRat>, z: &Complex<R>) -> Complex<R> {
    p.coeffs().iter().rev().fold(Complex::new(R::zero(), R::zero()), |acc, c| acc * z.clone() + c.to_complex::<R>())
}

impl<R: Real> Pullback<R> {
    /// Pullback of a numerically perturbed base with the same marked-point
    /// layout. Unramified preimages follow by Newton's method from the
    /// current points; ramified ones require the base point to stay put.
    pub fn follow(&self, cover: &CoverSpec, base: &DiffConfig<Complex<R>>) -> Result<DiffConfig<Complex<R>>> {
        let (num, den) = (cover.map.numerator(), cover.map.denominator());
        let (dnum, dden) = (num.derivative(), den.derivative());
        let tol = R::epsilon().sqrt();
        let mut points = Vec::with_capacity(self.points.len());
        for ((g, bp), pts) in self.groups.iter().zip(&self.over).zip(&self.points) {
            let b = match bp {
                BasePoint::Zero(i) => Some(base.zeros[*i].clone()),
                BasePoint::Pole(j) => Some(base.poles[*j].clone()),
                BasePoint::Infinity => None,
            };
            if g.local_degree > 1 || b.is_none() {
                let moved = match (bp, &b) {
                    (BasePoint::Zero(i), Some(b)) => b.clone() - self.base.zeros[*i].clone(),
                    (BasePoint::Pole(j), Some(b)) => b.clone() - self.base.poles[*j].clone(),
                    _ => Complex::new(R::zero(), R::zero()),
                };
                if ComplexExt::abs(&moved) > tol {
                    return Err(Error::DegenerateConfig("a branch value moved off its marked point".into()));
                }
                points.push(pts.clone());
                continue;
            }
            let b = b.expect("finite base point");
            let mut moved = Vec::with_capacity(pts.len());
            for u0 in pts {
                let mut u = u0.clone();
                for _ in 0..60 {
                    let v = map_value(num, &u) - b.clone() * map_value(den, &u);
                    let dv = map_value(&dnum, &u) - b.clone() * map_value(&dden, &u);
                    let step = v / dv;
                    u = u - step.clone();
                    if ComplexExt::abs(&step) <= R::epsilon() * ComplexExt::abs(&u).max_of(R::one()) {
                        break;
                    }
                }
                moved.push(u);
            }
            points.push(moved);
        }
        let mut cfg = config_from_groups(&self.groups, &points, Complex::new(R::one(), R::zero()))?;
        cfg.lambda = self.numeric_lambda(cover, base, &cfg)?;
        Ok(cfg)
    }

    /// `λ` of the product form, matched against `ω(f(u))·f'(u)` at a point
    /// away from every marked point.
    fn numeric_lambda(
        &self,
        cover: &CoverSpec,
        base: &DiffConfig<Complex<R>>,
        shape: &DiffConfig<Complex<R>>,
    ) -> Result<Complex<R>> {
        let (num, den) = (cover.map.numerator(), cover.map.denominator());
        let marked: Vec<Complex<R>> = shape.zeros.iter().chain(&shape.poles).cloned().collect();
        let candidates = [(0.3137, 0.7411), (-0.6263, 0.2719), (0.8171, -0.5227), (1.9, 1.3)];
        let u = candidates
            .iter()
            .map(|&(a, b)| Complex::new(R::from_f64(a), R::from_f64(b)))
            .max_by(|a, b| {
                let da = marked.iter().fold(R::from_i64(1000), |acc, p| acc.min_of(ComplexExt::abs(&(a.clone() - p.clone()))));
                let db = marked.iter().fold(R::from_i64(1000), |acc, p| acc.min_of(ComplexExt::abs(&(b.clone() - p.clone()))));
                da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("candidates");
        let (n, dn) = (map_value(num, &u), map_value(den, &u));
        let fu = n.clone() / dn.clone();
        let dfu = (map_value(&num.derivative(), &u) * dn.clone() - n * map_value(&den.derivative(), &u)) / (dn.clone() * dn);
        let pulled = crate::periods::omega_at(base, &fu)? * dfu;
        let unit = crate::periods::omega_at(shape, &u)?;
        Ok(pulled / unit)
    }
}
