//! Marked points grouped by the exact squarefree factor whose roots they are.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::Result;
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;
use crate::roots::exact_simple_roots;
use crate::scalar::{GaussRat, Real, Scalar};
use crate::strata::{validate_signature, DiffConfig, Normalization};

/// Points sharing an exact description: the roots of `factor`, or `∞` when
/// `factor` is `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointGroup {
    pub factor: Option<Poly<GaussRat>>,
    /// Order of the differential at each point of the group.
    pub order: i64,
    /// Local degree of the map at each point of the group.
    pub local_degree: usize,
    /// Residue common to all points of the group, when it is exact.
    pub exact_residue: Option<GaussRat>,
}

impl PointGroup {
    pub fn size(&self) -> usize {
        self.factor.as_ref().map_or(1, |g| g.degree().unwrap_or(0))
    }

    pub fn is_infinity(&self) -> bool {
        self.factor.is_none()
    }
}

/// Residue of `f dz` at the roots of the squarefree `g`, if the same exact
/// value at every root can be computed: by Laurent expansion at a rational
/// root, or as `A·(B')^{-1} mod g` for simple poles.
pub fn group_residue(f: &RationalFunction<GaussRat>, g: &Poly<GaussRat>, order: i64) -> Option<GaussRat> {
    if order >= 0 {
        return Some(GaussRat::zero());
    }
    let (a, b) = (f.numerator(), f.denominator());
    let k = (-order) as usize;
    if g.degree() == Some(1) {
        let root = -g.coeff(0) / g.coeff(1);
        let h = b.exact_div(&Poly::linear_root(&root).pow(k));
        return Some(a.shift(&root).series_div(&h.shift(&root), k)[k - 1].clone());
    }
    if k != 1 {
        return None;
    }
    let (gcd, s, _) = b.derivative().rem(g).ext_gcd(g);
    if gcd.degree() != Some(0) {
        return None;
    }
    let r = (a * &s).rem(g);
    match r.degree() {
        None => Some(GaussRat::zero()),
        Some(0) => Some(r.coeff(0)),
        _ => None,
    }
}

/// Numerical configuration with the given groups as marked points, in group
/// order, zeros before poles. Points of order 0 are left unmarked.
pub fn config_from_groups<R: Real>(
    groups: &[PointGroup],
    points: &[Vec<Complex<R>>],
    lambda: Complex<R>,
) -> Result<DiffConfig<Complex<R>>> {
    let mut zero_orders = Vec::new();
    let mut pole_orders = Vec::new();
    let mut zeros = Vec::new();
    let mut poles = Vec::new();
    let mut at_infinity = 0;
    for (g, pts) in groups.iter().zip(points) {
        if g.is_infinity() {
            at_infinity = g.order;
            continue;
        }
        for p in pts {
            if g.order > 0 {
                zero_orders.push(g.order);
                zeros.push(p.clone());
            } else if g.order < 0 {
                pole_orders.push(g.order);
                poles.push(p.clone());
            }
        }
    }
    let mut orders = zero_orders;
    orders.extend(pole_orders);
    orders.push(at_infinity);
    let sig = validate_signature(&orders)?;
    DiffConfig::new(sig, lambda, zeros, poles, Normalization::Free)
}

/// Numerical roots of every finite group, at the working precision.
pub fn group_points<R: Real>(groups: &[PointGroup]) -> Result<Vec<Vec<Complex<R>>>> {
    groups
        .iter()
        .map(|g| match &g.factor {
            Some(f) => exact_simple_roots::<R>(f),
            None => Ok(Vec::new()),
        })
        .collect()
}

/// Leading coefficient of the numerator: `λ` of the product form.
pub fn product_form_lambda<R: Real>(f: &RationalFunction<GaussRat>) -> Complex<R> {
    f.numerator().leading().to_complex::<R>()
}
