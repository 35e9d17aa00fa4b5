//! Log differentials `d log f = df/f`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;
use crate::scalar::{GaussRat, Real};
use crate::strata::DiffConfig;

use super::groups::{config_from_groups, group_points, group_residue, product_form_lambda, PointGroup};

/// `df/f` with its marked points grouped exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDifferential<R> {
    /// `(df/f)/dz`, exactly.
    pub differential: RationalFunction<GaussRat>,
    /// Zeros of `f`, poles of `f`, critical points, and `∞`, in that order.
    pub groups: Vec<PointGroup>,
    /// Order of `f` at each group's points (0 at critical points).
    pub f_orders: Vec<i64>,
    pub points: Vec<Vec<Complex<R>>>,
    pub config: DiffConfig<Complex<R>>,
}

/// `d log f` for a nonconstant rational `f`. Residues are the orders of `f`;
/// a critical point of local degree `k` is a zero of order `k − 1`.
pub fn dlog_differential<R: Real>(f: &RationalFunction<GaussRat>) -> Result<LogDifferential<R>> {
    if f.is_constant() {
        return Err(Error::ConstantMap);
    }
    let (n, d) = (f.numerator(), f.denominator());
    let differential = f.derivative()?.mul(&RationalFunction::new(d.clone(), n.clone())?)?;
    let mut groups = Vec::new();
    let mut f_orders = Vec::new();
    for (poly, sign) in [(n, 1i64), (d, -1i64)] {
        for (g, k) in poly.squarefree_decomposition() {
            let exact_residue = group_residue(&differential, &g, -1);
            groups.push(PointGroup { factor: Some(g), order: -1, local_degree: k, exact_residue });
            f_orders.push(sign * k as i64);
        }
    }
    // Critical points away from zeros and poles of f: zeros of N'D − ND'
    // after removing the factors shared with N·D.
    let wronskian = &(&n.derivative() * d) - &(n * &d.derivative());
    let nd = n * d;
    let mut crit = wronskian.clone();
    loop {
        let g = crit.gcd(&nd);
        if g.degree().map_or(true, |k| k == 0) {
            break;
        }
        crit = crit.exact_div(&g);
    }
    for (g, k) in crit.squarefree_decomposition() {
        groups.push(PointGroup { factor: Some(g), order: k as i64, local_degree: k + 1, exact_residue: Some(GaussRat::zero()) });
        f_orders.push(0);
    }
    let deg_n = n.degree().unwrap_or(0) as i64;
    let deg_d = d.degree().unwrap_or(0) as i64;
    let f_order_inf = deg_d - deg_n;
    let inf_order = differential.order_at_infinity().unwrap_or(0);
    let local_degree = if f_order_inf != 0 { f_order_inf.unsigned_abs() as usize } else { (inf_order + 1) as usize };
    groups.push(PointGroup {
        factor: None,
        order: inf_order,
        local_degree,
        exact_residue: Some(if inf_order == -1 { differential.residue_at_infinity() } else { GaussRat::zero() }),
    });
    f_orders.push(f_order_inf);
    let points = group_points::<R>(&groups)?;
    let config = config_from_groups(&groups, &points, product_form_lambda(&differential))?;
    Ok(LogDifferential { differential, groups, f_orders, points, config })
}

/// `f` from coefficient lists in ascending order.
pub fn rational_map(numerator: Vec<GaussRat>, denominator: Vec<GaussRat>) -> Result<RationalFunction<GaussRat>> {
    RationalFunction::new(Poly::new(numerator), Poly::new(denominator))
}
