//! The torus embedding `w_ij = (y_j − x_i)/y_j`, the twisted algebraic period
//! map, fiber rank and multiplicative-relation detection.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::integer_relations;
use crate::linalg::{hermite_normal_form, nullspace};
use crate::mpf::{with_precision, Mpf};
use crate::periods::algebraic_period_part;
use crate::scalar::{ComplexExt, Real, Scalar};
use crate::strata::{residues, DiffConfig};

/// Image of a canonical configuration in `(C*)^{m(n+1)} × C*`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint<S> {
    /// `w[i−1][j]` for `i = 1..m`, `j = 0..n`.
    pub w: Vec<Vec<S>>,
    pub lambda: S,
}

impl<S: Scalar> TorusPoint<S> {
    pub fn flat(&self) -> Vec<S> {
        self.w.iter().flatten().cloned().collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TorusPoint<T> {
        TorusPoint {
            w: self.w.iter().map(|row| row.iter().map(&f).collect()).collect(),
            lambda: f(&self.lambda),
        }
    }

    /// `(w_i0 − 1)(w_i'j − 1) = (w_i'0 − 1)(w_ij − 1)` for all `i, i', j`.
    pub fn closure_relations_hold(&self) -> bool {
        let one = S::one();
        for a in &self.w {
            for b in &self.w {
                for j in 0..a.len() {
                    let lhs = (a[0].clone() - one.clone()) * (b[j].clone() - one.clone());
                    let rhs = (b[0].clone() - one.clone()) * (a[j].clone() - one.clone());
                    if !lhs.approx_eq(&rhs) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `ι(λ, x, y) = ((y_j − x_i)/y_j, λ)`; needs canonical normalization.
pub fn embed<S: Scalar>(cfg: &DiffConfig<S>) -> Result<TorusPoint<S>> {
    if !cfg.is_canonical() {
        return Err(Error::NotCanonical("the torus embedding needs x_0 = 0 and y_0 = 1".into()));
    }
    let mut w = Vec::with_capacity(cfg.zeros.len().saturating_sub(1));
    for (i, x) in cfg.zeros.iter().enumerate().skip(1) {
        let mut row = Vec::with_capacity(cfg.poles.len());
        for (j, y) in cfg.poles.iter().enumerate() {
            if y.is_zero() {
                return Err(Error::ZeroCoordinate { i, j });
            }
            let v = (y.clone() - x.clone()) / y.clone();
            if v.is_zero() {
                return Err(Error::ZeroCoordinate { i, j });
            }
            row.push(v);
        }
        w.push(row);
    }
    Ok(TorusPoint { w, lambda: cfg.lambda.clone() })
}

/// Principal logarithms of the torus coordinates divided by `2πi`: a point
/// `v` on the graph of the exponential over `embed(cfg)`.
pub fn log_point<S: Scalar, R: Real>(tp: &TorusPoint<S>) -> Vec<Vec<Complex<R>>> {
    let tpi = <Complex<R> as ComplexExt<R>>::two_pi_i();
    tp.w
        .iter()
        .map(|row| row.iter().map(|w| w.to_complex::<R>().ln() / tpi.clone()).collect())
        .collect()
}

/// `A(s, v) = (F^alg(s) + 2πi(R·v_1, ..., R·v_m), 2πi R(s))`.
pub fn twisted_period_map<S: Scalar, R: Real>(cfg: &DiffConfig<S>, v: &[Vec<Complex<R>>]) -> Result<Vec<Complex<R>>> {
    let m = cfg.signature.m();
    let np = cfg.poles.len();
    if v.len() != m || v.iter().any(|vi| vi.len() != np) {
        return Err(Error::ShapeMismatch(format!("v must be {m} blocks of length {np}")));
    }
    let falg = algebraic_period_part(cfg)?;
    let res: Vec<Complex<R>> = residues(cfg)?.finite.iter().map(|r| r.to_complex()).collect();
    let tpi = <Complex<R> as ComplexExt<R>>::two_pi_i();
    let mut out = Vec::with_capacity(m + np);
    for (fa, vi) in falg.iter().zip(v) {
        let dot = res.iter().zip(vi).fold(Complex::new(R::zero(), R::zero()), |acc, (r, x)| acc + r.clone() * x.clone());
        out.push(fa.to_complex::<R>() + tpi.clone() * dot);
    }
    out.extend(res.iter().map(|r| tpi.clone() * r.clone()));
    Ok(out)
}

/// A translated rational subspace `offset + span_Q(basis)` of `C^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineLattice {
    pub k: usize,
    /// Integer rows spanning the linear part.
    pub basis: Vec<Vec<BigInt>>,
    pub offset: Vec<Complex<f64>>,
}

impl AffineLattice {
    pub fn full(k: usize) -> Self {
        let basis = (0..k)
            .map(|i| (0..k).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        AffineLattice { k, basis, offset: vec![Complex::new(0.0, 0.0); k] }
    }

    pub fn zero(k: usize) -> Self {
        AffineLattice { k, basis: Vec::new(), offset: vec![Complex::new(0.0, 0.0); k] }
    }

    pub fn from_basis(k: usize, basis: Vec<Vec<BigInt>>) -> Result<Self> {
        if basis.iter().any(|b| b.len() != k) {
            return Err(Error::ShapeMismatch(format!("basis rows must have length {k}")));
        }
        Ok(AffineLattice { k, basis, offset: vec![Complex::new(0.0, 0.0); k] })
    }

    /// The rational subspace orthogonal to a set of integer relations.
    pub fn annihilator_of(k: usize, relations: &[Vec<BigInt>]) -> Self {
        let rows: Vec<Vec<BigRational>> = relations
            .iter()
            .map(|r| r.iter().map(|a| BigRational::from_integer(a.clone())).collect())
            .collect();
        let ns = nullspace(&rows, k);
        let basis = ns.into_iter().map(|v| clear_denominators(&v)).collect();
        AffineLattice { k, basis, offset: vec![Complex::new(0.0, 0.0); k] }
    }

    pub fn dim(&self) -> usize {
        let rows: Vec<Vec<BigRational>> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|a| BigRational::from_integer(a.clone())).collect())
            .collect();
        crate::linalg::rank_by_elimination(&rows)
    }
}

pub(crate) fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// `T_R(v) = (R·v_1, ..., R·v_m)` for a flattened `v`.
pub fn apply_t_r<S: Scalar>(r: &[S], v: &[S]) -> Vec<S> {
    v.chunks(r.len())
        .map(|vi| vi.iter().zip(r).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
        .collect()
}

/// Rank of `v ↦ (R·v_1, ..., R·v_m)` restricted to the linear part of `V`.
pub fn fiber_rank<S: Scalar>(r: &[S], v: &AffineLattice) -> Result<usize> {
    if r.is_empty() || v.k % r.len() != 0 {
        return Err(Error::ShapeMismatch(format!(
            "lattice dimension {} is not a multiple of the residue count {}",
            v.k,
            r.len()
        )));
    }
    if v.basis.is_empty() {
        return Ok(0);
    }
    let rows: Vec<Vec<S>> = v
        .basis
        .iter()
        .map(|b| {
            let bs: Vec<S> = b.iter().map(|a| S::from_i64(a.try_into().unwrap_or(i64::MAX))).collect();
            apply_t_r(r, &bs)
        })
        .collect();
    // Exact cancellations leave rounding noise in numeric scalars.
    let r_max = r.iter().fold(S::zero(), |acc, x| if x.magnitude() > acc.magnitude() { x.clone() } else { acc });
    let b_max = v.basis.iter().flatten().map(|a| a.magnitude().to_u64().unwrap_or(u64::MAX)).max().unwrap_or(1).max(1);
    let scale = r_max * S::from_i64(b_max.min(i64::MAX as u64) as i64);
    let rows: Vec<Vec<S>> = rows
        .into_iter()
        .map(|row| row.into_iter().map(|x| if x.is_negligible(&scale) { S::zero() } else { x }).collect())
        .collect();
    Ok(S::matrix_rank(&rows))
}

/// Lattice of integer exponent vectors found by sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationLattice {
    /// Hermite normal form of the relation lattice.
    pub basis: Vec<Vec<BigInt>>,
    /// Always set: relations come from numerical integer-relation detection.
    pub heuristic: bool,
}

fn relations_at<S: Scalar>(points: &[TorusPoint<S>], bound: u64, bits: usize) -> Vec<Vec<BigInt>> {
    with_precision(bits, || {
        let logs: Vec<Vec<Complex<Mpf>>> = points
            .iter()
            .map(|p| p.flat().iter().map(|w| w.to_complex::<Mpf>().ln()).collect())
            .collect();
        let k = logs[0].len();
        let two_pi = <Mpf as Real>::two_pi();
        let samples = points.len().min(4);
        // One real vector per unknown: torus coordinates first, then one
        // 2π generator per imaginary slot to absorb branch choices.
        let mut x: Vec<Vec<Mpf>> = Vec::new();
        let slots = if samples >= 2 { samples - 1 } else { 1 };
        for c in 0..k {
            let mut v = Vec::with_capacity(2 * slots);
            if samples >= 2 {
                for s in 1..samples {
                    let d = logs[s][c].clone() - logs[0][c].clone();
                    v.push(d.re);
                    v.push(d.im);
                }
            } else {
                v.push(logs[0][c].re.clone());
                v.push(logs[0][c].im.clone());
            }
            x.push(v);
        }
        for s in 0..slots {
            let mut g = vec![Mpf::from_i64(0); 2 * slots];
            g[2 * s + 1] = two_pi.clone();
            x.push(g);
        }
        let rels = integer_relations(&x, bound);
        let projected: Vec<Vec<BigInt>> = rels
            .into_iter()
            .map(|r| r[..k].to_vec())
            .filter(|r| r.iter().any(|a| !a.is_zero()))
            .collect();
        if projected.is_empty() {
            return Vec::new();
        }
        hermite_normal_form(&projected)
    })
}

/// Integer vectors `a` with `∏ w_ij^{a_ij}` constant over all samples (or a
/// root of unity, for a single sample), with `|a_ij| ≤ bound`. The lattice
/// must agree at 256 and 512 bits.
pub fn detect_multiplicative_relations<S: Scalar>(points: &[TorusPoint<S>], bound: u64) -> Result<RelationLattice> {
    if points.is_empty() || bound == 0 {
        return Err(Error::InvalidInput("need at least one point and a positive bound".into()));
    }
    let k = points[0].flat().len();
    if points.iter().any(|p| p.flat().len() != k) {
        return Err(Error::ShapeMismatch("sample points have different shapes".into()));
    }
    let low = relations_at(points, bound, 256);
    let high = relations_at(points, bound, 512);
    if low != high {
        return Err(Error::PrecisionTooLow(format!(
            "relation lattice has rank {} at 256 bits and {} at 512 bits",
            low.len(),
            high.len()
        )));
    }
    Ok(RelationLattice { basis: high, heuristic: true })
}
