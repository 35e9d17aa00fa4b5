//! Linear varieties `S_M = {M·φ = 0}` in simple-pole strata and the
//! algebraic equations obtained by exponentiating their rows.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::is_rref;
use crate::mpf::Mpf;
use crate::path::IntegrationPath;
use crate::periods::period_vector;
use crate::scalar::{ComplexExt, GaussRat, Real, Scalar};
use crate::strata::DiffConfig;

use super::residue::residue_variety_membership;

/// Largest integer multiple of the residue lattice generator removed from a
/// row value when reducing the residual.
pub const LATTICE_COEFFICIENT_BOUND: i64 = 100;

/// `M = [[A, B], [0, C]]` with `A` rational in reduced row-echelon form and
/// `C` encoded by the residue ratios `q_j = R_j/R_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearVarietySpec {
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<Vec<GaussRat>>,
    pub q: Vec<BigRational>,
}

impl LinearVarietySpec {
    pub fn new(a: Vec<Vec<BigRational>>, b: Vec<Vec<GaussRat>>, q: Vec<BigRational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::ShapeMismatch(format!("A has {} rows and B has {}", a.len(), b.len())));
        }
        if let Some(i) = q.iter().position(|x| x.is_zero()) {
            return Err(Error::ZeroQ(i + 1));
        }
        let m = a.first().map_or(0, |r| r.len());
        if a.iter().any(|r| r.len() != m) || b.iter().any(|r| r.len() != q.len() + 1) {
            return Err(Error::ShapeMismatch("rows of A must have m entries and rows of B n + 1".into()));
        }
        if !is_rref(&a) {
            return Err(Error::InvalidInput("A must be in reduced row-echelon form".into()));
        }
        Ok(LinearVarietySpec { a, b, q })
    }

    /// Codimension `k + n` of `S_M` in the stratum.
    pub fn codimension(&self) -> usize {
        self.a.len() + self.q.len()
    }
}

/// `c·∏ y_j^{a_kj} = ∏ (y_j − x_k)^{a_kj}` with `c = exp(−2πi·turns)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicEquation {
    /// `exponents[k−1][j]` for `k = 1..m`, `j = 0..n`.
    pub exponents: Vec<Vec<BigInt>>,
    pub turns: GaussRat,
}

impl AlgebraicEquation {
    /// `c` exactly, when it is a fourth root of unity.
    pub fn c_exact(&self) -> Option<GaussRat> {
        if !self.turns.im.is_zero() {
            return None;
        }
        let four = &self.turns.re * BigRational::from_integer(BigInt::from(4));
        if !four.is_integer() {
            return None;
        }
        let k = four.to_integer().mod_floor(&BigInt::from(4)).to_u8().unwrap_or(0);
        let (one, zero) = (BigRational::one(), BigRational::zero());
        // exp(−πi k/2) = (−i)^k.
        Some(match k {
            0 => Complex::new(one, zero),
            1 => Complex::new(zero, -one),
            2 => Complex::new(-one, zero),
            _ => Complex::new(zero, one),
        })
    }

    pub fn c<R: Real>(&self) -> Complex<R> {
        let t = self.turns.to_complex::<R>();
        (-(<Complex<R> as ComplexExt<R>>::two_pi_i() * t)).exp()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().flatten().all(|a| a.is_zero())
    }

    /// `∏ w_kj^{a_kj}` with `w_kj = (y_j − x_k)/y_j`.
    pub fn monomial<S: Scalar>(&self, cfg: &DiffConfig<S>) -> S {
        let mut acc = S::one();
        for (k, row) in self.exponents.iter().enumerate() {
            let x = cfg.zeros[k + 1].clone();
            for (j, a) in row.iter().enumerate() {
                let y = cfg.poles[j].clone();
                let w = (y.clone() - x.clone()) / y;
                let e = a.abs().to_usize().unwrap_or(0);
                let mut p = S::one();
                for _ in 0..e {
                    p = p * w.clone();
                }
                acc = if a.is_negative() { acc / p } else { acc * p };
            }
        }
        acc
    }

    /// Whether the equation holds at `cfg`, and whether that was decided
    /// exactly. Otherwise the test is numerical at the working precision.
    pub fn holds<S: Scalar>(&self, cfg: &DiffConfig<S>) -> (bool, bool) {
        let w = self.monomial(cfg);
        if let (true, Some(c)) = (S::EXACT, self.c_exact()) {
            return (w == S::from_gauss(&c), true);
        }
        let wn = w.to_complex::<Mpf>();
        let c = self.c::<Mpf>();
        let tol = crate::scalar::numeric_tolerance::<Mpf>();
        let scale = ComplexExt::abs(&c).max_of(Mpf::from_i64(1));
        (ComplexExt::abs(&(wn - c)) <= tol * scale, false)
    }
}

/// Exponentiates the row `Σ c_i ∫_0^{x_i} ω + Σ 2πi d_l R_l` on the residue
/// variety `R_j = q_j R_0`: `a_ij = N·c_i·q_j` (with `q_0 = 1`) made primitive,
/// and `c = exp(−2πi·N·Σ d_l q_l)` with the same `N`.
pub fn exponentiate_linear_row(c: &[GaussRat], d: &[GaussRat], q: &[BigRational]) -> Result<AlgebraicEquation> {
    if d.len() != q.len() + 1 {
        return Err(Error::ShapeMismatch(format!("d needs {} entries, got {}", q.len() + 1, d.len())));
    }
    let mut cr = Vec::with_capacity(c.len());
    for (i, ci) in c.iter().enumerate() {
        if !ci.im.is_zero() {
            return Err(Error::NonRationalCoefficient(format!("c_{} is not real", i + 1)));
        }
        cr.push(ci.re.clone());
    }
    let qq: Vec<BigRational> = std::iter::once(BigRational::one()).chain(q.iter().cloned()).collect();
    let products: Vec<Vec<BigRational>> = cr.iter().map(|ci| qq.iter().map(|qj| ci * qj).collect()).collect();
    let lcm = products.iter().flatten().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let ints: Vec<Vec<BigInt>> = products
        .iter()
        .map(|row| row.iter().map(|p| (p * BigRational::from_integer(lcm.clone())).to_integer()).collect())
        .collect();
    let g = ints.iter().flatten().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    let (exponents, scale) = if g.is_zero() {
        (ints, BigRational::one())
    } else {
        let e = ints.iter().map(|row| row.iter().map(|a| a / &g).collect()).collect();
        (e, BigRational::new(lcm, g))
    };
    let s = d
        .iter()
        .zip(&qq)
        .fold(GaussRat::zero(), |acc, (dl, ql)| acc + dl.clone() * Complex::new(ql.clone(), BigRational::zero()));
    let turns = s * Complex::new(scale, BigRational::zero());
    Ok(AlgebraicEquation { exponents, turns })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmVerdict {
    /// Membership in the residue variety and in every exponentiated row.
    pub algebraic: bool,
    /// Whether every test behind `algebraic` was exact.
    pub exact: bool,
    /// Largest `|row · φ|`, with relative-period rows reduced modulo the
    /// lattice of `2πi R_k` combinations.
    pub numeric_residual: f64,
}

fn rational_gcd(values: &[BigRational]) -> BigRational {
    let num = values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v.numer()));
    let den = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    BigRational::new(num, den)
}

/// Membership of a canonical simple-pole configuration in `S_M`.
pub fn sm_membership<S: Scalar, R: Real>(
    cfg: &DiffConfig<S>,
    spec: &LinearVarietySpec,
    paths: &[IntegrationPath<R>],
) -> Result<SmVerdict> {
    if !cfg.signature.is_simple_pole() {
        return Err(Error::NotSimplePole);
    }
    if !cfg.is_canonical() {
        return Err(Error::NotCanonical("S_M membership uses canonical coordinates".into()));
    }
    let m = cfg.signature.m();
    let n1 = cfg.poles.len();
    if spec.q.len() + 1 != n1 || spec.a.first().map_or(false, |r| r.len() != m) {
        return Err(Error::ShapeMismatch(format!("spec does not fit m = {m}, n = {}", n1 - 1)));
    }
    let in_rq = residue_variety_membership(cfg, &spec.q)?;
    let mut algebraic = in_rq;
    let mut exact = S::EXACT;
    for (arow, brow) in spec.a.iter().zip(&spec.b) {
        let c: Vec<GaussRat> = arow.iter().map(|x| Complex::new(x.clone(), BigRational::zero())).collect();
        let eq = exponentiate_linear_row(&c, brow, &spec.q)?;
        let (holds, was_exact) = eq.holds(cfg);
        algebraic &= holds;
        exact &= was_exact;
    }

    let phi = period_vector(cfg, paths)?.coordinates();
    let g0 = phi[m].clone();
    let mut worst = R::zero();
    for (arow, brow) in spec.a.iter().zip(&spec.b) {
        let mut h = Complex::new(R::zero(), R::zero());
        for (ci, p) in arow.iter().zip(&phi[..m]) {
            h = h + p.scale_by(&R::from_rational(ci));
        }
        for (dl, p) in brow.iter().zip(&phi[m..]) {
            h = h + dl.to_complex::<R>() * p.clone();
        }
        // Branch changes shift relative periods by 2πi Σ n_k R_k; on the
        // residue variety these are rational multiples of 2πi R_0.
        let gens: Vec<BigRational> = arow
            .iter()
            .flat_map(|ci| std::iter::once(BigRational::one()).chain(spec.q.iter().cloned()).map(move |qj| ci * qj))
            .filter(|v| !v.is_zero())
            .collect();
        if !gens.is_empty() && !g0.is_zero() {
            let rho = R::from_rational(&rational_gcd(&gens));
            let t = h.clone() / g0.clone();
            let k = (t.re / rho.clone()).round_to_bigint();
            let bound = BigInt::from(LATTICE_COEFFICIENT_BOUND);
            let k = k.clamp(-bound.clone(), bound);
            h = h - g0.scale_by(&(rho * R::from_rational(&BigRational::from_integer(k))));
        }
        worst = worst.max_of(ComplexExt::abs(&h));
    }
    for (j, qj) in spec.q.iter().enumerate() {
        let d = phi[m + 1 + j].clone() - g0.scale_by(&R::from_rational(qj));
        worst = worst.max_of(ComplexExt::abs(&d));
    }
    Ok(SmVerdict { algebraic, exact, numeric_residual: worst.to_f64() })
}
