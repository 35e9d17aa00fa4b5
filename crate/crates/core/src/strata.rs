//! Stratum signatures, configurations of marked points, and residues.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::{partial_fractions, PartialFractionForm, RationalFunction};
use crate::scalar::{Real, Scalar};
use num_complex::Complex;

/// Orders `μ = (e_0..e_m, −e_{m+1}..−e_{m+n+1}, ord_∞)`: zero orders, then
/// finite pole orders, then the order at `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumSignature {
    orders: Vec<i64>,
    num_zeros: usize,
    num_poles: usize,
}

impl StratumSignature {
    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn num_zeros(&self) -> usize {
        self.num_zeros
    }

    pub fn num_finite_poles(&self) -> usize {
        self.num_poles
    }

    /// Number of relative periods, `#zeros − 1`.
    pub fn m(&self) -> usize {
        self.num_zeros.saturating_sub(1)
    }

    /// `#finite poles − 1`, or `None` without finite poles.
    pub fn n(&self) -> Option<usize> {
        self.num_poles.checked_sub(1)
    }

    pub fn zero_orders(&self) -> Vec<usize> {
        self.orders[..self.num_zeros].iter().map(|&e| e as usize).collect()
    }

    pub fn pole_orders(&self) -> Vec<usize> {
        self.orders[self.num_zeros..self.num_zeros + self.num_poles]
            .iter()
            .map(|&e| (-e) as usize)
            .collect()
    }

    pub fn order_at_infinity(&self) -> i64 {
        *self.orders.last().expect("signature is nonempty")
    }

    pub fn infinity_is_pole(&self) -> bool {
        self.order_at_infinity() < 0
    }

    /// Whether the canonical normalization `x_0 = 0, y_0 = 1, ∞` a pole is
    /// available: at least one zero and at least two poles.
    pub fn canonical_allowed(&self) -> bool {
        self.num_zeros >= 1 && self.num_poles >= 1 && self.infinity_is_pole()
    }

    /// Every pole (including `∞`) is simple.
    pub fn is_simple_pole(&self) -> bool {
        self.pole_orders().iter().all(|&e| e == 1) && self.order_at_infinity() == -1
    }

    /// Dimension of the stratum (period coordinates `m + n + 1`).
    pub fn dimension(&self) -> usize {
        self.m() + self.num_poles
    }
}

/// Accepts `orders` iff they sum to `−2` and list zeros before finite poles.
pub fn validate_signature(orders: &[i64]) -> Result<StratumSignature> {
    let Some((_, finite)) = orders.split_last() else {
        return Err(Error::MalformedSignature("empty signature".into()));
    };
    let sum: i64 = orders.iter().sum();
    if sum != -2 {
        return Err(Error::BadSignature { sum });
    }
    let num_zeros = finite.iter().take_while(|&&e| e > 0).count();
    let rest = &finite[num_zeros..];
    if let Some(bad) = rest.iter().find(|&&e| e >= 0) {
        return Err(Error::MalformedSignature(format!(
            "finite entry {bad} after the pole block; zeros must precede poles and orders must be nonzero"
        )));
    }
    Ok(StratumSignature { orders: orders.to_vec(), num_zeros, num_poles: rest.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `x_0 = 0`, `y_0 = 1`, `∞` a pole.
    Canonical,
    Free,
}

/// A point `(λ, x, y)` of a stratum: `ω = λ ∏(z − x_i)^{e_i} / ∏(z − y_j)^{e_j} dz`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffConfig<S> {
    pub signature: StratumSignature,
    pub lambda: S,
    pub zeros: Vec<S>,
    pub poles: Vec<S>,
    pub normalization: Normalization,
}

impl<S: Scalar> DiffConfig<S> {
    pub fn new(
        signature: StratumSignature,
        lambda: S,
        zeros: Vec<S>,
        poles: Vec<S>,
        normalization: Normalization,
    ) -> Result<Self> {
        if zeros.len() != signature.num_zeros() || poles.len() != signature.num_finite_poles() {
            return Err(Error::ShapeMismatch(format!(
                "signature needs {} zeros and {} finite poles, got {} and {}",
                signature.num_zeros(),
                signature.num_finite_poles(),
                zeros.len(),
                poles.len()
            )));
        }
        if lambda.is_zero() {
            return Err(Error::DegenerateConfig("lambda is zero".into()));
        }
        let all: Vec<&S> = zeros.iter().chain(&poles).collect();
        for (i, a) in all.iter().enumerate() {
            if all[..i].iter().any(|b| a.approx_eq(b)) {
                return Err(Error::DegenerateConfig(format!("marked points collide at {a:?}")));
            }
        }
        if normalization == Normalization::Canonical {
            if !signature.canonical_allowed() {
                return Err(Error::NotCanonical(
                    "canonical mode needs a zero, a finite pole and a pole at infinity".into(),
                ));
            }
            if !zeros[0].is_zero() || !poles[0].is_one() {
                return Err(Error::NotCanonical("expected x_0 = 0 and y_0 = 1".into()));
            }
        }
        Ok(DiffConfig { signature, lambda, zeros, poles, normalization })
    }

    pub fn is_canonical(&self) -> bool {
        self.normalization == Normalization::Canonical
    }

    pub fn zero_factors(&self) -> Vec<(S, usize)> {
        self.zeros.iter().cloned().zip(self.signature.zero_orders()).collect()
    }

    pub fn pole_factors(&self) -> Vec<(S, usize)> {
        self.poles.iter().cloned().zip(self.signature.pole_orders()).collect()
    }

    pub fn with_lambda(&self, lambda: S) -> Self {
        DiffConfig { lambda, ..self.clone() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DiffConfig<T> {
        DiffConfig {
            signature: self.signature.clone(),
            lambda: f(&self.lambda),
            zeros: self.zeros.iter().map(&f).collect(),
            poles: self.poles.iter().map(&f).collect(),
            normalization: self.normalization,
        }
    }

    pub fn to_numeric<R: Real>(&self) -> DiffConfig<Complex<R>> {
        self.map(|x| x.to_complex::<R>())
    }

    /// Affine change of coordinates `z = a u + x_0`, `a = y_0 − x_0`, moving
    /// `x_0` to 0 and `y_0` to 1. The differential is unchanged as a form.
    pub fn canonicalize(&self) -> Result<Self> {
        if self.is_canonical() {
            return Ok(self.clone());
        }
        if !self.signature.canonical_allowed() {
            return Err(Error::NotCanonical(
                "canonical mode needs a zero, a finite pole and a pole at infinity".into(),
            ));
        }
        let b = self.zeros[0].clone();
        let a = self.poles[0].clone() - b.clone();
        let sz: usize = self.signature.zero_orders().iter().sum();
        let sp: usize = self.signature.pole_orders().iter().sum();
        let power = 1 + sz as i64 - sp as i64;
        let mut lambda = self.lambda.clone();
        if power >= 0 {
            for _ in 0..power {
                lambda = lambda * a.clone();
            }
        } else {
            for _ in 0..(-power) {
                lambda = lambda / a.clone();
            }
        }
        let mv = |x: &S| (x.clone() - b.clone()) / a.clone();
        let mut zeros: Vec<S> = self.zeros.iter().map(mv).collect();
        let mut poles: Vec<S> = self.poles.iter().map(mv).collect();
        zeros[0] = S::zero();
        poles[0] = S::one();
        DiffConfig::new(self.signature.clone(), lambda, zeros, poles, Normalization::Canonical)
    }
}

/// `ω/dz` as a rational function.
pub fn differential_from_config<S: Scalar>(cfg: &DiffConfig<S>) -> Result<RationalFunction<S>> {
    let num = Poly::from_roots(&cfg.zero_factors()).scale(&cfg.lambda);
    let den = Poly::from_roots(&cfg.pole_factors());
    let f = RationalFunction::new(num, den)?;
    if f.denominator().degree() != Some(cfg.signature.pole_orders().iter().sum()) {
        return Err(Error::DegenerateConfig("a zero cancels a pole".into()));
    }
    Ok(f)
}

/// Partial-fraction form of `ω/dz` using the marked poles.
pub fn config_partial_fractions<S: Scalar>(cfg: &DiffConfig<S>) -> Result<PartialFractionForm<S>> {
    let f = differential_from_config(cfg)?;
    partial_fractions(&f, &cfg.pole_factors())
}

/// Residues at the marked finite poles, plus the residue at `∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueVector<S> {
    pub finite: Vec<S>,
    pub at_infinity: S,
}

impl<S: Scalar> ResidueVector<S> {
    pub fn total(&self) -> S {
        self.finite.iter().fold(self.at_infinity.clone(), |acc, r| acc + r.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.finite.iter().all(|r| r.is_zero()) && self.at_infinity.is_zero()
    }
}

/// Finite residues are the `a_i1` of the partial-fraction form; the residue
/// at `∞` is read off the expansion at `∞`, independently of the others.
pub fn residues<S: Scalar>(cfg: &DiffConfig<S>) -> Result<ResidueVector<S>> {
    let f = differential_from_config(cfg)?;
    let pf = partial_fractions(&f, &cfg.pole_factors())?;
    Ok(ResidueVector { finite: pf.residues(), at_infinity: f.residue_at_infinity() })
}
