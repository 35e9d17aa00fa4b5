//! Rational functions and their partial-fraction decomposition.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// `numerator / denominator`, with a monic denominator. Over exact fields the
/// two are coprime.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<S> {
    numerator: Poly<S>,
    denominator: Poly<S>,
}

impl<S: Scalar> RationalFunction<S> {
    pub fn new(numerator: Poly<S>, denominator: Poly<S>) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let (mut num, mut den) = (numerator, denominator);
        if S::EXACT && !num.is_zero() {
            let g = num.gcd(&den);
            if g.degree().map_or(false, |d| d > 0) {
                num = num.exact_div(&g);
                den = den.exact_div(&g);
            }
        }
        let lc = den.leading();
        if num.is_zero() {
            den = Poly::one();
        } else {
            let inv = S::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalFunction { numerator: num, denominator: den })
    }

    pub fn polynomial(p: Poly<S>) -> Self {
        RationalFunction { numerator: p, denominator: Poly::one() }
    }

    pub fn numerator(&self) -> &Poly<S> {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly<S> {
        &self.denominator
    }

    pub fn is_constant(&self) -> bool {
        self.numerator.is_constant() && self.denominator.is_constant()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let num = &(&self.numerator * &other.denominator) + &(&other.numerator * &self.denominator);
        Self::new(num, &self.denominator * &other.denominator)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(
            &self.numerator * &other.numerator,
            &self.denominator * &other.denominator,
        )
    }

    pub fn derivative(&self) -> Result<Self> {
        let (n, d) = (&self.numerator, &self.denominator);
        let num = &(&n.derivative() * d) - &(n * &d.derivative());
        Self::new(num, d * d)
    }

    /// `self(g(z))` for a rational `g`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        // Homogenize: p(N/D) = P~(N, D) / D^deg p.
        let homog = |p: &Poly<S>, deg: usize| -> Poly<S> {
            let mut acc = Poly::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                let term = &(&g.numerator.pow(k) * &g.denominator.pow(deg - k)) * &Poly::constant(c.clone());
                acc = &acc + &term;
            }
            acc
        };
        let dn = self.numerator.degree().unwrap_or(0);
        let dd = self.denominator.degree().unwrap_or(0);
        let deg = dn.max(dd);
        Self::new(homog(&self.numerator, deg), homog(&self.denominator, deg))
    }

    /// Order of the differential `self · dz` at `∞`: `deg den − deg num − 2`.
    pub fn order_at_infinity(&self) -> Option<i64> {
        let n = self.numerator.degree()? as i64;
        let d = self.denominator.degree().unwrap_or(0) as i64;
        Some(d - n - 2)
    }

    /// Residue of `self · dz` at `∞`.
    pub fn residue_at_infinity(&self) -> S {
        let (_, r) = self.numerator.div_rem(&self.denominator);
        match (r.degree(), self.denominator.degree()) {
            (Some(dr), Some(dd)) if dr + 1 == dd => -(r.leading() / self.denominator.leading()),
            _ => S::zero(),
        }
    }
}

/// Evaluates `f(z)`.
pub fn rf_eval<S: Scalar>(f: &RationalFunction<S>, z: &S) -> Result<S> {
    let d = f.denominator.eval(z);
    let degenerate = if S::EXACT {
        d.is_zero()
    } else {
        let scale = f
            .denominator
            .coeffs()
            .iter()
            .fold(S::one(), |acc, c| if c.magnitude() > acc.magnitude() { c.clone() } else { acc });
        d.is_zero() || d.is_negligible(&scale)
    };
    if degenerate {
        return Err(Error::PoleEvaluation);
    }
    Ok(f.numerator.eval(z) / d)
}

/// `Q + Σ_i Σ_j a_ij / (z − y_i)^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractionForm<S> {
    pub polynomial_part: Poly<S>,
    /// Pole location and coefficients `a_i1, ..., a_ie` (index `j − 1`).
    pub pole_terms: Vec<(S, Vec<S>)>,
}

impl<S: Scalar> PartialFractionForm<S> {
    /// The coefficient `a_i1`, which is the residue at `y_i`.
    pub fn residue(&self, i: usize) -> S {
        self.pole_terms[i].1.first().cloned().unwrap_or_else(S::zero)
    }

    pub fn residues(&self) -> Vec<S> {
        (0..self.pole_terms.len()).map(|i| self.residue(i)).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PartialFractionForm<T> {
        PartialFractionForm {
            polynomial_part: self.polynomial_part.map(&f),
            pole_terms: self
                .pole_terms
                .iter()
                .map(|(y, a)| (f(y), a.iter().map(&f).collect()))
                .collect(),
        }
    }
}

fn approx_poly_eq<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> bool {
    if S::EXACT {
        return a == b;
    }
    let n = a.coeffs().len().max(b.coeffs().len());
    let scale = a
        .coeffs()
        .iter()
        .chain(b.coeffs())
        .fold(S::one(), |acc, c| if c.magnitude() > acc.magnitude() { c.clone() } else { acc });
    (0..n).all(|k| (a.coeff(k) - b.coeff(k)).is_negligible(&scale))
}

/// Partial fractions of `f` given the factorization of its denominator into
/// `(location, order)` pairs. Each principal part comes from the Taylor
/// expansion of `(z − y)^e f` at `y`.
pub fn partial_fractions<S: Scalar>(
    f: &RationalFunction<S>,
    poles: &[(S, usize)],
) -> Result<PartialFractionForm<S>> {
    for (i, (a, _)) in poles.iter().enumerate() {
        if poles[..i].iter().any(|(b, _)| a.approx_eq(b)) {
            return Err(Error::BadFactorization("repeated pole location".into()));
        }
    }
    if poles.iter().any(|(_, e)| *e == 0) {
        return Err(Error::BadFactorization("pole of order zero".into()));
    }
    let full = Poly::from_roots(poles);
    if !approx_poly_eq(&full, &f.denominator) {
        return Err(Error::BadFactorization(format!(
            "denominator has degree {:?}, pole data gives degree {:?}",
            f.denominator.degree(),
            full.degree()
        )));
    }
    let (q, r) = f.numerator.div_rem(&full);
    let mut pole_terms = Vec::with_capacity(poles.len());
    for (i, (y, e)) in poles.iter().enumerate() {
        let others: Vec<(S, usize)> = poles
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, p)| p.clone())
            .collect();
        let h = Poly::from_roots(&others);
        let series = r.shift(y).series_div(&h.shift(y), *e);
        let coeffs: Vec<S> = (1..=*e).map(|j| series[e - j].clone()).collect();
        pole_terms.push((y.clone(), coeffs));
    }
    Ok(PartialFractionForm { polynomial_part: q, pole_terms })
}

/// Collapses a partial-fraction form back to a single rational function.
pub fn recompose<S: Scalar>(pf: &PartialFractionForm<S>) -> RationalFunction<S> {
    let poles: Vec<(S, usize)> = pf
        .pole_terms
        .iter()
        .map(|(y, a)| (y.clone(), a.len()))
        .collect();
    let den = Poly::from_roots(&poles);
    let mut num = &pf.polynomial_part * &den;
    for (i, (y, a)) in pf.pole_terms.iter().enumerate() {
        let others: Vec<(S, usize)> = poles
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, p)| p.clone())
            .collect();
        let h = Poly::from_roots(&others);
        let e = a.len();
        for (jm1, c) in a.iter().enumerate() {
            // c / (z−y)^j = c (z−y)^(e−j) h / den
            let term = &Poly::linear_root(y).pow(e - (jm1 + 1)) * &h;
            num = &num + &term.scale(c);
        }
    }
    RationalFunction::new(num, den).expect("nonzero denominator")
}
