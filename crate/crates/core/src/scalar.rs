//! Scalar abstractions shared by the whole crate.
//!
//! [`Real`] is the floating-point layer (`f64` or [`Mpf`]); numeric complex
//! values are `Complex<R>` for some `R: Real`. [`Scalar`] is the coefficient
//! field for polynomials and configurations: it is implemented both for the
//! exact fields (`BigRational`, Gaussian rationals) and for `Complex<R>`.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::mpf::{working_precision, Mpf};

/// Exact Gaussian rational `a + b i` with `a, b ∈ Q`.
pub type GaussRat = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gauss(re: BigRational, im: BigRational) -> GaussRat {
    Complex::new(re, im)
}

/// Real Gaussian rational `n/d`.
pub fn gq(n: i64, d: i64) -> GaussRat {
    Complex::new(rat(n, d), BigRational::zero())
}

/// Floating-point real numbers.
pub trait Real:
    Clone + Debug + Display + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_f64(x: f64) -> Self;
    fn from_i64(x: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn pi() -> Self;
    /// Unit roundoff at the precision new values are created with.
    fn epsilon() -> Self;
    fn precision_bits() -> usize;
    fn round_to_bigint(&self) -> BigInt;
    fn to_decimal_string(&self) -> String;
    fn parse_decimal(s: &str) -> Option<Self>;
    fn to_mpf(&self) -> Mpf;
    fn from_mpf(x: &Mpf) -> Self;

    fn two_pi() -> Self {
        Self::pi() * Self::from_i64(2)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_i64(x: i64) -> Self {
        x as f64
    }
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn precision_bits() -> usize {
        53
    }
    fn round_to_bigint(&self) -> BigInt {
        BigInt::from(self.round() as i64)
    }
    fn to_decimal_string(&self) -> String {
        format!("{:e}", self)
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
    fn to_mpf(&self) -> Mpf {
        Mpf::from_f64_prec(*self, working_precision())
    }
    fn from_mpf(x: &Mpf) -> Self {
        x.to_f64()
    }
}

impl Real for Mpf {
    fn from_f64(x: f64) -> Self {
        Mpf::from_f64_prec(x, working_precision())
    }
    fn from_i64(x: i64) -> Self {
        Mpf::from_i64(x)
    }
    fn from_rational(q: &BigRational) -> Self {
        Mpf::from_rational(q)
    }
    fn to_f64(&self) -> f64 {
        Mpf::to_f64(self)
    }
    fn abs(&self) -> Self {
        Mpf::abs(self)
    }
    fn sqrt(&self) -> Self {
        Mpf::sqrt(self)
    }
    fn ln(&self) -> Self {
        Mpf::ln(self)
    }
    fn exp(&self) -> Self {
        Mpf::exp(self)
    }
    fn sin(&self) -> Self {
        Mpf::sin(self)
    }
    fn cos(&self) -> Self {
        Mpf::cos(self)
    }
    fn atan2(&self, x: &Self) -> Self {
        Mpf::atan2(self, x)
    }
    fn pi() -> Self {
        Mpf::pi_prec(working_precision())
    }
    fn epsilon() -> Self {
        Mpf::pow2(-(working_precision() as i64))
    }
    fn precision_bits() -> usize {
        working_precision()
    }
    fn round_to_bigint(&self) -> BigInt {
        Mpf::round_to_bigint(self)
    }
    fn to_decimal_string(&self) -> String {
        Mpf::to_decimal_string(self)
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        Mpf::parse_decimal(s)
    }
    fn to_mpf(&self) -> Mpf {
        self.clone()
    }
    fn from_mpf(x: &Mpf) -> Self {
        x.clone()
    }
}

/// Transcendental helpers on `Complex<R>` (num-complex only provides them for
/// `Float` types, which excludes big floats).
pub trait ComplexExt<R: Real>: Sized {
    fn abs(&self) -> R;
    fn norm_sq(&self) -> R;
    fn arg(&self) -> R;
    /// Principal logarithm, imaginary part in (-π, π].
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    /// Principal square root.
    fn sqrt(&self) -> Self;
    fn scale_by(&self, s: &R) -> Self;
    fn polar(r: &R, theta: &R) -> Self;
    fn two_pi_i() -> Self;
}

impl<R: Real> ComplexExt<R> for Complex<R> {
    fn abs(&self) -> R {
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let t = small / big.clone();
        big * (R::one() + t.clone() * t).sqrt()
    }
    fn norm_sq(&self) -> R {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
    fn arg(&self) -> R {
        self.im.atan2(&self.re)
    }
    fn ln(&self) -> Self {
        Complex::new(ComplexExt::abs(self).ln(), self.arg())
    }
    fn exp(&self) -> Self {
        let m = self.re.exp();
        Complex::new(m.clone() * self.im.cos(), m * self.im.sin())
    }
    fn sqrt(&self) -> Self {
        let r = ComplexExt::abs(self);
        if r.is_zero() {
            return Complex::new(R::zero(), R::zero());
        }
        let two = R::from_i64(2);
        let re = ((r.clone() + self.re.clone()) / two.clone()).sqrt();
        let im_mag = ((r - self.re.clone()) / two).sqrt();
        let im = if self.im < R::zero() { -im_mag } else { im_mag };
        Complex::new(re, im)
    }
    fn scale_by(&self, s: &R) -> Self {
        Complex::new(self.re.clone() * s.clone(), self.im.clone() * s.clone())
    }
    fn polar(r: &R, theta: &R) -> Self {
        Complex::new(r.clone() * theta.cos(), r.clone() * theta.sin())
    }
    fn two_pi_i() -> Self {
        Complex::new(R::zero(), R::two_pi())
    }
}

/// Coefficient field for polynomials, rational functions, configurations and
/// matrices. Exact fields decide equality exactly; numeric fields use a
/// precision-dependent relative tolerance.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync {
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;
    fn from_gauss(q: &GaussRat) -> Self;
    /// Approximate magnitude, used only to choose pivots.
    fn magnitude(&self) -> f64;
    /// Whether `self` is zero relative to the size of `reference`.
    fn is_negligible(&self, reference: &Self) -> bool;
    fn to_complex<R: Real>(&self) -> Complex<R>;
    /// Rank of a dense matrix given by rows.
    fn matrix_rank(rows: &[Vec<Self>]) -> usize {
        crate::linalg::rank_by_elimination(rows)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let diff = self.clone() - other.clone();
        let reference = if self.magnitude() >= other.magnitude() {
            self
        } else {
            other
        };
        diff.is_negligible(reference)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_gauss(q: &GaussRat) -> Self {
        q.re.clone()
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::MAX)
    }
    fn is_negligible(&self, _reference: &Self) -> bool {
        self.is_zero()
    }
    fn to_complex<R: Real>(&self) -> Complex<R> {
        Complex::new(R::from_rational(self), R::zero())
    }
}

impl Scalar for GaussRat {
    const EXACT: bool = true;
    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn from_gauss(q: &GaussRat) -> Self {
        q.clone()
    }
    fn magnitude(&self) -> f64 {
        let re = self.re.abs().to_f64().unwrap_or(f64::MAX);
        let im = self.im.abs().to_f64().unwrap_or(f64::MAX);
        re.max(im)
    }
    fn is_negligible(&self, _reference: &Self) -> bool {
        self.is_zero()
    }
    fn to_complex<R: Real>(&self) -> Complex<R> {
        Complex::new(R::from_rational(&self.re), R::from_rational(&self.im))
    }
}

/// Relative tolerance used for numeric zero tests: ε^(3/4).
pub fn numeric_tolerance<R: Real>() -> R {
    let bits = R::precision_bits() as i64;
    let e = -(bits * 3) / 4;
    R::from_f64(2f64).pow_i64(e)
}

trait PowI64 {
    fn pow_i64(self, e: i64) -> Self;
}

impl<R: Real> PowI64 for R {
    fn pow_i64(self, e: i64) -> Self {
        let (mut base, mut k) = if e < 0 {
            (R::one() / self, (-e) as u64)
        } else {
            (self, e as u64)
        };
        let mut acc = R::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }
}

impl<R: Real> Scalar for Complex<R> {
    const EXACT: bool = false;
    fn from_i64(n: i64) -> Self {
        Complex::new(R::from_i64(n), R::zero())
    }
    fn from_gauss(q: &GaussRat) -> Self {
        q.to_complex()
    }
    fn magnitude(&self) -> f64 {
        self.re.to_f64().abs().max(self.im.to_f64().abs())
    }
    fn is_negligible(&self, reference: &Self) -> bool {
        let scale = ComplexExt::abs(reference).max_of(R::one());
        ComplexExt::abs(self) <= numeric_tolerance::<R>() * scale
    }
    fn to_complex<T: Real>(&self) -> Complex<T> {
        Complex::new(T::from_mpf(&self.re.to_mpf()), T::from_mpf(&self.im.to_mpf()))
    }
    fn matrix_rank(rows: &[Vec<Self>]) -> usize {
        crate::linalg::numeric_rank(rows, &R::from_f64(crate::linalg::RANK_TOLERANCE))
    }
}

/// Converts a complex number with a rational real and imaginary part.
pub fn gauss_to_complex<R: Real>(q: &GaussRat) -> Complex<R> {
    q.to_complex()
}

pub fn is_real_rational(q: &GaussRat) -> bool {
    q.im.is_zero()
}

pub fn gauss_is_one(q: &GaussRat) -> bool {
    q.is_one()
}

/// Parses `"p/q"`, an integer, or a decimal such as `-1.25e-3` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let shift = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if shift >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-shift) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// The exact rational value of a finite [`Mpf`].
pub fn mpf_to_rational(x: &Mpf) -> BigRational {
    parse_rational(&x.to_decimal_string()).unwrap_or_else(BigRational::zero)
}

/// Best rational approximation with denominator at most `max_den` (by
/// continued fractions), accepted only if it is within `tol` of `x`.
pub fn recognize_rational(x: &Mpf, max_den: u64, tol: &Mpf) -> Option<BigRational> {
    let max_den = BigInt::from(max_den);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut y = x.clone();
    let mut best: Option<BigRational> = None;
    for _ in 0..64 {
        let a = floor_mpf(&y);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > max_den {
            break;
        }
        let cand = BigRational::new(h2.clone(), k2.clone());
        let err = (Mpf::from_rational(&cand) - x.clone()).abs();
        best = Some(cand);
        if err <= *tol {
            return best;
        }
        let frac = y.clone() - Mpf::from_bigint(&a);
        if frac.is_zero() {
            break;
        }
        y = Mpf::from_i64(1) / frac;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    best.filter(|q| (Mpf::from_rational(q) - x.clone()).abs() <= *tol)
}

fn floor_mpf(x: &Mpf) -> BigInt {
    let r = x.round_to_bigint();
    if Mpf::from_bigint(&r) > *x {
        r - BigInt::one()
    } else {
        r
    }
}
