//! Arbitrary-precision binary floating point.
//!
//! [`Mpf`] wraps an `astro_float::BigFloat` and carries its own precision.
//! Binary operations round to the smaller precision of the two operands.
//! Constants created from nothing (`zero()`, `from_f64`, ...) use the
//! thread-local working precision, which defaults to 256 bits and is changed
//! with [`with_precision`].

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 256;
/// Smallest precision accepted anywhere in the crate.
pub const MIN_PRECISION: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static WORKING_PRECISION: Cell<usize> = const { Cell::new(DEFAULT_PRECISION) };
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// Current thread-local working precision in bits.
pub fn working_precision() -> usize {
    WORKING_PRECISION.with(|p| p.get())
}

/// Runs `f` with the working precision set to `bits` (clamped to at least
/// [`MIN_PRECISION`]), restoring the previous value afterwards.
pub fn with_precision<T>(bits: usize, f: impl FnOnce() -> T) -> T {
    struct Restore(usize);
    impl Drop for Restore {
        fn drop(&mut self) {
            WORKING_PRECISION.with(|p| p.set(self.0));
        }
    }
    let previous = WORKING_PRECISION.with(|p| p.replace(bits.max(MIN_PRECISION)));
    let _restore = Restore(previous);
    f()
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Arbitrary-precision real number.
#[derive(Clone)]
pub struct Mpf(BigFloat);

impl Mpf {
    fn wrap(x: BigFloat) -> Self {
        Mpf(x)
    }

    /// Precision of this value in bits.
    pub fn precision(&self) -> usize {
        match self.0.precision() {
            Some(p) if p > 0 => p,
            _ => working_precision(),
        }
    }

    // Zero carries no mantissa, so it does not constrain the result.
    fn pair_precision(&self, other: &Self) -> usize {
        match (self.0.is_zero(), other.0.is_zero()) {
            (true, false) => other.precision(),
            (false, true) => self.precision(),
            _ => self.precision().min(other.precision()),
        }
    }

    pub fn from_f64_prec(x: f64, bits: usize) -> Self {
        Mpf(BigFloat::from_f64(x, bits))
    }

    pub fn from_i64(x: i64) -> Self {
        Mpf(BigFloat::from_i64(x, working_precision()))
    }

    /// Exact conversion of an integer, rounded to the working precision.
    pub fn from_bigint(n: &BigInt) -> Self {
        let p = working_precision();
        let (sign, digits) = n.to_u64_digits();
        let base = BigFloat::from_u64(u64::MAX, p).add(&BigFloat::from_u64(1, p), p, RM);
        let mut acc = BigFloat::from_u64(0, p);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d, p), p, RM);
        }
        if sign == BigSign::Minus {
            acc = acc.neg();
        }
        Mpf(acc)
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let p = working_precision();
        let num = Self::from_bigint(q.numer());
        let den = Self::from_bigint(q.denom());
        Mpf(num.0.div(&den.0, p, RM))
    }

    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        match self.0.as_raw_parts() {
            Some((words, _, sign, exponent, _)) => {
                let top = match words.last() {
                    Some(w) if *w != 0 => *w,
                    _ => return 0.0,
                };
                let mut v = top as f64 / 18446744073709551616.0;
                if words.len() > 1 {
                    v += words[words.len() - 2] as f64 / 18446744073709551616.0f64.powi(2);
                }
                let v = v * 2f64.powi(exponent.clamp(-1100, 1100));
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
            None => 0.0,
        }
    }

    /// Rounds to the nearest integer and returns it exactly.
    pub fn round_to_bigint(&self) -> BigInt {
        let half = Mpf::from_f64_prec(0.5, self.precision());
        let shifted = if self.is_negative() {
            self.clone() - half
        } else {
            self.clone() + half
        };
        let truncated = shifted.0.int();
        match truncated.as_raw_parts() {
            Some((words, _, sign, exponent, _)) => {
                if truncated.is_zero() {
                    return BigInt::zero();
                }
                let mut mantissa = BigInt::zero();
                for w in words.iter().rev() {
                    mantissa = (mantissa << 64) + BigInt::from(*w);
                }
                let shift = exponent as i64 - 64 * words.len() as i64;
                let value = if shift >= 0 {
                    mantissa << shift as usize
                } else {
                    mantissa >> (-shift) as usize
                };
                if sign == Sign::Neg {
                    -value
                } else {
                    value
                }
            }
            None => BigInt::zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.0.is_nan() || self.0.is_inf())
    }

    pub fn abs(&self) -> Self {
        Mpf(self.0.abs())
    }

    pub fn sqrt(&self) -> Self {
        Mpf(self.0.sqrt(self.precision(), RM))
    }

    pub fn ln(&self) -> Self {
        let p = self.precision();
        with_consts(|cc| Mpf(self.0.ln(p, RM, cc)))
    }

    pub fn exp(&self) -> Self {
        let p = self.precision();
        with_consts(|cc| Mpf(self.0.exp(p, RM, cc)))
    }

    pub fn sin(&self) -> Self {
        let p = self.precision();
        with_consts(|cc| Mpf(self.0.sin(p, RM, cc)))
    }

    pub fn cos(&self) -> Self {
        let p = self.precision();
        with_consts(|cc| Mpf(self.0.cos(p, RM, cc)))
    }

    pub fn atan(&self) -> Self {
        let p = self.precision();
        with_consts(|cc| Mpf(self.0.atan(p, RM, cc)))
    }

    /// Four-quadrant arctangent of `self / x`.
    pub fn atan2(&self, x: &Self) -> Self {
        let y = self;
        let p = y.pair_precision(x);
        let pi = Self::pi_prec(p);
        if x.0.is_zero() {
            if y.0.is_zero() {
                return Mpf::from_f64_prec(0.0, p);
            }
            let half = Mpf(pi.0.div(&BigFloat::from_u64(2, p), p, RM));
            return if y.is_negative() { -half } else { half };
        }
        let base = Mpf(y.0.div(&x.0, p, RM)).atan();
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            base - pi
        } else {
            base + pi
        }
    }

    pub fn pi_prec(bits: usize) -> Self {
        with_consts(|cc| Mpf(cc.pi(bits, RM)))
    }

    /// 2^k at the working precision.
    pub fn pow2(k: i64) -> Self {
        let p = working_precision();
        let mut one = BigFloat::from_u64(1, p);
        one.set_exponent((k + 1) as i32);
        Mpf(one)
    }

    pub fn to_decimal_string(&self) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        with_consts(|cc| {
            self.0
                .format(Radix::Dec, RM, cc)
                .unwrap_or_else(|_| format!("{}", self.to_f64()))
                .replace(".e", "e")
        })
    }

    /// Parses a decimal string such as `-1.25e-3`.
    pub fn parse_decimal(s: &str) -> Option<Self> {
        let p = working_precision();
        let v = with_consts(|cc| BigFloat::parse(s.trim(), Radix::Dec, p, RM, cc));
        if v.is_nan() {
            None
        } else {
            Some(Mpf(v))
        }
    }
}

impl fmt::Debug for Mpf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mpf({:e})", self.to_f64())
    }
}

impl fmt::Display for Mpf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl PartialEq for Mpf {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Mpf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr for Mpf {
            type Output = Mpf;
            fn $method(self, rhs: Mpf) -> Mpf {
                let p = self.pair_precision(&rhs);
                Mpf::wrap(self.0.$method(&rhs.0, p, RM))
            }
        }
        impl<'a> $tr<&'a Mpf> for &'a Mpf {
            type Output = Mpf;
            fn $method(self, rhs: &'a Mpf) -> Mpf {
                let p = self.pair_precision(rhs);
                Mpf::wrap(self.0.$method(&rhs.0, p, RM))
            }
        }
        impl $assign_tr for Mpf {
            fn $assign_method(&mut self, rhs: Mpf) {
                let p = self.pair_precision(&rhs);
                self.0 = self.0.$method(&rhs.0, p, RM);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Rem for Mpf {
    type Output = Mpf;
    fn rem(self, rhs: Mpf) -> Mpf {
        Mpf(self.0.rem(&rhs.0))
    }
}

impl Neg for Mpf {
    type Output = Mpf;
    fn neg(self) -> Mpf {
        Mpf(-self.0)
    }
}

impl Neg for &Mpf {
    type Output = Mpf;
    fn neg(self) -> Mpf {
        Mpf(-&self.0)
    }
}

impl Zero for Mpf {
    fn zero() -> Self {
        Mpf(BigFloat::from_u64(0, working_precision()))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Mpf {
    fn one() -> Self {
        Mpf(BigFloat::from_u64(1, working_precision()))
    }
}

impl Num for Mpf {
    type FromStrRadixErr = &'static str;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err("only decimal input is supported");
        }
        Mpf::parse_decimal(s).ok_or("malformed decimal")
    }
}

impl Signed for Mpf {
    fn abs(&self) -> Self {
        Mpf::abs(self)
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Self::zero()
        } else {
            self.clone() - other.clone()
        }
    }
    fn signum(&self) -> Self {
        if self.0.is_zero() {
            Self::zero()
        } else if self.is_negative() {
            -Self::one()
        } else {
            Self::one()
        }
    }
    fn is_positive(&self) -> bool {
        !self.0.is_zero() && self.0.is_positive()
    }
    fn is_negative(&self) -> bool {
        Mpf::is_negative(self)
    }
}

impl ToPrimitive for Mpf {
    fn to_i64(&self) -> Option<i64> {
        self.round_to_bigint().to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.round_to_bigint().to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(Mpf::to_f64(self))
    }
}
