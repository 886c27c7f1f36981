//! Configurable-precision real scalars.
//!
//! All geometric computations in this crate run on [`Real`], a thin wrapper
//! around an MPFR float. Every value carries its own mantissa precision;
//! binary operations produce results at the larger precision of the two
//! operands. Exact data (lattice coordinates, polynomial coefficients,
//! rational bound exponents) lives in [`rug::Integer`] / [`rug::Rational`]
//! and is only converted to `Real` at the boundary.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Round;
use rug::ops::{CompleteRound, Pow};
use rug::{Float, Integer, Rational};

/// Working precision plus the comparison tolerance derived from it.
///
/// `bits` is the mantissa length of every scalar created through this
/// context. `tol` is the default relative tolerance for equality-of-length
/// style comparisons; it must be strictly positive.
#[derive(Clone, Debug)]
pub struct Precision {
    bits: u32,
    tol: Real,
}

impl Precision {
    /// Minimum allowed mantissa length (hardware double).
    pub const MIN_BITS: u32 = 53;

    /// Context with relative comparison tolerance `2^-tol_log2`.
    pub fn with_tol_log2(bits: u32, tol_log2: u32) -> Self {
        assert!(bits >= Self::MIN_BITS, "mantissa must be at least 53 bits");
        assert!(tol_log2 > 0, "comparison tolerance must be positive");
        let tol = Real(Float::with_val(bits, Float::i_exp(1, -(tol_log2 as i32))));
        Precision { bits, tol }
    }

    pub fn new(bits: u32, tol: Real) -> Self {
        assert!(bits >= Self::MIN_BITS, "mantissa must be at least 53 bits");
        assert!(tol.0.is_sign_positive() && !tol.0.is_zero(), "tolerance must be positive");
        Precision { bits, tol }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn tol(&self) -> &Real {
        &self.tol
    }

    /// Scalar from anything MPFR can assign (integers, floats, rationals).
    pub fn real<T>(&self, v: T) -> Real
    where
        Float: rug::Assign<T>,
    {
        Real(Float::with_val(self.bits, v))
    }

    pub fn zero(&self) -> Real {
        self.real(0)
    }

    pub fn one(&self) -> Real {
        self.real(1)
    }

    pub fn rational(&self, q: &Rational) -> Real {
        Real(Float::with_val(self.bits, q))
    }

    pub fn integer(&self, z: &Integer) -> Real {
        Real(Float::with_val(self.bits, z))
    }

    /// `2^e` exactly.
    pub fn exp2(&self, e: i32) -> Real {
        Real(Float::with_val(self.bits, Float::i_exp(1, e)))
    }

    /// Relative closeness at the context tolerance: `|a-b| <= tol * max(|a|,|b|)`,
    /// with an absolute fallback of `tol` when both values are below 1 in
    /// magnitude is *not* applied; callers comparing quantities that may both
    /// vanish should use [`Precision::close_abs`].
    pub fn close(&self, a: &Real, b: &Real) -> bool {
        a.rel_close(b, &self.tol)
    }

    pub fn close_abs(&self, a: &Real, b: &Real) -> bool {
        (a - b).abs() <= self.tol
    }
}

impl Default for Precision {
    /// 128-bit mantissa, relative comparison tolerance `2^-64`.
    fn default() -> Self {
        Precision::with_tol_log2(128, 64)
    }
}

/// Multiprecision real number. Finite by construction in normal use;
/// ordering panics on NaN, which only arises from invalid operations.
#[derive(Clone)]
pub struct Real(Float);

impl Real {
    pub fn from_float(f: Float) -> Self {
        Real(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn abs(&self) -> Real {
        Real(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Real {
        Real(self.0.clone().sqrt())
    }

    pub fn square(&self) -> Real {
        Real((&self.0 * &self.0).complete(self.0.prec()))
    }

    pub fn recip(&self) -> Real {
        Real(self.0.clone().recip())
    }

    pub fn ln(&self) -> Real {
        Real(self.0.clone().ln())
    }

    pub fn exp(&self) -> Real {
        Real(self.0.clone().exp())
    }

    pub fn powi(&self, e: i32) -> Real {
        Real(self.0.clone().pow(e))
    }

    /// `k`-th root, `k >= 1`; requires a nonnegative base for even `k`.
    pub fn root(&self, k: u32) -> Real {
        Real(self.0.clone().root(k))
    }

    /// `self^(num/den)` for a positive base, exact rational exponent.
    pub fn pow_rational(&self, e: &Rational) -> Real {
        assert!(self.is_positive(), "rational powers need a positive base");
        let num = e.numer();
        let den = e.denom().to_u32().expect("exponent denominator fits u32");
        let p = Real(self.0.clone().pow(num.clone()));
        let r = p.abs().root(den);
        // num odd and base positive keeps everything positive; pow with a
        // negative numerator already yields the reciprocal.
        r
    }

    pub fn min(&self, other: &Real) -> Real {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &Real) -> Real {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Round to the nearest integer (ties away from zero), exact result.
    pub fn round_to_integer(&self) -> Integer {
        self.0
            .clone()
            .round()
            .to_integer()
            .expect("rounding a finite value")
    }

    pub fn floor_to_integer(&self) -> Integer {
        self.0
            .clone()
            .floor()
            .to_integer()
            .expect("flooring a finite value")
    }

    /// Total order; panics on NaN.
    pub fn cmp_total(&self, other: &Real) -> Ordering {
        self.partial_cmp(other).expect("NaN in ordered context")
    }

    /// `|self - other| <= tol * max(|self|, |other|)`.
    pub fn rel_close(&self, other: &Real, tol: &Real) -> bool {
        let diff = (self - other).abs();
        let scale = self.abs().max(&other.abs());
        diff <= tol * &scale
    }

    /// Deterministic decimal rendering with a fixed number of significant
    /// digits; used for structured reports.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        let (sign, mantissa, exp) =
            self.0.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
        let s = if sign { "-" } else { "" };
        match exp {
            Some(e) => format!("{}0.{}e{}", s, mantissa, e),
            None => format!("{}{}", s, mantissa),
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = f.precision() {
            write!(f, "{:.*}", p, self.0)
        } else {
            write!(f, "{}", self.to_decimal(12))
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

fn join_prec(a: &Real, b: &Real) -> u32 {
    a.0.prec().max(b.0.prec())
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                Real((&self.0).$method(&rhs.0).complete(join_prec(self, rhs)))
            }
        }
        impl $trait for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real((-&self.0).complete(self.0.prec()))
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

macro_rules! assignop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Real> for Real {
            fn $method(&mut self, rhs: &Real) {
                if rhs.0.prec() > self.0.prec() {
                    self.0.set_prec(rhs.0.prec());
                }
                self.0.$method(&rhs.0);
            }
        }
        impl $trait<Real> for Real {
            fn $method(&mut self, rhs: Real) {
                self.$method(&rhs);
            }
        }
    };
}

assignop!(AddAssign, add_assign);
assignop!(SubAssign, sub_assign);
assignop!(MulAssign, mul_assign);
assignop!(DivAssign, div_assign);

/// Sum at the precision of the addends; zero-length input is an error at the
/// call site, which must supply the context.
pub fn sum<'a, I: IntoIterator<Item = &'a Real>>(prec: &Precision, iter: I) -> Real {
    let mut acc = prec.zero();
    for x in iter {
        acc += x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_propagates_upward() {
        let lo = Precision::with_tol_log2(64, 30);
        let hi = Precision::default();
        let x = lo.real(3);
        let y = hi.real(5);
        assert_eq!((&x + &y).prec(), 128);
        assert_eq!((&x * &x).prec(), 64);
    }

    #[test]
    fn rational_powers_are_roots() {
        let p = Precision::default();
        let x = p.real(8);
        let e = Rational::from((2, 3));
        let got = x.pow_rational(&e);
        assert!(got.rel_close(&p.real(4), p.tol()));
        let einv = Rational::from((-1, 2));
        let got = p.real(4).pow_rational(&einv);
        assert!(got.rel_close(&p.real(0.5), p.tol()));
    }

    #[test]
    fn rounding_is_exact_on_integers() {
        let p = Precision::default();
        assert_eq!(p.real(7).round_to_integer(), Integer::from(7));
        assert_eq!(p.real(-2.5).round_to_integer(), Integer::from(-3));
        assert_eq!(p.real(2.4).round_to_integer(), Integer::from(2));
    }

    #[test]
    fn decimal_rendering_is_deterministic() {
        let p = Precision::default();
        let x = p.real(2).sqrt();
        assert_eq!(x.to_decimal(20), x.clone().to_decimal(20));
        assert!(x.to_decimal(20).starts_with("0.14142135623730950488"));
    }

    #[test]
    fn default_tolerance_is_2_pow_minus_64() {
        let p = Precision::default();
        assert_eq!(p.tol().to_f64(), 2f64.powi(-64));
        assert!(p.bits() >= Precision::MIN_BITS);
    }
}
