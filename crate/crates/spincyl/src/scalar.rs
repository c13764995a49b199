//! Scalar abstraction: exact Gaussian rationals and complex doubles.
//!
//! Every algebraic engine in this crate is generic over [`Scalar`]. The
//! [`Exact`] instantiation (complex numbers with `BigRational` parts) is the
//! certification path: a residual passes only if it is identically zero.
//! [`Cf64`] is the floating path used by the flow integrator and by
//! float-mode verification, where "zero" means below a tolerance.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Exact real rational number.
pub type Rational = BigRational;

/// Exact Gaussian rational: `re + im·i` with arbitrary-precision rational parts.
pub type Exact = Complex<BigRational>;

/// Complex double, the float-mode scalar.
pub type Cf64 = Complex<f64>;

/// Field of scalars the verification engines run over.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// True for the exact-arithmetic instantiation.
    fn exact_mode() -> bool;

    /// The imaginary unit.
    fn i() -> Self;

    fn from_int(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Build from exact rational real and imaginary parts.
    fn from_rational_pair(re: &Rational, im: &Rational) -> Self;

    /// Approximate magnitude `|re| + |im|`, for reporting and float pivoting.
    fn magnitude(&self) -> f64;

    /// Complex conjugate.
    fn conj(&self) -> Self;

    /// Mode-appropriate zero test: exact scalars ignore the tolerance.
    fn check_zero(&self, tol: f64) -> bool {
        if Self::exact_mode() {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }

    /// `i^k` for any integer exponent.
    fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar for Exact {
    fn exact_mode() -> bool {
        true
    }

    fn i() -> Self {
        Complex::new(big(0), big(1))
    }

    fn from_int(n: i64) -> Self {
        Complex::new(big(n), big(0))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            big(0),
        )
    }

    fn from_rational_pair(re: &Rational, im: &Rational) -> Self {
        Complex::new(re.clone(), im.clone())
    }

    fn magnitude(&self) -> f64 {
        let part = |r: &BigRational| r.abs().to_f64().unwrap_or(f64::INFINITY);
        part(&self.re) + part(&self.im)
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
}

impl Scalar for Cf64 {
    fn exact_mode() -> bool {
        false
    }

    fn i() -> Self {
        Complex::new(0.0, 1.0)
    }

    fn from_int(n: i64) -> Self {
        Complex::new(n as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(num as f64 / den as f64, 0.0)
    }

    fn from_rational_pair(re: &Rational, im: &Rational) -> Self {
        Complex::new(
            re.to_f64().unwrap_or(f64::NAN),
            im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn magnitude(&self) -> f64 {
        self.re.abs() + self.im.abs()
    }

    fn conj(&self) -> Self {
        Complex::new(self.re, -self.im)
    }
}

/// Parse an exact rational from the model-file form `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => {
            let n: BigInt = text.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// Render an exact rational in the model-file form.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
