//! Exact dyadic rationals `p * 2^q`.
//!
//! Every quantity in the plotted formulas is an integer times a power of
//! two, so this type is closed under everything the evaluator needs: sums,
//! products, scaling by `2^t` with hugely negative `t`, floor and real mod.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

/// `numerator * 2^exponent`, kept canonical: the numerator is odd, or zero
/// with exponent zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigInt,
    exponent: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseDyadicError {
    #[error("empty number")]
    Empty,
    #[error("invalid decimal number {0:?}")]
    Invalid(String),
    #[error("{0} has no finite binary expansion")]
    NotDyadic(String),
}

impl DyadicRational {
    pub fn new(numerator: impl Into<BigInt>, exponent: i64) -> Self {
        let numerator = numerator.into();
        match numerator.trailing_zeros() {
            None => Self::zero(),
            Some(0) => DyadicRational {
                numerator,
                exponent,
            },
            Some(tz) => {
                let exponent = i64::try_from(tz)
                    .ok()
                    .and_then(|tz| exponent.checked_add(tz))
                    .expect("dyadic exponent overflow");
                DyadicRational {
                    numerator: numerator >> tz,
                    exponent,
                }
            }
        }
    }

    pub fn zero() -> Self {
        DyadicRational {
            numerator: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        DyadicRational {
            numerator: BigInt::one(),
            exponent: 0,
        }
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self::new(value, 0)
    }

    /// `2^exponent`.
    pub fn pow2(exponent: i64) -> Self {
        DyadicRational {
            numerator: BigInt::one(),
            exponent,
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent >= 0 || self.is_zero()
    }

    /// `self * 2^shift`, or `None` if the exponent leaves the `i64` range.
    pub fn checked_mul_pow2(&self, shift: i64) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        Some(DyadicRational {
            numerator: self.numerator.clone(),
            exponent: self.exponent.checked_add(shift)?,
        })
    }

    /// # Panics
    /// If the resulting exponent overflows `i64`.
    pub fn mul_pow2(&self, shift: i64) -> Self {
        self.checked_mul_pow2(shift)
            .expect("dyadic exponent overflow")
    }

    /// Greatest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.numerator << self.exponent as u64
        } else {
            // Arithmetic shift rounds toward negative infinity.
            &self.numerator >> self.exponent.unsigned_abs()
        }
    }

    /// `floor(self / d)` for a positive integer `d`.
    ///
    /// # Panics
    /// If `d` is zero.
    pub fn div_floor(&self, d: &BigUint) -> BigInt {
        assert!(!d.is_zero(), "division by zero");
        let d = BigInt::from_biguint(Sign::Plus, d.clone());
        if self.exponent >= 0 {
            self.floor().div_floor(&d)
        } else {
            let scaled = d << self.exponent.unsigned_abs();
            self.numerator.div_floor(&scaled)
        }
    }

    /// `self - d * floor(self / d)`, always in `[0, d)`.
    ///
    /// # Panics
    /// If `d` is zero.
    pub fn mod_real(&self, d: &BigUint) -> Self {
        let quotient = self.div_floor(d);
        let multiple = quotient * BigInt::from_biguint(Sign::Plus, d.clone());
        self - &DyadicRational::from_integer(multiple)
    }

    fn align(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.exponent.min(other.exponent);
        let a = &self.numerator << self.exponent.abs_diff(e);
        let b = &other.numerator << other.exponent.abs_diff(e);
        (a, b, e)
    }
}

impl Default for DyadicRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for DyadicRational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<BigInt> for DyadicRational {
    fn from(v: BigInt) -> Self {
        Self::from_integer(v)
    }
}

impl From<BigUint> for DyadicRational {
    fn from(v: BigUint) -> Self {
        Self::from_integer(BigInt::from(v))
    }
}

impl Add<&DyadicRational> for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.align(rhs);
        DyadicRational::new(a + b, e)
    }
}

impl Sub<&DyadicRational> for &DyadicRational {
    type Output = DyadicRational;

    fn sub(self, rhs: &DyadicRational) -> DyadicRational {
        self + &(-rhs)
    }
}

impl Mul<&DyadicRational> for &DyadicRational {
    type Output = DyadicRational;

    fn mul(self, rhs: &DyadicRational) -> DyadicRational {
        if self.is_zero() || rhs.is_zero() {
            return DyadicRational::zero();
        }
        // Product of odd numerators is odd, so the result is already canonical.
        DyadicRational {
            numerator: &self.numerator * &rhs.numerator,
            exponent: self
                .exponent
                .checked_add(rhs.exponent)
                .expect("dyadic exponent overflow"),
        }
    }
}

impl Neg for &DyadicRational {
    type Output = DyadicRational;

    fn neg(self) -> DyadicRational {
        DyadicRational {
            numerator: -&self.numerator,
            exponent: self.exponent,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for DyadicRational {
            type Output = DyadicRational;
            fn $method(self, rhs: DyadicRational) -> DyadicRational {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for DyadicRational {
    type Output = DyadicRational;

    fn neg(self) -> DyadicRational {
        -&self
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (ls, rs) = (self.numerator.sign(), other.numerator.sign());
        if ls != rs || ls == Sign::NoSign {
            return ls.cmp(&rs);
        }
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Parses plain decimals such as `6.5`, `-0.125` or `17`. Values whose
/// binary expansion does not terminate (`0.1`) are rejected.
impl FromStr for DyadicRational {
    type Err = ParseDyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseDyadicError::Empty);
        }
        let invalid = || ParseDyadicError::Invalid(s.to_string());
        let (negative, body) = match s.as_bytes()[0] {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty())
            || !digits_ok(int_part)
            || !digits_ok(frac_part)
        {
            return Err(invalid());
        }

        let all_digits = format!("{int_part}{frac_part}");
        let mut numerator: BigInt = all_digits.parse().map_err(|_| invalid())?;
        if negative {
            numerator = -numerator;
        }
        let places = frac_part.len() as u32;
        // value = numerator / (2^places * 5^places); dyadic iff 5^places | numerator.
        let five_pow: BigInt = BigInt::from(5u32).pow(places);
        let (quotient, remainder) = numerator.div_rem(&five_pow);
        if !remainder.is_zero() {
            return Err(ParseDyadicError::NotDyadic(s.to_string()));
        }
        Ok(DyadicRational::new(quotient, -i64::from(places)))
    }
}

/// Exact decimal rendering; every dyadic has a terminating expansion.
impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent >= 0 {
            return write!(f, "{}", self.floor());
        }
        let places = self.exponent.unsigned_abs() as u32;
        let scaled = self.numerator.abs() * BigInt::from(5u32).pow(places);
        let digits = scaled.to_string();
        let places = places as usize;
        let padded = if digits.len() <= places {
            format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int_part, frac_part) = padded.split_at(padded.len() - places);
        let sign = if self.numerator.is_negative() {
            "-"
        } else {
            ""
        };
        write!(f, "{sign}{int_part}.{frac_part}")
    }
}
