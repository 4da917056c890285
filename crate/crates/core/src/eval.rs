//! Literal evaluation of the plotted formulas in exact dyadic arithmetic.
//!
//! This path never looks at bits of `k` directly: it computes
//! `floor(mod(floor(x_n / R) * 2^E, 2))` exactly as written, which makes it
//! an independent check of the bit-test decoder in [`crate::codec`].
//!
//! The two facts it rests on are checkable on their own: the floor/mod split
//! of `x_n` ([`check_floor_mod_split`]) and bit extraction by
//! `floor(mod(alpha, 2))` ([`bit_extract`]).

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::codec::EncodedNumber;
use crate::dyadic::DyadicRational;
use crate::params::{GridParams, ParamsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("exponent {0} appears more than once")]
    DuplicateExponent(i64),
    #[error("point has {actual} coordinates, grid has {expected} dimensions")]
    Arity { expected: usize, actual: usize },
    #[error(transparent)]
    Params(#[from] ParamsError),
}

/// A real point `(x_1, ..., x_n)` with exact dyadic coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SamplePoint {
    coords: Vec<DyadicRational>,
}

impl SamplePoint {
    pub fn new(coords: Vec<DyadicRational>) -> Self {
        SamplePoint { coords }
    }

    pub fn coords(&self) -> &[DyadicRational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// The point `cell + offset` inside the window at height `k`: every
    /// coordinate is the cell index plus its offset, and the last one is
    /// additionally shifted up by `k`.
    pub fn in_cell(cell: &[u64], offsets: &[DyadicRational], k: &BigUint) -> Self {
        let last = cell.len().saturating_sub(1);
        let coords = cell
            .iter()
            .zip(offsets)
            .enumerate()
            .map(|(axis, (&c, off))| {
                let mut base = BigInt::from(c);
                if axis == last {
                    base += BigInt::from_biguint(Sign::Plus, k.clone());
                }
                &DyadicRational::from_integer(base) + off
            })
            .collect();
        SamplePoint { coords }
    }

    /// The center of `cell`, offset `1/2` along every axis.
    pub fn cell_center(cell: &[u64], k: &BigUint) -> Self {
        let half = vec![DyadicRational::pow2(-1); cell.len()];
        Self::in_cell(cell, &half, k)
    }
}

/// Builds `alpha = sum 2^(n_i)` over distinct exponents and returns
/// whether `1/2 < floor(mod(alpha, 2))`.
pub fn bit_extract(exponents: &[i64]) -> Result<bool, EvalError> {
    let mut seen = HashSet::with_capacity(exponents.len());
    if let Some(&dup) = exponents.iter().find(|&&e| !seen.insert(e)) {
        return Err(EvalError::DuplicateExponent(dup));
    }
    let alpha = exponents.iter().fold(DyadicRational::zero(), |acc, &e| {
        &acc + &DyadicRational::pow2(e)
    });
    let two = BigUint::from(2u32);
    Ok(exceeds_half(&DyadicRational::from_integer(
        alpha.mod_real(&two).floor(),
    )))
}

/// The predicate form `1/2 < value`.
pub fn exceeds_half(value: &DyadicRational) -> bool {
    *value > DyadicRational::pow2(-1)
}

/// Outcome of the floor/mod split of `x_n` for a point inside the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FloorModSplit {
    /// `floor(x_n / R) == k / R`.
    pub quotient_matches: bool,
    /// `mod(floor(x_n), R) == floor(x_n - k)`.
    pub residue_matches: bool,
}

impl FloorModSplit {
    pub fn holds(self) -> bool {
        self.quotient_matches && self.residue_matches
    }
}

/// Checks both identities of the floor/mod split when `x_n - k` lies in
/// `[0, A_n)`; returns `None` outside that window. Only meaningful for `k`
/// divisible by `R`, which every encoded `k` is.
pub fn check_floor_mod_split(
    params: &GridParams,
    k: &BigUint,
    x_n: &DyadicRational,
) -> Option<FloorModSplit> {
    let k_signed = BigInt::from_biguint(Sign::Plus, k.clone());
    let offset = x_n - &DyadicRational::from_integer(k_signed.clone());
    let a_n = i64::from(*params.dims().last()?);
    if offset < DyadicRational::zero() || offset >= DyadicRational::from(a_n) {
        return None;
    }
    let radix = BigInt::from(params.radix());
    let quotient_matches = x_n.div_floor(&BigUint::from(params.radix())) * &radix == k_signed;
    let residue = mod_floor_int(&x_n.floor(), &radix);
    let residue_matches = residue == offset.floor();
    Some(FloorModSplit {
        quotient_matches,
        residue_matches,
    })
}

fn mod_floor_int(v: &BigInt, d: &BigInt) -> BigInt {
    num_integer::Integer::mod_floor(v, d)
}

/// `f_i(x_1, ..., x_n)` evaluated literally; the result is exactly 0 or 1.
///
/// Points outside the plotting window are evaluated as written. For points
/// inside it, the floor/mod split of `x_n` is asserted in debug builds.
pub fn eval_f(
    params: &GridParams,
    enc: &EncodedNumber,
    point: &SamplePoint,
    color: u32,
) -> Result<DyadicRational, EvalError> {
    let n = params.n();
    if point.len() != n {
        return Err(EvalError::Arity {
            expected: n,
            actual: point.len(),
        });
    }
    params.check_color(color)?;

    let radix = BigInt::from(params.radix());
    let x_n = &point.coords[n - 1];

    // E = -(R^n floor(x_1) + ... + R^2 floor(x_{n-1}) + R mod(floor(x_n), R) + i)
    let mut weight = radix.clone();
    let mut exponent = BigInt::from(color) + &radix * mod_floor_int(&x_n.floor(), &radix);
    for x in point.coords[..n - 1].iter().rev() {
        weight *= &radix;
        exponent += &weight * x.floor();
    }
    let exponent = -exponent;

    let base = x_n.div_floor(&BigUint::from(params.radix()));

    if cfg!(debug_assertions) {
        if let Some(split) = check_floor_mod_split(params, enc.k(), x_n) {
            if enc.k() % params.radix() == BigUint::zero() {
                debug_assert!(split.holds(), "floor/mod split failed at x_n = {x_n}");
            }
        }
    }

    Ok(floor_mod2_scaled(
        &DyadicRational::from_integer(base),
        &exponent,
    ))
}

/// `floor(mod(base * 2^exponent, 2))` as a dyadic 0 or 1.
fn floor_mod2_scaled(base: &DyadicRational, exponent: &BigInt) -> DyadicRational {
    let two = BigUint::from(2u32);
    match exponent.to_i64().and_then(|e| base.checked_mul_pow2(e)) {
        Some(t) => DyadicRational::from_integer(t.mod_real(&two).floor()),
        None => {
            // The scaled exponent left the i64 range. Far below zero the
            // product is a tiny fraction of either sign, far above it is an
            // even integer.
            let tiny_negative = exponent.is_negative() && base.numerator().is_negative();
            if tiny_negative {
                DyadicRational::one()
            } else {
                DyadicRational::zero()
            }
        }
    }
}

/// Right-hand side of the classic 106x17 inequality:
/// `floor(mod(floor(y / 17) * 2^(-17 floor(x) - mod(floor(y), 17)), 2))`.
pub fn eval_classic(x: &DyadicRational, y: &DyadicRational) -> DyadicRational {
    let seventeen = BigInt::from(17u32);
    let base = y.div_floor(&BigUint::from(17u32));
    let exponent = -(&seventeen * x.floor() + mod_floor_int(&y.floor(), &seventeen));
    floor_mod2_scaled(&DyadicRational::from_integer(base), &exponent)
}
