//! Text form of `k`: bare decimal digits or `0x`-prefixed hex.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{Num, Pow};
use thiserror::Error;

// Below this many digits the schoolbook conversion is faster.
const SPLIT_DIGITS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Base {
    #[default]
    Decimal,
    Hex,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KTextError {
    #[error("no number found")]
    Empty,
    #[error("invalid digit {found:?} at offset {offset}")]
    InvalidDigit { offset: usize, found: char },
    #[error("k file is not valid UTF-8")]
    NotUtf8,
}

pub fn parse_k(text: &str) -> Result<BigUint, KTextError> {
    let trimmed_start = text.len() - text.trim_start().len();
    let body = text.trim();
    let (digits, radix, skip) = match body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
        Some(hex) => (hex, 16, 2),
        None => (body, 10, 0),
    };
    if digits.is_empty() {
        return Err(KTextError::Empty);
    }
    if let Some((i, c)) = digits.char_indices().find(|&(_, c)| !c.is_digit(radix)) {
        return Err(KTextError::InvalidDigit {
            offset: trimmed_start + skip + i,
            found: c,
        });
    }
    if radix == 10 {
        Ok(parse_decimal(digits.as_bytes(), &mut HashMap::new()))
    } else {
        Ok(BigUint::from_str_radix(digits, radix).expect("digits validated"))
    }
}

/// Splits long digit strings in half and recombines as `hi * 10^len(lo) + lo`,
/// so the cost follows big-integer multiplication instead of growing
/// quadratically.
fn parse_decimal(digits: &[u8], powers: &mut HashMap<usize, BigUint>) -> BigUint {
    if digits.len() <= SPLIT_DIGITS {
        let text = std::str::from_utf8(digits).expect("ASCII digits");
        return BigUint::from_str_radix(text, 10).expect("digits validated");
    }
    let low_len = digits.len() / 2;
    let (high, low) = digits.split_at(digits.len() - low_len);
    let high = parse_decimal(high, powers);
    let low = parse_decimal(low, powers);
    let scale = powers
        .entry(low_len)
        .or_insert_with(|| BigUint::from(10u32).pow(low_len as u32));
    high * &*scale + low
}

pub fn parse_k_bytes(bytes: &[u8]) -> Result<BigUint, KTextError> {
    parse_k(std::str::from_utf8(bytes).map_err(|_| KTextError::NotUtf8)?)
}

/// Single line, no separators, no trailing newline.
pub fn emit_k(k: &BigUint, base: Base) -> String {
    match base {
        Base::Decimal => k.to_str_radix(10),
        Base::Hex => format!("0x{}", k.to_str_radix(16)),
    }
}
