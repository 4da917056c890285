//! Color field <-> encoding constant `k`.
//!
//! `k = R * N`, where bit `bit_index(cell, j)` of `N` is set exactly when
//! `cell` belongs to `S_j`. Decoding reads the same bits back from
//! `floor(k / R)`, which is meaningful for any natural `k`, not only for the
//! ones produced by [`encode`].

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::field::ColorField;
use crate::params::{GridParams, ParamsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("cell {cell:?} carries several colors {colors:?}")]
    MultiColor { cell: Vec<u64>, colors: Vec<u32> },
}

/// The natural number `k` together with the grid it is read against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedNumber {
    k: BigUint,
    quotient: BigUint,
    params: GridParams,
}

impl EncodedNumber {
    /// Wraps an arbitrary natural `k`; it need not be a multiple of `R`.
    pub fn new(k: BigUint, params: GridParams) -> Self {
        let quotient = &k / params.radix();
        EncodedNumber {
            k,
            quotient,
            params,
        }
    }

    pub fn k(&self) -> &BigUint {
        &self.k
    }

    /// `floor(k / R)`, the number whose bits are the cell/color indicators.
    pub fn quotient(&self) -> &BigUint {
        &self.quotient
    }

    pub fn params(&self) -> &GridParams {
        &self.params
    }

    pub fn into_k(self) -> BigUint {
        self.k
    }
}

/// Builds `k` by setting one bit of `N` per painted cell, then multiplying
/// by `R` once.
pub fn encode(field: &ColorField) -> EncodedNumber {
    let params = field.params();
    let bits: Vec<u64> = field
        .painted()
        .map(|(cell, color)| params.bit_index_unchecked(&cell, color).value())
        .collect();
    let quotient = from_bits(&bits);
    let k = &quotient * params.radix();
    EncodedNumber {
        k,
        quotient,
        params: params.clone(),
    }
}

fn from_bits(bits: &[u64]) -> BigUint {
    let Some(&top) = bits.iter().max() else {
        return BigUint::zero();
    };
    let mut words = vec![0u32; (top / 32 + 1) as usize];
    for &b in bits {
        words[(b / 32) as usize] |= 1 << (b % 32);
    }
    BigUint::from_slice(&words)
}

/// Positions of the set bits of `value`, ascending.
pub fn set_bits(value: &BigUint) -> impl Iterator<Item = u64> + '_ {
    value
        .iter_u64_digits()
        .enumerate()
        .flat_map(|(w, mut word)| {
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let tz = word.trailing_zeros();
                word &= word - 1;
                Some(w as u64 * 64 + u64::from(tz))
            })
        })
}

/// Whether bit `bit_index(cell, color)` of `floor(k / R)` is set.
pub fn decode_cell(enc: &EncodedNumber, cell: &[u64], color: u32) -> Result<bool, CodecError> {
    let bit = enc.params.bit_index(cell, color)?;
    Ok(enc.quotient.bit(bit.value()))
}

/// Per-cell color sets recovered from `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedField {
    params: GridParams,
    colors: Vec<Vec<u32>>,
}

impl DecodedField {
    pub fn params(&self) -> &GridParams {
        &self.params
    }

    /// Colors of the cell at row-major position `index`, ascending.
    pub fn colors_at(&self, index: usize) -> &[u32] {
        &self.colors[index]
    }

    pub fn colors(&self, cell: &[u64]) -> Result<&[u32], ParamsError> {
        self.params.check_cell(cell)?;
        Ok(&self.colors[self.params.linear_index(cell)])
    }

    /// First cell carrying more than one color, if any.
    pub fn first_conflict(&self) -> Option<(Vec<u64>, &[u32])> {
        self.colors
            .iter()
            .position(|c| c.len() > 1)
            .map(|i| (self.params.cell_at(i), self.colors[i].as_slice()))
    }

    /// Maps each cell to its single color (0 when empty); fails on the
    /// first multi-color cell.
    pub fn to_field(&self) -> Result<ColorField, CodecError> {
        if let Some((cell, colors)) = self.first_conflict() {
            return Err(CodecError::MultiColor {
                cell,
                colors: colors.to_vec(),
            });
        }
        Ok(self.to_field_layered())
    }

    /// Maps each cell to its smallest color (0 when empty).
    pub fn to_field_layered(&self) -> ColorField {
        let cells = self
            .colors
            .iter()
            .map(|c| c.first().copied().unwrap_or(0))
            .collect();
        ColorField::from_cells_unchecked(self.params.clone(), cells)
    }
}

/// Reads every (cell, color) bit of `floor(k / R)`.
pub fn decode_field(enc: &EncodedNumber) -> DecodedField {
    let params = &enc.params;
    let colors = params
        .cells()
        .map(|cell| {
            (1..=params.m())
                .filter(|&j| {
                    enc.quotient
                        .bit(params.bit_index_unchecked(&cell, j).value())
                })
                .collect()
        })
        .collect();
    DecodedField {
        params: params.clone(),
        colors,
    }
}

/// Structural checks on `k`; [`encode`] output always passes all three.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// `R` divides `k`.
    pub divisible: bool,
    /// Every set bit of `floor(k / R)` has residue mod `R` in `1..=m`.
    pub residues_in_range: bool,
    /// Every set bit's spatial base-`R` digits name a cell inside the grid.
    pub digits_in_range: bool,
    /// Lowest set bit failing either bit-level check.
    pub first_bad_bit: Option<u64>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.divisible && self.residues_in_range && self.digits_in_range
    }
}

pub fn validate_encoded(enc: &EncodedNumber) -> ValidationReport {
    let params = &enc.params;
    let radix = params.radix();
    let divisible = enc.k.is_multiple_of(&BigUint::from(radix));

    let mut residues_in_range = true;
    let mut digits_in_range = true;
    let mut first_bad_bit = None;
    for bit in set_bits(&enc.quotient) {
        let residue = bit % radix;
        let residue_ok = residue >= 1 && residue <= u64::from(params.m());
        let digits_ok = spatial_digits_in_range(params, bit / radix);
        residues_in_range &= residue_ok;
        digits_in_range &= digits_ok;
        if !(residue_ok && digits_ok) && first_bad_bit.is_none() {
            first_bad_bit = Some(bit);
        }
        if !residues_in_range && !digits_in_range {
            break;
        }
    }

    ValidationReport {
        divisible,
        residues_in_range,
        digits_in_range,
        first_bad_bit,
    }
}

fn spatial_digits_in_range(params: &GridParams, mut spatial: u64) -> bool {
    for &a in params.dims().iter().rev() {
        if spatial % params.radix() >= u64::from(a) {
            return false;
        }
        spatial /= params.radix();
    }
    spatial == 0
}
