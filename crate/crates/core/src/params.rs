//! Grid parameters and the bit layout of the encoding constant.
//!
//! A grid is described by its dimension count `n`, its color count `m` and
//! the extents `A_1..A_n`. Every (cell, color) pair maps to one bit of
//! `N = k / R`, where the radix `R = A_1 + ... + A_n + m`. The bit index is
//! the base-`R` number whose digits are `(m_1, ..., m_n, j)`, most
//! significant first.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("expected {expected} extents, got {actual}")]
    DimensionCount { expected: usize, actual: usize },
    #[error("the construction requires n >= 2 dimensions, got n = {0}")]
    TooFewDimensions(usize),
    #[error("color count must be at least 1")]
    NoColors,
    #[error("extent A_{axis} must be positive")]
    EmptyAxis { axis: usize },
    #[error("grid is too large: the highest bit index does not fit in 64 bits")]
    TooLarge,
    #[error("cell {cell:?} lies outside the grid {dims:?}")]
    CellOutOfRange { cell: Vec<u64>, dims: Vec<u32> },
    #[error("color {color} is outside 1..={m}")]
    ColorOutOfRange { color: u32, m: u32 },
}

/// `(n, m, A_1..A_n)` together with the derived radix `R`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridParams {
    m: u32,
    dims: Vec<u32>,
    radix: u64,
    // Highest bit index any valid (cell, color) can occupy.
    max_bit: u64,
}

/// Position of one (cell, color) indicator bit inside `N = k / R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitIndex(u64);

impl BitIndex {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for BitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl GridParams {
    /// Validates `(n, m, dims)` and derives the radix.
    pub fn new(n: usize, m: u32, dims: &[u32]) -> Result<Self, ParamsError> {
        if dims.len() != n {
            return Err(ParamsError::DimensionCount {
                expected: n,
                actual: dims.len(),
            });
        }
        if n < 2 {
            return Err(ParamsError::TooFewDimensions(n));
        }
        if m == 0 {
            return Err(ParamsError::NoColors);
        }
        if let Some(axis) = dims.iter().position(|&a| a == 0) {
            return Err(ParamsError::EmptyAxis { axis: axis + 1 });
        }

        let radix = dims
            .iter()
            .try_fold(u64::from(m), |acc, &a| acc.checked_add(u64::from(a)))
            .ok_or(ParamsError::TooLarge)?;

        // Horner evaluation of the largest digit tuple (A_1-1, ..., A_n-1, m).
        let max_bit = dims
            .iter()
            .map(|&a| u64::from(a - 1))
            .chain(std::iter::once(u64::from(m)))
            .try_fold(0u64, |acc, digit| {
                acc.checked_mul(radix)?.checked_add(digit)
            })
            .ok_or(ParamsError::TooLarge)?;

        Ok(GridParams {
            m,
            dims: dims.to_vec(),
            radix,
            max_bit,
        })
    }

    /// Shorthand for [`GridParams::new`] taking `n` from the extent list.
    pub fn from_dims(m: u32, dims: &[u32]) -> Result<Self, ParamsError> {
        Self::new(dims.len(), m, dims)
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    /// `R = A_1 + ... + A_n + m`.
    pub fn radix(&self) -> u64 {
        self.radix
    }

    pub fn max_bit(&self) -> BitIndex {
        BitIndex(self.max_bit)
    }

    /// Number of lattice cells, `A_1 * ... * A_n`.
    pub fn cell_count(&self) -> usize {
        self.dims.iter().map(|&a| a as usize).product()
    }

    pub fn contains(&self, cell: &[u64]) -> bool {
        cell.len() == self.n() && cell.iter().zip(&self.dims).all(|(&c, &a)| c < u64::from(a))
    }

    pub fn check_cell(&self, cell: &[u64]) -> Result<(), ParamsError> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(ParamsError::CellOutOfRange {
                cell: cell.to_vec(),
                dims: self.dims.clone(),
            })
        }
    }

    pub fn check_color(&self, color: u32) -> Result<(), ParamsError> {
        if (1..=self.m).contains(&color) {
            Ok(())
        } else {
            Err(ParamsError::ColorOutOfRange { color, m: self.m })
        }
    }

    /// `R^n m_1 + R^(n-1) m_2 + ... + R m_n + j`.
    pub fn bit_index(&self, cell: &[u64], color: u32) -> Result<BitIndex, ParamsError> {
        self.check_cell(cell)?;
        self.check_color(color)?;
        Ok(self.bit_index_unchecked(cell, color))
    }

    /// Same as [`GridParams::bit_index`] for inputs already known to be valid.
    /// Cannot overflow: the result is bounded by `max_bit`.
    pub(crate) fn bit_index_unchecked(&self, cell: &[u64], color: u32) -> BitIndex {
        let spatial = cell.iter().fold(0u64, |acc, &c| acc * self.radix + c);
        BitIndex(spatial * self.radix + u64::from(color))
    }

    /// Inverse of [`GridParams::bit_index`]: reads the base-`R` digits of
    /// `bit` back into `(cell, j)`. Returns `None` when the digit tuple does
    /// not name a valid cell and color of this grid.
    pub fn split_bit_index(&self, bit: u64) -> Option<(Vec<u64>, u32)> {
        if bit > self.max_bit {
            return None;
        }
        let color = (bit % self.radix) as u32;
        if color == 0 || color > self.m {
            return None;
        }
        let mut rest = bit / self.radix;
        let mut cell = vec![0u64; self.n()];
        for slot in cell.iter_mut().rev() {
            *slot = rest % self.radix;
            rest /= self.radix;
        }
        if rest != 0 || !self.contains(&cell) {
            return None;
        }
        Some((cell, color))
    }

    /// Row-major position of `cell` with `m_1` varying slowest.
    pub fn linear_index(&self, cell: &[u64]) -> usize {
        cell.iter()
            .zip(&self.dims)
            .fold(0usize, |acc, (&c, &a)| acc * a as usize + c as usize)
    }

    /// Inverse of [`GridParams::linear_index`].
    pub fn cell_at(&self, mut index: usize) -> Vec<u64> {
        let mut cell = vec![0u64; self.n()];
        for (slot, &a) in cell.iter_mut().zip(&self.dims).rev() {
            *slot = (index % a as usize) as u64;
            index /= a as usize;
        }
        cell
    }

    /// Every cell of the grid in storage order.
    pub fn cells(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.cell_count()).map(move |i| self.cell_at(i))
    }
}

impl fmt::Display for GridParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(u32::to_string).collect();
        write!(
            f,
            "n={} m={} dims={} R={}",
            self.n(),
            self.m,
            dims.join("x"),
            self.radix
        )
    }
}
