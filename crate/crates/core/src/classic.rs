//! The original monochrome 106x17 formula.
//!
//! Pixel `(x, y)` lives at bit `17 x + y` of `k / 17`, read off the
//! exponent `-17 floor(x) - mod(floor(y), 17)`. This layout does not arise
//! from the n-dimensional construction (that one would use `R = 124` for
//! the same window), so it has its own codec.

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::imageio::{PixelGrid, Rgb};

pub const WIDTH: usize = 106;
pub const HEIGHT: usize = 17;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicImageError {
    #[error("classic bitmaps are {WIDTH}x{HEIGHT}, got {width}x{height}")]
    Size { width: usize, height: usize },
    #[error("pixel at column {x}, row {row} is {color}; only black and white are allowed")]
    NotMonochrome { x: usize, row: usize, color: Rgb },
}

/// 106x17 monochrome bitmap indexed by `(x, y)` with `y = 0` at the bottom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassicBitmap {
    bits: Vec<bool>,
}

impl Default for ClassicBitmap {
    fn default() -> Self {
        ClassicBitmap {
            bits: vec![false; WIDTH * HEIGHT],
        }
    }
}

impl ClassicBitmap {
    pub fn new() -> Self {
        Self::default()
    }

    /// From rows listed top row first, as image files store them.
    pub fn from_rows_top_down(
        width: usize,
        height: usize,
        painted: &[bool],
    ) -> Result<Self, ClassicImageError> {
        if width != WIDTH || height != HEIGHT || painted.len() != WIDTH * HEIGHT {
            return Err(ClassicImageError::Size { width, height });
        }
        let mut bitmap = Self::new();
        for (i, &p) in painted.iter().enumerate() {
            let (row, x) = (i / WIDTH, i % WIDTH);
            bitmap.set(x, HEIGHT - 1 - row, p);
        }
        Ok(bitmap)
    }

    /// From a black-on-white image; black pixels are painted.
    pub fn from_pixels(grid: &PixelGrid) -> Result<Self, ClassicImageError> {
        let painted = grid
            .pixels
            .iter()
            .enumerate()
            .map(|(i, &color)| match color {
                Rgb::BLACK => Ok(true),
                Rgb::WHITE => Ok(false),
                color => Err(ClassicImageError::NotMonochrome {
                    x: i % grid.width.max(1),
                    row: i / grid.width.max(1),
                    color,
                }),
            })
            .collect::<Result<Vec<bool>, _>>()?;
        Self::from_rows_top_down(grid.width, grid.height, &painted)
    }

    /// Rows top row first.
    pub fn to_rows_top_down(&self) -> Vec<bool> {
        (0..HEIGHT)
            .rev()
            .flat_map(|y| (0..WIDTH).map(move |x| (x, y)))
            .map(|(x, y)| self.get(x, y))
            .collect()
    }

    /// # Panics
    /// If `(x, y)` is outside the bitmap.
    pub fn get(&self, x: usize, y: usize) -> bool {
        assert!(x < WIDTH && y < HEIGHT, "pixel ({x}, {y}) out of range");
        self.bits[x * HEIGHT + y]
    }

    /// # Panics
    /// If `(x, y)` is outside the bitmap.
    pub fn set(&mut self, x: usize, y: usize, painted: bool) {
        assert!(x < WIDTH && y < HEIGHT, "pixel ({x}, {y}) out of range");
        self.bits[x * HEIGHT + y] = painted;
    }

    pub fn count_painted(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// `k = 17 * sum over painted (x, y) of 2^(17 x + y)`.
pub fn classic_encode(bitmap: &ClassicBitmap) -> BigUint {
    // Storage index x * 17 + y is the bit position.
    let mut n = BigUint::zero();
    for (bit, _) in bitmap.bits.iter().enumerate().filter(|(_, &b)| b) {
        n.set_bit(bit as u64, true);
    }
    n * 17u32
}

/// Reads pixel bits back from `floor(k / 17)`.
pub fn classic_decode(k: &BigUint) -> ClassicBitmap {
    let n = k / 17u32;
    ClassicBitmap {
        bits: (0..WIDTH * HEIGHT).map(|bit| n.bit(bit as u64)).collect(),
    }
}
