//! On-disk formats: anymap images, voxel containers, palettes and `k` text.

mod ktext;
mod palette;
mod pnm;
mod voxel;

use std::fmt;

use thiserror::Error;

use crate::field::ColorField;
use crate::params::GridParams;

pub use ktext::{emit_k, parse_k, parse_k_bytes, Base, KTextError};
pub use palette::{Palette, PaletteError};
pub use pnm::{emit_pnm, parse_pnm, PnmError, PnmImage, PnmKind};
pub use voxel::{
    emit_voxels, parse_voxels, VoxelError, MAGIC as VOXEL_MAGIC, VERSION as VOXEL_VERSION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const BLACK: Rgb = Rgb(0, 0, 0);
    pub const WHITE: Rgb = Rgb(255, 255, 255);
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rgb({}, {}, {})", self.0, self.1, self.2)
    }
}

/// Raster in file order: rows top to bottom, pixels left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PixelGrid {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<Rgb>,
}

impl PixelGrid {
    pub fn filled(width: usize, height: usize, color: Rgb) -> Self {
        PixelGrid {
            width,
            height,
            pixels: vec![color; width * height],
        }
    }

    /// Pixel at column `x` and row `row`, counted from the top.
    pub fn get(&self, x: usize, row: usize) -> Rgb {
        self.pixels[row * self.width + x]
    }

    pub fn set(&mut self, x: usize, row: usize, color: Rgb) {
        self.pixels[row * self.width + x] = color;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("images can only fill 2-dimensional grids, this one has n = {0}")]
    NotPlanar(usize),
    #[error("image is {width}x{height}, grid expects {expected_width}x{expected_height}")]
    SizeMismatch {
        width: usize,
        height: usize,
        expected_width: u32,
        expected_height: u32,
    },
    #[error("palette has {palette} colors, grid has m = {m}")]
    PaletteSize { palette: u32, m: u32 },
    #[error(
        "pixel at column {x}, row {row} (from top) has color {color}, which is not in the palette"
    )]
    UnknownColor { x: usize, row: usize, color: Rgb },
}

/// Reads an image into a 2-D color field. Column `x` becomes `m_1 = x`;
/// the bottom image row is `m_2 = 0`, so the picture keeps its orientation
/// when plotted with `x_2` increasing upward.
pub fn pixels_to_field(
    grid: &PixelGrid,
    palette: &Palette,
    params: &GridParams,
) -> Result<ColorField, IngestError> {
    if params.n() != 2 {
        return Err(IngestError::NotPlanar(params.n()));
    }
    let (aw, ah) = (params.dims()[0], params.dims()[1]);
    if grid.width != aw as usize || grid.height != ah as usize {
        return Err(IngestError::SizeMismatch {
            width: grid.width,
            height: grid.height,
            expected_width: aw,
            expected_height: ah,
        });
    }
    if palette.m() != params.m() {
        return Err(IngestError::PaletteSize {
            palette: palette.m(),
            m: params.m(),
        });
    }

    let mut field = ColorField::empty(params.clone());
    for row in 0..grid.height {
        for x in 0..grid.width {
            let color = grid.get(x, row);
            let index =
                palette
                    .index_of(color)
                    .ok_or(IngestError::UnknownColor { x, row, color })?;
            let y = grid.height - 1 - row;
            field
                .set(&[x as u64, y as u64], index)
                .expect("cell and color are within the grid");
        }
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bottom_left_origin() {
        let params = GridParams::new(2, 3, &[3, 2]).unwrap();
        let palette = Palette::default_for(3);
        let mut grid = PixelGrid::filled(3, 2, palette.background());
        grid.set(0, 1, palette.color(1).unwrap());
        let field = pixels_to_field(&grid, &palette, &params).unwrap();
        assert_eq!(field.color_sets()[0], vec![vec![0, 0]]);
        assert_eq!(field.painted().count(), 1);

        let blank = PixelGrid::filled(3, 2, palette.background());
        assert!(pixels_to_field(&blank, &palette, &params)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn ingest_errors() {
        let params = GridParams::new(2, 1, &[2, 2]).unwrap();
        let palette = Palette::monochrome();
        let mut grid = PixelGrid::filled(2, 2, Rgb::WHITE);
        grid.set(1, 0, Rgb(9, 9, 9));
        assert_eq!(
            pixels_to_field(&grid, &palette, &params),
            Err(IngestError::UnknownColor {
                x: 1,
                row: 0,
                color: Rgb(9, 9, 9)
            })
        );
        let small = PixelGrid::filled(1, 2, Rgb::WHITE);
        assert!(matches!(
            pixels_to_field(&small, &palette, &params),
            Err(IngestError::SizeMismatch { .. })
        ));
        assert!(matches!(
            pixels_to_field(&grid, &Palette::default_for(2), &params),
            Err(IngestError::PaletteSize { palette: 2, m: 1 })
        ));
        let cube = GridParams::new(3, 1, &[2, 2, 2]).unwrap();
        assert_eq!(
            pixels_to_field(&grid, &palette, &cube),
            Err(IngestError::NotPlanar(3))
        );
    }
}
