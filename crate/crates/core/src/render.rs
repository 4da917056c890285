//! Rasterizing the graphs over the plotting window.
//!
//! The window is `0 <= x_i < A_i` for `i < n` and `k <= x_n < k + A_n`.
//! Grids with `n > 2` are cut into planar slices by fixing all but two
//! axes. The lower free axis runs left to right, the higher one bottom to
//! top, and every cell becomes a `scale x scale` block.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::classic::{self, ClassicBitmap};
use crate::codec::{decode_cell, EncodedNumber};
use crate::dyadic::DyadicRational;
use crate::eval::{eval_classic, eval_f, exceeds_half, SamplePoint};
use crate::field::ColorField;
use crate::imageio::{Palette, PixelGrid, Rgb};
use crate::params::GridParams;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("scale must be at least 1")]
    ZeroScale,
    #[error("palette has {palette} colors, grid has m = {m}")]
    PaletteSize { palette: u32, m: u32 },
    #[error("a {n}-dimensional grid needs {expected} fixed axes, got {actual}")]
    SliceArity {
        n: usize,
        expected: usize,
        actual: usize,
    },
    #[error("axis x{axis} does not exist or is fixed twice")]
    SliceAxis { axis: usize },
    #[error("x{axis} = {value} is outside 0..{extent}")]
    SliceOutOfRange {
        axis: usize,
        value: u64,
        extent: u32,
    },
    #[error("invalid slice {0:?}; expected entries like \"x3=1\"")]
    SliceSyntax(String),
    #[error("cell {cell:?} decodes to several colors {colors:?}")]
    MultiColor { cell: Vec<u64>, colors: Vec<u32> },
}

/// Fixed coordinates for all but two axes; axes are numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SliceSpec {
    fixed: Vec<(usize, u64)>,
}

impl SliceSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fix(mut self, axis: usize, value: u64) -> Self {
        self.fixed.push((axis, value));
        self
    }

    pub fn fixed(&self) -> &[(usize, u64)] {
        &self.fixed
    }

    /// Checks the spec against `params` and returns the two free axes
    /// (zero-based, ascending).
    pub fn free_axes(&self, params: &GridParams) -> Result<(usize, usize), RenderError> {
        let n = params.n();
        let expected = n - 2;
        if self.fixed.len() != expected {
            return Err(RenderError::SliceArity {
                n,
                expected,
                actual: self.fixed.len(),
            });
        }
        let mut is_fixed = vec![false; n];
        for &(axis, value) in &self.fixed {
            if axis == 0 || axis > n || is_fixed[axis - 1] {
                return Err(RenderError::SliceAxis { axis });
            }
            is_fixed[axis - 1] = true;
            let extent = params.dims()[axis - 1];
            if value >= u64::from(extent) {
                return Err(RenderError::SliceOutOfRange {
                    axis,
                    value,
                    extent,
                });
            }
        }
        let mut free = (0..n).filter(|&i| !is_fixed[i]);
        Ok((free.next().unwrap(), free.next().unwrap()))
    }

    fn cell(&self, n: usize, free: (usize, usize), h: u64, v: u64) -> Vec<u64> {
        let mut cell = vec![0u64; n];
        for &(axis, value) in &self.fixed {
            cell[axis - 1] = value;
        }
        cell[free.0] = h;
        cell[free.1] = v;
        cell
    }
}

/// Parses comma-separated `xI=V` entries, e.g. `x2=1,x4=0`. Empty input is
/// the planar (no fixed axes) spec.
impl FromStr for SliceSpec {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut spec = SliceSpec::new();
        for entry in s.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let parsed = entry
                .strip_prefix('x')
                .and_then(|rest| rest.split_once('='))
                .and_then(|(axis, value)| {
                    Some((axis.trim().parse().ok()?, value.trim().parse().ok()?))
                });
            let (axis, value) = parsed.ok_or_else(|| RenderError::SliceSyntax(entry.into()))?;
            spec = spec.fix(axis, value);
        }
        Ok(spec)
    }
}

impl fmt::Display for SliceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .fixed
            .iter()
            .map(|(axis, value)| format!("x{axis}={value}"))
            .collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluator {
    /// Bit tests on `floor(k / R)`.
    #[default]
    Fast,
    /// Exact evaluation of `f_i` at each cell's center.
    Literal,
}

/// What to do with a cell that decodes to more than one color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Overlap {
    #[default]
    Strict,
    /// Paint the smallest color index.
    Layered,
}

#[derive(Debug, Clone)]
pub struct RenderRequest {
    pub enc: EncodedNumber,
    pub palette: Palette,
    pub scale: usize,
    pub slice: SliceSpec,
    pub evaluator: Evaluator,
    pub overlap: Overlap,
}

impl RenderRequest {
    pub fn new(enc: EncodedNumber, palette: Palette) -> Self {
        RenderRequest {
            enc,
            palette,
            scale: 1,
            slice: SliceSpec::new(),
            evaluator: Evaluator::Fast,
            overlap: Overlap::Strict,
        }
    }
}

fn check_common(params: &GridParams, palette: &Palette, scale: usize) -> Result<(), RenderError> {
    if scale == 0 {
        return Err(RenderError::ZeroScale);
    }
    if palette.m() != params.m() {
        return Err(RenderError::PaletteSize {
            palette: palette.m(),
            m: params.m(),
        });
    }
    Ok(())
}

/// Paints one planar slice of `extent_h x extent_v` cells, asking
/// `colors_of` for every cell in raster order (top row first).
fn paint<F>(
    extent_h: u32,
    extent_v: u32,
    scale: usize,
    palette: &Palette,
    overlap: Overlap,
    mut colors_of: F,
) -> Result<PixelGrid, RenderError>
where
    F: FnMut(u64, u64) -> (Vec<u64>, Vec<u32>),
{
    let (w, h) = (extent_h as usize, extent_v as usize);
    let mut grid = PixelGrid::filled(w * scale, h * scale, palette.background());
    for row in 0..h {
        let v = (h - 1 - row) as u64;
        for col in 0..w {
            let (cell, colors) = colors_of(col as u64, v);
            let index = match (colors.as_slice(), overlap) {
                ([], _) => 0,
                ([only], _) => *only,
                ([first, ..], Overlap::Layered) => *first,
                (_, Overlap::Strict) => return Err(RenderError::MultiColor { cell, colors }),
            };
            let color = palette.color(index).expect("palette covers 0..=m");
            fill_block(&mut grid, col, row, scale, color);
        }
    }
    Ok(grid)
}

fn fill_block(grid: &mut PixelGrid, col: usize, row: usize, scale: usize, color: Rgb) {
    for dy in 0..scale {
        for dx in 0..scale {
            grid.set(col * scale + dx, row * scale + dy, color);
        }
    }
}

/// Colors present at `cell` according to the chosen evaluator.
pub fn cell_colors(enc: &EncodedNumber, cell: &[u64], evaluator: Evaluator) -> Vec<u32> {
    let params = enc.params();
    match evaluator {
        Evaluator::Fast => (1..=params.m())
            .filter(|&j| decode_cell(enc, cell, j).expect("cell and color are in range"))
            .collect(),
        Evaluator::Literal => {
            let point = SamplePoint::cell_center(cell, enc.k());
            (1..=params.m())
                .filter(|&j| {
                    let value = eval_f(params, enc, &point, j).expect("point and color are valid");
                    exceeds_half(&value)
                })
                .collect()
        }
    }
}

/// Rasterizes the union of the `m` graphs over one planar slice of the
/// window at height `k`.
pub fn render_slice(req: &RenderRequest) -> Result<PixelGrid, RenderError> {
    let params = req.enc.params();
    check_common(params, &req.palette, req.scale)?;
    let free = req.slice.free_axes(params)?;
    let (eh, ev) = (params.dims()[free.0], params.dims()[free.1]);
    paint(eh, ev, req.scale, &req.palette, req.overlap, |h, v| {
        let cell = req.slice.cell(params.n(), free, h, v);
        let colors = cell_colors(&req.enc, &cell, req.evaluator);
        (cell, colors)
    })
}

/// Paints a color field directly, with the same layout as [`render_slice`].
pub fn render_field(
    field: &ColorField,
    palette: &Palette,
    slice: &SliceSpec,
    scale: usize,
) -> Result<PixelGrid, RenderError> {
    let params = field.params();
    check_common(params, palette, scale)?;
    let free = slice.free_axes(params)?;
    let (eh, ev) = (params.dims()[free.0], params.dims()[free.1]);
    paint(eh, ev, scale, palette, Overlap::Strict, |h, v| {
        let cell = slice.cell(params.n(), free, h, v);
        let color = field.get(&cell).expect("slice cells are in range");
        let colors = if color == 0 { vec![] } else { vec![color] };
        (cell, colors)
    })
}

/// Plots the classic inequality over `0 <= x < 106`, `k <= y < k + 17`,
/// sampling each cell at its center.
pub fn plot_classic(k: &BigUint) -> ClassicBitmap {
    let half = DyadicRational::pow2(-1);
    let mut bitmap = ClassicBitmap::new();
    for x in 0..classic::WIDTH {
        let px = &DyadicRational::from(x as i64) + &half;
        for y in 0..classic::HEIGHT {
            let py = &DyadicRational::from(k + BigUint::from(y)) + &half;
            if exceeds_half(&eval_classic(&px, &py)) {
                bitmap.set(x, y, true);
            }
        }
    }
    bitmap
}

/// Black-on-white raster of a classic bitmap.
pub fn classic_pixels(bitmap: &ClassicBitmap, scale: usize) -> PixelGrid {
    let mut grid = PixelGrid::filled(classic::WIDTH * scale, classic::HEIGHT * scale, Rgb::WHITE);
    for (i, painted) in bitmap.to_rows_top_down().into_iter().enumerate() {
        if painted {
            fill_block(
                &mut grid,
                i % classic::WIDTH,
                i / classic::WIDTH,
                scale,
                Rgb::BLACK,
            );
        }
    }
    grid
}

/// [`plot_classic`] followed by [`classic_pixels`].
pub fn render_classic(k: &BigUint, scale: usize) -> Result<PixelGrid, RenderError> {
    if scale == 0 {
        return Err(RenderError::ZeroScale);
    }
    Ok(classic_pixels(&plot_classic(k), scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::encode;
    use num_traits::Zero;

    #[test]
    fn blank_window() {
        let params = GridParams::new(2, 3, &[4, 3]).unwrap();
        let mut req = RenderRequest::new(
            EncodedNumber::new(BigUint::zero(), params),
            Palette::default_for(3),
        );
        req.scale = 2;
        let grid = render_slice(&req).unwrap();
        assert_eq!((grid.width, grid.height), (8, 6));
        assert!(grid.pixels.iter().all(|&p| p == Rgb::WHITE));
    }

    #[test]
    fn single_pixel() {
        let params = GridParams::new(2, 1, &[1, 1]).unwrap();
        let palette = Palette::default_for(1);
        for evaluator in [Evaluator::Fast, Evaluator::Literal] {
            let mut req = RenderRequest::new(
                EncodedNumber::new(6u32.into(), params.clone()),
                palette.clone(),
            );
            req.evaluator = evaluator;
            let grid = render_slice(&req).unwrap();
            assert_eq!(grid.pixels, vec![palette.color(1).unwrap()]);
        }
    }

    #[test]
    fn orientation_bottom_left() {
        let params = GridParams::new(2, 2, &[3, 2]).unwrap();
        let mut field = ColorField::empty(params);
        field.set(&[0, 0], 1).unwrap();
        field.set(&[2, 1], 2).unwrap();
        let palette = Palette::default_for(2);
        let grid = render_slice(&RenderRequest::new(encode(&field), palette.clone())).unwrap();
        assert_eq!(grid.get(0, 1), palette.color(1).unwrap());
        assert_eq!(grid.get(2, 0), palette.color(2).unwrap());
        assert_eq!(
            grid,
            render_field(&field, &palette, &SliceSpec::new(), 1).unwrap()
        );
    }

    #[test]
    fn multi_color_strict_and_layered() {
        let params = GridParams::new(2, 2, &[1, 1]).unwrap();
        let enc = EncodedNumber::new(BigUint::from(4u32 * 0b110), params);
        let palette = Palette::default_for(2);
        let mut req = RenderRequest::new(enc, palette.clone());
        assert_eq!(
            render_slice(&req),
            Err(RenderError::MultiColor {
                cell: vec![0, 0],
                colors: vec![1, 2]
            })
        );
        req.overlap = Overlap::Layered;
        assert_eq!(
            render_slice(&req).unwrap().pixels,
            vec![palette.color(1).unwrap()]
        );
    }

    #[test]
    fn slice_validation() {
        let params = GridParams::new(3, 1, &[2, 3, 4]).unwrap();
        let ok: SliceSpec = "x2=1".parse().unwrap();
        assert_eq!(ok.free_axes(&params).unwrap(), (0, 2));
        assert_eq!(ok.to_string(), "x2=1");
        assert!(matches!(
            SliceSpec::new().free_axes(&params),
            Err(RenderError::SliceArity {
                expected: 1,
                actual: 0,
                ..
            })
        ));
        assert!(matches!(
            "x2=3".parse::<SliceSpec>().unwrap().free_axes(&params),
            Err(RenderError::SliceOutOfRange {
                axis: 2,
                value: 3,
                extent: 3
            })
        ));
        assert!(matches!(
            "x4=0".parse::<SliceSpec>().unwrap().free_axes(&params),
            Err(RenderError::SliceAxis { axis: 4 })
        ));
        assert!(matches!(
            "y2=1".parse::<SliceSpec>(),
            Err(RenderError::SliceSyntax(_))
        ));
        assert!(matches!(
            "x2".parse::<SliceSpec>(),
            Err(RenderError::SliceSyntax(_))
        ));
    }

    #[test]
    fn slice_of_three_dimensional_field() {
        let params = GridParams::new(3, 2, &[2, 3, 4]).unwrap();
        let mut field = ColorField::empty(params);
        field.set(&[1, 1, 3], 2).unwrap();
        field.set(&[0, 1, 0], 1).unwrap();
        field.set(&[0, 0, 0], 1).unwrap();
        let palette = Palette::default_for(2);
        let mut req = RenderRequest::new(encode(&field), palette.clone());
        req.slice = "x2=1".parse().unwrap();
        let grid = render_slice(&req).unwrap();
        assert_eq!((grid.width, grid.height), (2, 4));
        // Horizontal x1, vertical x3 with x3 = 0 in the bottom row.
        assert_eq!(grid.get(1, 0), palette.color(2).unwrap());
        assert_eq!(grid.get(0, 3), palette.color(1).unwrap());
        assert_eq!(
            grid.pixels
                .iter()
                .filter(|&&p| p != palette.background())
                .count(),
            2
        );
        req.evaluator = Evaluator::Literal;
        assert_eq!(render_slice(&req).unwrap(), grid);
    }

    #[test]
    fn classic_render_examples() {
        assert_eq!(plot_classic(&BigUint::zero()).count_painted(), 0);
        let b = plot_classic(&BigUint::from(17u32));
        assert_eq!(b.count_painted(), 1);
        assert!(b.get(0, 0));
        let grid = render_classic(&BigUint::from(17u32), 2).unwrap();
        assert_eq!((grid.width, grid.height), (212, 34));
        assert_eq!(grid.get(0, 33), Rgb::BLACK);
        assert_eq!(grid.get(1, 32), Rgb::BLACK);
        assert_eq!(grid.get(2, 33), Rgb::WHITE);
    }
}
