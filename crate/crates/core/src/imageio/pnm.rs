//! Portable anymap reading and writing: P1/P4 bitmaps, P3/P6 pixmaps.
//!
//! Header comments are accepted anywhere a separator may appear, and in the
//! raster of the plain (ASCII) variants. Pixmaps must use maxval 255.
//! Bitmaps decode to black (painted) and white pixels.

use std::fmt::Write as _;

use thiserror::Error;

use super::{PixelGrid, Rgb};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PnmKind {
    /// `P1`
    PlainBitmap,
    /// `P3`
    PlainPixmap,
    /// `P4`
    RawBitmap,
    /// `P6`
    RawPixmap,
}

impl PnmKind {
    pub fn magic(self) -> &'static str {
        match self {
            PnmKind::PlainBitmap => "P1",
            PnmKind::PlainPixmap => "P3",
            PnmKind::RawBitmap => "P4",
            PnmKind::RawPixmap => "P6",
        }
    }

    pub fn is_bitmap(self) -> bool {
        matches!(self, PnmKind::PlainBitmap | PnmKind::RawBitmap)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PnmError {
    #[error("not a portable anymap (bad magic number)")]
    BadMagic,
    #[error("anymap variant {0} is not supported (expected P1, P3, P4 or P6)")]
    UnsupportedVariant(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("maxval {0} is not supported (only 255)")]
    UnsupportedMaxval(u32),
    #[error("image has zero width or height")]
    EmptyImage,
    #[error("image dimensions {width}x{height} are too large")]
    TooLarge { width: u32, height: u32 },
    #[error("truncated payload: expected {expected} {unit}, found {found}")]
    Truncated {
        expected: usize,
        found: usize,
        unit: &'static str,
    },
    #[error("invalid sample {token:?} at pixel {index}")]
    InvalidSample { index: usize, token: String },
    #[error("pixel {index} is {color}, which a bitmap cannot hold (only black or white)")]
    NotMonochrome { index: usize, color: Rgb },
}

/// A decoded anymap: its variant and its pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PnmImage {
    pub kind: PnmKind,
    pub grid: PixelGrid,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Next run of non-separator bytes, if any.
    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn header_number(&mut self, what: &str) -> Result<u32, PnmError> {
        let token = self
            .token()
            .ok_or_else(|| PnmError::MalformedHeader(format!("missing {what}")))?;
        parse_decimal(token).ok_or_else(|| {
            PnmError::MalformedHeader(format!(
                "{what} {:?} is not a decimal number",
                String::from_utf8_lossy(token)
            ))
        })
    }
}

fn parse_decimal(token: &[u8]) -> Option<u32> {
    if token.is_empty() || !token.iter().all(u8::is_ascii_digit) {
        return None;
    }
    std::str::from_utf8(token).ok()?.parse().ok()
}

pub fn parse_pnm(bytes: &[u8]) -> Result<PnmImage, PnmError> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(PnmError::BadMagic);
    }
    let kind = match bytes[1] {
        b'1' => PnmKind::PlainBitmap,
        b'3' => PnmKind::PlainPixmap,
        b'4' => PnmKind::RawBitmap,
        b'6' => PnmKind::RawPixmap,
        b'2' | b'5' | b'7' => {
            return Err(PnmError::UnsupportedVariant(format!(
                "P{}",
                bytes[1] as char
            )))
        }
        _ => return Err(PnmError::BadMagic),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    match bytes.get(2) {
        Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
        _ => {
            return Err(PnmError::MalformedHeader(
                "magic number must be followed by whitespace".into(),
            ))
        }
    }

    let width = cur.header_number("width")?;
    let height = cur.header_number("height")?;
    if !kind.is_bitmap() {
        let maxval = cur.header_number("maxval")?;
        if maxval != 255 {
            return Err(PnmError::UnsupportedMaxval(maxval));
        }
    }
    if width == 0 || height == 0 {
        return Err(PnmError::EmptyImage);
    }
    let count = (width as usize)
        .checked_mul(height as usize)
        .ok_or(PnmError::TooLarge { width, height })?;

    let pixels = match kind {
        PnmKind::RawBitmap | PnmKind::RawPixmap => {
            // Exactly one whitespace byte separates header and raster.
            match bytes.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                _ => {
                    return Err(PnmError::MalformedHeader(
                        "header must end with a single whitespace byte".into(),
                    ))
                }
            }
            let raster = &bytes[cur.pos..];
            if kind == PnmKind::RawBitmap {
                read_raw_bitmap(raster, width as usize, height as usize)?
            } else {
                read_raw_pixmap(raster, count)?
            }
        }
        PnmKind::PlainBitmap => read_plain_bitmap(&mut cur, count)?,
        PnmKind::PlainPixmap => read_plain_pixmap(&mut cur, count)?,
    };

    Ok(PnmImage {
        kind,
        grid: PixelGrid {
            width: width as usize,
            height: height as usize,
            pixels,
        },
    })
}

fn bit_color(painted: bool) -> Rgb {
    if painted {
        Rgb::BLACK
    } else {
        Rgb::WHITE
    }
}

fn read_raw_bitmap(raster: &[u8], width: usize, height: usize) -> Result<Vec<Rgb>, PnmError> {
    let row_bytes = width.div_ceil(8);
    let expected = row_bytes.checked_mul(height).ok_or(PnmError::TooLarge {
        width: width as u32,
        height: height as u32,
    })?;
    if raster.len() < expected {
        return Err(PnmError::Truncated {
            expected,
            found: raster.len(),
            unit: "bytes",
        });
    }
    let mut pixels = Vec::with_capacity(width * height);
    for row in raster[..expected].chunks_exact(row_bytes) {
        for x in 0..width {
            let painted = row[x / 8] & (0x80 >> (x % 8)) != 0;
            pixels.push(bit_color(painted));
        }
    }
    Ok(pixels)
}

fn read_raw_pixmap(raster: &[u8], count: usize) -> Result<Vec<Rgb>, PnmError> {
    let expected = count.checked_mul(3).ok_or(PnmError::Truncated {
        expected: usize::MAX,
        found: raster.len(),
        unit: "bytes",
    })?;
    if raster.len() < expected {
        return Err(PnmError::Truncated {
            expected,
            found: raster.len(),
            unit: "bytes",
        });
    }
    Ok(raster[..expected]
        .chunks_exact(3)
        .map(|c| Rgb(c[0], c[1], c[2]))
        .collect())
}

fn read_plain_bitmap(cur: &mut Cursor<'_>, count: usize) -> Result<Vec<Rgb>, PnmError> {
    // Every pixel needs at least one byte.
    let remaining = cur.bytes.len() - cur.pos;
    if remaining < count {
        return Err(PnmError::Truncated {
            expected: count,
            found: remaining,
            unit: "bytes",
        });
    }
    let mut pixels = Vec::with_capacity(count);
    while pixels.len() < count {
        cur.skip_separators();
        let Some(&b) = cur.bytes.get(cur.pos) else {
            return Err(PnmError::Truncated {
                expected: count,
                found: pixels.len(),
                unit: "pixels",
            });
        };
        // Plain bitmap digits need no separators between them.
        let painted = match b {
            b'0' => false,
            b'1' => true,
            _ => {
                return Err(PnmError::InvalidSample {
                    index: pixels.len(),
                    token: (b as char).to_string(),
                })
            }
        };
        cur.pos += 1;
        pixels.push(bit_color(painted));
    }
    Ok(pixels)
}

fn read_plain_pixmap(cur: &mut Cursor<'_>, count: usize) -> Result<Vec<Rgb>, PnmError> {
    let samples = count.saturating_mul(3);
    // Each sample is at least one digit plus a separator, bar the last.
    let remaining = cur.bytes.len() - cur.pos;
    if remaining < samples.saturating_mul(2).saturating_sub(1) {
        return Err(PnmError::Truncated {
            expected: samples,
            found: remaining / 2,
            unit: "samples",
        });
    }
    let mut values = Vec::with_capacity(samples);
    while values.len() < samples {
        let index = values.len() / 3;
        let Some(token) = cur.token() else {
            return Err(PnmError::Truncated {
                expected: samples,
                found: values.len(),
                unit: "samples",
            });
        };
        let value =
            parse_decimal(token)
                .filter(|&v| v <= 255)
                .ok_or_else(|| PnmError::InvalidSample {
                    index,
                    token: String::from_utf8_lossy(token).into_owned(),
                })?;
        values.push(value as u8);
    }
    Ok(values
        .chunks_exact(3)
        .map(|c| Rgb(c[0], c[1], c[2]))
        .collect())
}

/// Serializes `grid` as `kind`. Bitmap variants accept only black and
/// white pixels.
pub fn emit_pnm(grid: &PixelGrid, kind: PnmKind) -> Result<Vec<u8>, PnmError> {
    let mut out = format!("{}\n{} {}\n", kind.magic(), grid.width, grid.height);
    if !kind.is_bitmap() {
        out.push_str("255\n");
    }
    let mut out = out.into_bytes();

    let bit_of = |index: usize, c: Rgb| -> Result<bool, PnmError> {
        match c {
            Rgb::BLACK => Ok(true),
            Rgb::WHITE => Ok(false),
            color => Err(PnmError::NotMonochrome { index, color }),
        }
    };

    match kind {
        PnmKind::RawPixmap => {
            for p in &grid.pixels {
                out.extend_from_slice(&[p.0, p.1, p.2]);
            }
        }
        PnmKind::PlainPixmap => {
            let mut text = String::new();
            for row in grid.pixels.chunks(grid.width.max(1)) {
                let line: Vec<String> = row
                    .iter()
                    .map(|p| format!("{} {} {}", p.0, p.1, p.2))
                    .collect();
                let _ = writeln!(text, "{}", line.join(" "));
            }
            out.extend_from_slice(text.as_bytes());
        }
        PnmKind::RawBitmap => {
            let row_bytes = grid.width.div_ceil(8);
            for (r, row) in grid.pixels.chunks(grid.width.max(1)).enumerate() {
                let mut packed = vec![0u8; row_bytes];
                for (x, &p) in row.iter().enumerate() {
                    if bit_of(r * grid.width + x, p)? {
                        packed[x / 8] |= 0x80 >> (x % 8);
                    }
                }
                out.extend_from_slice(&packed);
            }
        }
        PnmKind::PlainBitmap => {
            for (r, row) in grid.pixels.chunks(grid.width.max(1)).enumerate() {
                let mut line = Vec::with_capacity(row.len() * 2);
                for (x, &p) in row.iter().enumerate() {
                    if x > 0 {
                        line.push(b' ');
                    }
                    line.push(if bit_of(r * grid.width + x, p)? {
                        b'1'
                    } else {
                        b'0'
                    });
                }
                line.push(b'\n');
                out.extend_from_slice(&line);
            }
        }
    }
    Ok(out)
}
