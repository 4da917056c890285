//! The `NVOX` voxel container.
//!
//! Layout: the magic `NVOX`, one version byte (1), an ASCII header line
//! `n m A_1 ... A_n\n`, then one byte per cell holding its color index,
//! row-major with `m_1` varying slowest.

use thiserror::Error;

use crate::field::ColorField;
use crate::params::{GridParams, ParamsError};

pub const MAGIC: &[u8; 4] = b"NVOX";
pub const VERSION: u8 = 1;

// Longest header line accepted before giving up on finding its newline.
const MAX_HEADER_LEN: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VoxelError {
    #[error("not a voxel container (bad magic)")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("invalid grid: {0}")]
    Params(#[from] ParamsError),
    #[error("containers hold at most 255 colors, got {0}")]
    TooManyColors(u32),
    #[error("payload has {actual} bytes, header declares {expected} cells")]
    PayloadLength { expected: usize, actual: usize },
    #[error("byte {offset} holds color {value}, above m = {m}")]
    ColorOutOfRange { offset: usize, value: u8, m: u32 },
}

pub fn emit_voxels(field: &ColorField) -> Result<Vec<u8>, VoxelError> {
    let params = field.params();
    if params.m() > 255 {
        return Err(VoxelError::TooManyColors(params.m()));
    }
    let mut header = format!("{} {}", params.n(), params.m());
    for a in params.dims() {
        header.push(' ');
        header.push_str(&a.to_string());
    }
    header.push('\n');

    let mut out = Vec::with_capacity(MAGIC.len() + 1 + header.len() + field.cells().len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(header.as_bytes());
    // m <= 255 bounds every cell value.
    out.extend(field.cells().iter().map(|&c| c as u8));
    Ok(out)
}

pub fn parse_voxels(bytes: &[u8]) -> Result<ColorField, VoxelError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(VoxelError::BadMagic);
    }
    match bytes.get(4) {
        Some(&VERSION) => {}
        Some(&v) => return Err(VoxelError::UnsupportedVersion(v)),
        None => return Err(VoxelError::MalformedHeader("missing version byte".into())),
    }
    let rest = &bytes[5..];
    let window = &rest[..rest.len().min(MAX_HEADER_LEN)];
    let newline = window
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| VoxelError::MalformedHeader("header line is not terminated".into()))?;
    let line = std::str::from_utf8(&window[..newline])
        .map_err(|_| VoxelError::MalformedHeader("header is not ASCII".into()))?;
    let numbers = line
        .split(' ')
        .map(|t| {
            if !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) {
                t.parse::<u64>().ok()
            } else {
                None
            }
        })
        .collect::<Option<Vec<u64>>>()
        .ok_or_else(|| VoxelError::MalformedHeader(format!("{line:?} is not a list of numbers")))?;
    let [n, m, dims @ ..] = numbers.as_slice() else {
        return Err(VoxelError::MalformedHeader(
            "expected \"n m A_1 ... A_n\"".into(),
        ));
    };
    if *n != dims.len() as u64 {
        return Err(VoxelError::MalformedHeader(format!(
            "header declares n = {n} but lists {} extents",
            dims.len()
        )));
    }
    if *m > 255 {
        return Err(VoxelError::TooManyColors(
            u32::try_from(*m).unwrap_or(u32::MAX),
        ));
    }
    let dims = dims
        .iter()
        .map(|&a| u32::try_from(a))
        .collect::<Result<Vec<u32>, _>>()
        .map_err(|_| VoxelError::MalformedHeader("extent does not fit in 32 bits".into()))?;
    let params = GridParams::new(dims.len(), *m as u32, &dims)?;

    let payload = &rest[newline + 1..];
    let expected = params.cell_count();
    if payload.len() != expected {
        return Err(VoxelError::PayloadLength {
            expected,
            actual: payload.len(),
        });
    }
    if let Some(offset) = payload.iter().position(|&b| u32::from(b) > params.m()) {
        return Err(VoxelError::ColorOutOfRange {
            offset,
            value: payload[offset],
            m: params.m(),
        });
    }
    let cells = payload.iter().map(|&b| u32::from(b)).collect();
    Ok(ColorField::from_cells_unchecked(params, cells))
}
