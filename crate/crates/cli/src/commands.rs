use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigUint;
use tupper_core::classic::{classic_decode, classic_encode, ClassicBitmap};
use tupper_core::dyadic::DyadicRational;
use tupper_core::eval::{eval_f, exceeds_half, SamplePoint};
use tupper_core::imageio::{
    emit_k, emit_pnm, emit_voxels, parse_k_bytes, parse_pnm, parse_voxels, pixels_to_field, Base,
    Palette, PnmKind, VOXEL_MAGIC,
};
use tupper_core::render::{
    classic_pixels, render_classic, render_field, render_slice, Evaluator, Overlap, RenderRequest,
    SliceSpec,
};
use tupper_core::{
    decode_cell, decode_field, encode, validate_encoded, ColorField, EncodedNumber, GridParams,
};

use crate::{Command, DecodeFormat, EvaluatorArg, GridArgs};

/// An internal consistency check failed; reported with its own exit status.
#[derive(Debug)]
pub struct InvariantViolation(pub String);

impl std::fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invariant violated: {}", self.0)
    }
}

impl std::error::Error for InvariantViolation {}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Encode {
            input,
            palette,
            grid,
            output,
            hex,
        } => encode_cmd(&input, palette.as_deref(), &grid, output.as_deref(), hex),
        Command::Decode {
            k,
            grid,
            palette,
            output,
            format,
            raster,
            layered,
        } => decode_cmd(
            &k,
            &grid,
            palette.as_deref(),
            &output,
            format,
            raster.as_deref(),
            layered,
        ),
        Command::Eval {
            k,
            grid,
            point,
            color,
            fast,
        } => eval_cmd(&k, &grid, &point, color, fast),
        Command::Render {
            k,
            grid,
            palette,
            scale,
            slice,
            evaluator,
            layered,
            output,
        } => {
            let enc = EncodedNumber::new(read_k(&k)?, require_params(&grid)?);
            let mut req =
                RenderRequest::new(enc, load_palette(palette.as_deref(), grid_m(&grid)?)?);
            req.scale = scale;
            req.slice = slice.parse()?;
            req.evaluator = match evaluator {
                EvaluatorArg::Fast => Evaluator::Fast,
                EvaluatorArg::Literal => Evaluator::Literal,
            };
            req.overlap = if layered {
                Overlap::Layered
            } else {
                Overlap::Strict
            };
            let pixels = render_slice(&req)?;
            write_file(&output, &emit_pnm(&pixels, PnmKind::RawPixmap)?)
        }
        Command::Verify(args) => crate::verify::run(&args),
        Command::ClassicEncode { input, output, hex } => {
            let image = parse_pnm(&read_file(&input)?)
                .with_context(|| format!("reading {}", input.display()))?;
            let bitmap = ClassicBitmap::from_pixels(&image.grid)?;
            let k = classic_encode(&bitmap);
            eprintln!("{} pixels painted", bitmap.count_painted());
            write_k(&k, hex, output.as_deref())
        }
        Command::ClassicDecode { k, output } => {
            let bitmap = classic_decode(&read_k(&k)?);
            write_file(
                &output,
                &emit_pnm(&classic_pixels(&bitmap, 1), PnmKind::RawBitmap)?,
            )
        }
        Command::ClassicRender { k, scale, output } => {
            let pixels = render_classic(&read_k(&k)?, scale)?;
            write_file(&output, &emit_pnm(&pixels, PnmKind::RawBitmap)?)
        }
    }
}

fn encode_cmd(
    input: &Path,
    palette: Option<&Path>,
    grid: &GridArgs,
    output: Option<&Path>,
    hex: bool,
) -> Result<()> {
    let bytes = read_file(input)?;
    let field = if bytes.starts_with(VOXEL_MAGIC) {
        if palette.is_some() {
            bail!("--palette only applies to image input");
        }
        let field = parse_voxels(&bytes).with_context(|| format!("reading {}", input.display()))?;
        check_matches(field.params(), grid)?;
        field
    } else {
        let image = parse_pnm(&bytes).with_context(|| format!("reading {}", input.display()))?;
        let palette = match (palette, grid.colors) {
            (Some(path), _) => read_palette(path)?,
            // Black and white images default to black ink on white.
            (None, None | Some(1)) if image.kind.is_bitmap() => Palette::monochrome(),
            (None, Some(m)) => Palette::default_for(m),
            (None, None) => bail!("--colors or --palette is required for pixmap input"),
        };
        let dims = match &grid.dims {
            Some(dims) => dims.clone(),
            None => vec![dim_u32(image.grid.width)?, dim_u32(image.grid.height)?],
        };
        let m = grid.colors.unwrap_or(palette.m());
        let params = GridParams::from_dims(m, &dims)?;
        pixels_to_field(&image.grid, &palette, &params)?
    };

    let enc = encode(&field);
    let k = enc.k();
    eprintln!(
        "R = {}, {} painted cells, k has {} bits and {} decimal digits",
        field.params().radix(),
        field.painted().count(),
        k.bits(),
        decimal_digits(k)
    );
    write_k(k, hex, output)
}

fn decode_cmd(
    k_path: &Path,
    grid: &GridArgs,
    palette: Option<&Path>,
    output: &Path,
    format: Option<DecodeFormat>,
    raster: Option<&Path>,
    layered: bool,
) -> Result<()> {
    let params = require_params(grid)?;
    let enc = EncodedNumber::new(read_k(k_path)?, params.clone());
    let report = validate_encoded(&enc);
    if !report.divisible {
        eprintln!(
            "note: k is not divisible by R = {}; decoding floor(k / R)",
            params.radix()
        );
    }
    if !report.passed() {
        if let Some(bit) = report.first_bad_bit {
            eprintln!("note: bit {bit} of floor(k / R) names no cell and color; ignored");
        }
    }

    let decoded = decode_field(&enc);
    let field = if layered {
        decoded.to_field_layered()
    } else {
        decoded
            .to_field()
            .context("use --layered to paint the smallest color")?
    };

    let format = format.unwrap_or(if params.n() == 2 {
        DecodeFormat::Ppm
    } else {
        DecodeFormat::Voxel
    });
    let needs_palette = format != DecodeFormat::Voxel || raster.is_some();
    let palette = if needs_palette {
        Some(match (palette, format) {
            (Some(path), _) => read_palette(path)?,
            (None, DecodeFormat::Pbm) => Palette::monochrome(),
            (None, _) => Palette::default_for(params.m()),
        })
    } else {
        None
    };

    let raster_of = |field: &ColorField, kind: PnmKind| -> Result<Vec<u8>> {
        if params.n() != 2 {
            bail!(
                "a {}-dimensional grid has no single raster; use `render --slice`",
                params.n()
            );
        }
        let palette = palette.as_ref().expect("palette loaded for raster output");
        Ok(emit_pnm(
            &render_field(field, palette, &SliceSpec::new(), 1)?,
            kind,
        )?)
    };

    let bytes = match format {
        DecodeFormat::Voxel => emit_voxels(&field)?,
        DecodeFormat::Ppm => raster_of(&field, PnmKind::RawPixmap)?,
        DecodeFormat::Pbm => raster_of(&field, PnmKind::RawBitmap)?,
    };
    write_file(output, &bytes)?;
    if let Some(path) = raster {
        write_file(path, &raster_of(&field, PnmKind::RawPixmap)?)?;
    }
    eprintln!("{} painted cells", field.painted().count());
    Ok(())
}

fn eval_cmd(
    k_path: &Path,
    grid: &GridArgs,
    point: &[String],
    color: u32,
    fast: bool,
) -> Result<()> {
    let params = require_params(grid)?;
    let coords = point
        .iter()
        .map(|c| {
            c.trim()
                .parse::<DyadicRational>()
                .with_context(|| format!("coordinate {c:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let point = SamplePoint::new(coords);
    let enc = EncodedNumber::new(read_k(k_path)?, params.clone());
    let painted = exceeds_half(&eval_f(&params, &enc, &point, color)?);
    println!(
        "{}",
        if painted {
            "1 (painted)"
        } else {
            "0 (unpainted)"
        }
    );

    if fast {
        match window_cell(&params, enc.k(), point.coords()) {
            Some(_) if enc.k() % params.radix() != BigUint::ZERO => {
                eprintln!(
                    "fast check skipped: k is not divisible by R = {}",
                    params.radix()
                );
            }
            Some(cell) => {
                let bit = decode_cell(&enc, &cell, color)?;
                if bit != painted {
                    return Err(InvariantViolation(format!(
                        "literal evaluation gives {}, bit test of cell {cell:?} gives {}",
                        u8::from(painted),
                        u8::from(bit)
                    ))
                    .into());
                }
                eprintln!("fast check agrees (cell {cell:?})");
            }
            None => eprintln!("fast check skipped: point is outside the window"),
        }
    }
    Ok(())
}

/// The cell containing `coords` when the point lies in the plotting window.
fn window_cell(params: &GridParams, k: &BigUint, coords: &[DyadicRational]) -> Option<Vec<u64>> {
    let n = params.n();
    let k = DyadicRational::from(k.clone());
    let mut cell = Vec::with_capacity(n);
    for (axis, x) in coords.iter().enumerate() {
        let value = if axis == n - 1 {
            (x - &k).floor()
        } else {
            x.floor()
        };
        cell.push(u64::try_from(value).ok()?);
    }
    params.contains(&cell).then_some(cell)
}

pub(crate) fn require_params(grid: &GridArgs) -> Result<GridParams> {
    let dims = grid
        .dims
        .as_ref()
        .ok_or_else(|| anyhow!("--dims is required"))?;
    Ok(GridParams::from_dims(grid_m(grid)?, dims)?)
}

fn grid_m(grid: &GridArgs) -> Result<u32> {
    grid.colors.ok_or_else(|| anyhow!("--colors is required"))
}

fn check_matches(params: &GridParams, grid: &GridArgs) -> Result<()> {
    if let Some(dims) = &grid.dims {
        if dims.as_slice() != params.dims() {
            bail!(
                "--dims {dims:?} do not match the container's {:?}",
                params.dims()
            );
        }
    }
    if let Some(m) = grid.colors {
        if m != params.m() {
            bail!(
                "--colors {m} does not match the container's m = {}",
                params.m()
            );
        }
    }
    Ok(())
}

fn dim_u32(extent: usize) -> Result<u32> {
    u32::try_from(extent).map_err(|_| anyhow!("image extent {extent} is too large"))
}

fn load_palette(path: Option<&Path>, m: u32) -> Result<Palette> {
    match path {
        Some(path) => read_palette(path),
        None => Ok(Palette::default_for(m)),
    }
}

fn read_palette(path: &Path) -> Result<Palette> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Palette::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

pub(crate) fn read_k(path: &Path) -> Result<BigUint> {
    let bytes = read_file(path)?;
    parse_k_bytes(&bytes).with_context(|| format!("parsing k from {}", path.display()))
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .context("reading standard input")?;
        return Ok(buf);
    }
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn write_k(k: &BigUint, hex: bool, output: Option<&Path>) -> Result<()> {
    let mut text = emit_k(k, if hex { Base::Hex } else { Base::Decimal });
    text.push('\n');
    match output {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn decimal_digits(k: &BigUint) -> usize {
    emit_k(k, Base::Decimal).len()
}
