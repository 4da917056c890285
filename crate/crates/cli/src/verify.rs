//! Round-trip checks over many fields: encode, decode by bit tests, decode
//! by literal evaluation, and compare all three.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tupper_core::eval::{eval_f, exceeds_half, SamplePoint};
use tupper_core::imageio::{emit_k, emit_voxels, Base};
use tupper_core::{decode_field, encode, validate_encoded, ColorField, EncodedNumber, GridParams};

use crate::commands::{require_params, write_file, InvariantViolation};
use crate::GridArgs;

// Mismatches described on stderr before the rest are only counted.
const REPORT_LIMIT: usize = 5;

#[derive(Args)]
pub struct VerifyArgs {
    /// Grid for --exhaustive.
    #[command(flatten)]
    grid: GridArgs,
    /// Check every field of the given grid.
    #[arg(long, conflicts_with = "random")]
    exhaustive: bool,
    /// Check this many random fields on random grids.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Smallest n for random grids.
    #[arg(long, default_value_t = 2)]
    min_n: usize,
    /// Largest n for random grids.
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    /// Largest extent A_j for random grids.
    #[arg(long, default_value_t = 4)]
    max_dim: u32,
    /// Largest m for random grids.
    #[arg(long, default_value_t = 3)]
    max_colors: u32,
    /// Upper bound on cells * m for any grid checked.
    #[arg(long, default_value_t = 4096)]
    max_bits: usize,
    /// Upper bound on the number of fields --exhaustive may enumerate.
    #[arg(long, default_value_t = 1_000_000)]
    max_fields: u64,
    /// Flip one cell bit of every k before decoding; each field must then
    /// be reported as a mismatch.
    #[arg(long)]
    inject_corruption: bool,
    /// Write each mismatching field and its k here for reproduction.
    #[arg(long)]
    repro_dir: Option<PathBuf>,
}

pub fn run(args: &VerifyArgs) -> Result<()> {
    if args.min_n < 2 || args.max_n < args.min_n || args.max_dim == 0 || args.max_colors == 0 {
        bail!("random grids need 2 <= --min-n <= --max-n, --max-dim >= 1 and --max-colors >= 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut tally = Tally::default();

    if args.exhaustive {
        let params = require_params(&args.grid)?;
        check_bits(&params, args.max_bits)?;
        let cells = params.cell_count() as u32;
        let total = u64::from(params.m() + 1)
            .checked_pow(cells)
            .filter(|&t| t <= args.max_fields)
            .ok_or_else(|| {
                anyhow::anyhow!(
                    "{}^{} fields exceed --max-fields {}",
                    params.m() + 1,
                    cells,
                    args.max_fields
                )
            })?;
        for index in 0..total {
            let field = nth_field(&params, index);
            tally.record(check_field(&field, args, &mut rng), &field, args)?;
        }
    } else if let Some(count) = args.random {
        for _ in 0..count {
            let field = random_field(&mut rng, args);
            tally.record(check_field(&field, args, &mut rng), &field, args)?;
        }
    } else {
        bail!("pass --exhaustive or --random COUNT");
    }

    if tally.mismatches > 0 {
        return Err(InvariantViolation(format!(
            "{} of {} fields mismatched",
            tally.mismatches, tally.checked
        ))
        .into());
    }
    println!(
        "checked {} fields: encode, bit decode and literal decode agree",
        tally.checked
    );
    Ok(())
}

#[derive(Default)]
struct Tally {
    checked: usize,
    mismatches: usize,
}

impl Tally {
    fn record(
        &mut self,
        outcome: Option<(String, BigUint)>,
        field: &ColorField,
        args: &VerifyArgs,
    ) -> Result<()> {
        self.checked += 1;
        let Some((reason, k)) = outcome else {
            return Ok(());
        };
        self.mismatches += 1;
        if self.mismatches <= REPORT_LIMIT {
            let p = field.params();
            eprintln!(
                "mismatch: dims {:?}, m = {}, cells {:?}: {reason}",
                p.dims(),
                p.m(),
                field.cells()
            );
        }
        if let Some(dir) = &args.repro_dir {
            let stem = dir.join(format!("mismatch-{}", self.mismatches));
            write_file(&stem.with_extension("nvox"), &emit_voxels(field)?)?;
            write_file(
                &stem.with_extension("k"),
                format!("{}\n", emit_k(&k, Base::Decimal)).as_bytes(),
            )?;
        }
        Ok(())
    }
}

fn check_bits(params: &GridParams, max_bits: usize) -> Result<()> {
    let bits = params.cell_count().saturating_mul(params.m() as usize);
    if bits > max_bits {
        bail!("grid has {bits} cell-color pairs, above --max-bits {max_bits}");
    }
    Ok(())
}

/// Field number `index` in base `m + 1`, first cell least significant.
fn nth_field(params: &GridParams, mut index: u64) -> ColorField {
    let base = u64::from(params.m() + 1);
    let mut field = ColorField::empty(params.clone());
    for cell in params.cells() {
        field
            .set(&cell, (index % base) as u32)
            .expect("color in range");
        index /= base;
    }
    field
}

fn random_field(rng: &mut ChaCha8Rng, args: &VerifyArgs) -> ColorField {
    let params = loop {
        let n = rng.gen_range(args.min_n..=args.max_n);
        let dims: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=args.max_dim)).collect();
        let m = rng.gen_range(1..=args.max_colors);
        if let Ok(p) = GridParams::from_dims(m, &dims) {
            if p.cell_count() * m as usize <= args.max_bits {
                break p;
            }
        }
    };
    let density: f64 = rng.gen();
    let mut field = ColorField::empty(params.clone());
    for cell in params.cells() {
        if rng.gen_bool(density) {
            field
                .set(&cell, rng.gen_range(1..=params.m()))
                .expect("color in range");
        }
    }
    field
}

/// Returns a description of the first disagreement and the `k` checked.
fn check_field(
    field: &ColorField,
    args: &VerifyArgs,
    rng: &mut ChaCha8Rng,
) -> Option<(String, BigUint)> {
    let params = field.params();
    let mut enc = encode(field);
    if args.inject_corruption {
        let bit = rng.gen_range(0..=params.max_bit().value());
        // Flip a bit that names a real cell and color so decoding sees it.
        let bit = (bit..=params.max_bit().value())
            .chain(0..bit)
            .find(|&b| params.split_bit_index(b).is_some())
            .expect("grid has at least one cell-color bit");
        let mut quotient = enc.quotient().clone();
        quotient.set_bit(bit, !quotient.bit(bit));
        enc = EncodedNumber::new(quotient * params.radix(), params.clone());
    }
    let k = enc.k().clone();

    let report = validate_encoded(&enc);
    if !report.passed() {
        return Some((format!("k fails validation: {report:?}"), k));
    }
    let decoded = decode_field(&enc);
    match decoded.to_field() {
        Ok(back) if back == *field => {}
        Ok(back) => return Some((format!("bit decode gives cells {:?}", back.cells()), k)),
        Err(err) => return Some((format!("bit decode: {err}"), k)),
    }
    for cell in params.cells() {
        let expected = field.get(&cell).expect("cell in range");
        let point = SamplePoint::cell_center(&cell, &k);
        for color in 1..=params.m() {
            let value = eval_f(params, &enc, &point, color).expect("point and color are valid");
            if exceeds_half(&value) != (expected == color) {
                return Some((
                    format!("literal evaluation disagrees at cell {cell:?}, color {color}"),
                    k,
                ));
            }
        }
    }
    None
}
