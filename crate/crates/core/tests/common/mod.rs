#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tupper_core::{ColorField, DyadicRational, GridParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random grid with n in `ns`, extents in 1..=max_dim, m in 1..=max_m.
pub fn random_params(rng: &mut impl Rng, ns: &[usize], max_dim: u32, max_m: u32) -> GridParams {
    let n = ns[rng.gen_range(0..ns.len())];
    let dims: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=max_dim)).collect();
    let m = rng.gen_range(1..=max_m);
    GridParams::new(n, m, &dims).unwrap()
}

/// Random coloring; the fill probability itself is random so both sparse
/// and dense fields show up.
pub fn random_field(rng: &mut impl Rng, params: GridParams) -> ColorField {
    let density: f64 = rng.gen();
    let cells = (0..params.cell_count())
        .map(|_| {
            if rng.gen_bool(density) {
                rng.gen_range(1..=params.m())
            } else {
                0
            }
        })
        .collect();
    ColorField::from_cells(params, cells).unwrap()
}

/// Literal evaluation of `k = R * sum_j sum_{cell in S_j} 2^(R^n m_1 + ... + R m_n + j)`
/// with big-integer powers, independent of the codec's bit setting.
pub fn oracle_k(field: &ColorField) -> BigUint {
    let params = field.params();
    let radix = BigUint::from(params.radix());
    let n = params.n();
    let mut sum = BigUint::zero();
    for (j, set) in field.color_sets().iter().enumerate() {
        for cell in set {
            let mut exponent = BigUint::from(j as u64 + 1);
            for (i, &c) in cell.iter().enumerate() {
                exponent += radix.pow((n - i) as u32) * BigUint::from(c);
            }
            let e: u64 = exponent.try_into().unwrap();
            sum += BigUint::one() << e;
        }
    }
    radix * sum
}

/// A uniformly random dyadic offset in [0, 1) with at most `bits` fraction bits.
pub fn random_offset(rng: &mut impl Rng, bits: u32) -> DyadicRational {
    let numerator: u64 = rng.gen_range(0..(1u64 << bits));
    DyadicRational::new(numerator, -(bits as i64))
}
