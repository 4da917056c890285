//! Encoding n-dimensional, m-color voxel objects as the natural number `k`
//! whose generalized Tupper graph reproduces them, and decoding any `k`
//! back into the object it plots.
//!
//! * [`params`] and [`field`] describe the lattice and its coloring.
//! * [`codec`] maps fields to `k` and back through bit tests.
//! * [`dyadic`] and [`eval`] evaluate the plotted formulas exactly, which
//!   makes them an independent check on the codec.
//! * [`classic`] handles the original 106x17 monochrome formula.
//! * [`imageio`] and [`render`] read and write images, voxel containers,
//!   palettes and `k` files.

pub mod classic;
pub mod codec;
pub mod dyadic;
pub mod eval;
pub mod field;
pub mod imageio;
pub mod params;
pub mod render;

pub use codec::{decode_cell, decode_field, encode, validate_encoded, EncodedNumber};
pub use dyadic::DyadicRational;
pub use field::ColorField;
pub use params::{BitIndex, GridParams};
