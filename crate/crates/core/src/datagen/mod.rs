//! Seeded synthetic datasets: template glyphs, affine and sinusoidal
//! warps, salt noise, and IDX ingestion.

pub mod dataset;
pub mod idx;
pub mod noise;
pub mod rng;
pub mod templates;
pub mod warp;

pub use dataset::{
    build_dataset, generate_sample, CorruptionParams, CorruptionRanges, Dataset, DatasetSpec, Sample,
};
pub use idx::{encode_idx, parse_idx, read_idx, write_idx, IdxData};
pub use noise::{add_salt, Salt};
pub use rng::{derive_seed, rng_for, Range};
pub use templates::{render_template, TEMPLATE_COUNT};
pub use warp::{warp_affine, warp_sinusoidal, AffineParams, AffineRanges, Sinusoid};
