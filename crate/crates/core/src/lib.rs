//! Affine-invariant image features from the normalized Radon cumulative
//! distribution transform.
//!
//! Images are read as discrete probability measures on the plane. Each
//! measure is sliced along a grid of directions, every slice is replaced by
//! its quantile function sampled against the uniform law on `[0, 1]`, and the
//! resulting field is standardized per direction. Aggregating over directions
//! by maximum ([`nrcdt::max_nrcdt`]) or average ([`nrcdt::mean_nrcdt`]) gives a
//! fixed-length profile that does not see rotations, translations or
//! scalings of the input.
//!
//! ```
//! use nrcdt::prelude::*;
//!
//! let img = nrcdt::datagen::render_template(5, 64).unwrap();
//! let mu = image_to_measure(&img, DEFAULT_HALF_WIDTH).unwrap();
//! let sino = sinogram(&mu, &AngleGrid::new(16).unwrap(), 128).unwrap();
//! let field = rcdt(&sino, &ReferenceMeasure::uniform(32).unwrap());
//! let feature = max_nrcdt(&normalize_field(&field).unwrap());
//! assert_eq!(feature.len(), 32);
//! ```

pub mod cdt;
pub mod classify;
pub mod datagen;
pub mod error;
pub mod experiment;
pub mod image;
pub mod measure;
pub mod nrcdt;
pub mod ot;
pub mod radon;

pub use error::{Error, Result};
pub use image::Image;

pub mod prelude {
    pub use crate::cdt::{cdt_1d, rcdt, rcdt_exact, sliced_w2, QuantileField};
    pub use crate::error::{Error, Result};
    pub use crate::image::Image;
    pub use crate::measure::{
        diameter, image_to_measure, rho_moments, DiscreteMeasure1D, DiscreteMeasure2D, ReferenceMeasure,
        DEFAULT_HALF_WIDTH,
    };
    pub use crate::nrcdt::{
        max_nrcdt, mean_nrcdt, min_std, normalize_field, FeatureKind, FeatureVector, NormalizedField,
        RobustnessBudget,
    };
    pub use crate::radon::{restricted_slice, sinogram, AngleGrid, Sinogram};
}
