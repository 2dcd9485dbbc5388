use rayon::prelude::*;

use super::noise::{add_salt, Salt};
use super::rng::{derive_seed, rng_for, Range, GEOMETRY_STREAM, SALT_STREAM};
use super::templates::render_template;
use super::warp::{warp_affine, warp_sinusoidal, AffineParams, AffineRanges, Sinusoid};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::measure::{image_to_measure, DiscreteMeasure2D, DEFAULT_HALF_WIDTH};

/// Ranges of the non-affine and noise corruptions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorruptionRanges {
    pub f1: Range,
    pub f2: Range,
    pub a1: Range,
    pub a2: Range,
    /// Inclusive range of salt disc counts.
    pub salt_count: (usize, usize),
    /// Salt strength: disc radius in pixels.
    pub salt_radius: f64,
}

impl Default for CorruptionRanges {
    fn default() -> Self {
        Self::none()
    }
}

impl CorruptionRanges {
    pub const fn none() -> Self {
        Self {
            f1: Range::fixed(0.0),
            f2: Range::fixed(0.0),
            a1: Range::fixed(0.0),
            a2: Range::fixed(0.0),
            salt_count: (0, 0),
            salt_radius: 0.0,
        }
    }

    pub fn sample_sinusoid(&self, rng: &mut impl rand::Rng) -> Sinusoid {
        Sinusoid {
            f1: self.f1.sample(rng),
            f2: self.f2.sample(rng),
            a1: self.a1.sample(rng),
            a2: self.a2.sample(rng),
        }
    }

    pub fn sample_salt(&self, rng: &mut impl rand::Rng) -> Salt {
        let (lo, hi) = self.salt_count;
        let count = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
        Salt { count, radius: self.salt_radius }
    }
}

/// Corruption actually applied to one sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CorruptionParams {
    pub sinusoid: Sinusoid,
    pub salt: Salt,
}

/// Everything needed to regenerate a dataset bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub templates: Vec<usize>,
    pub samples_per_class: usize,
    pub affine: AffineRanges,
    pub corruption: CorruptionRanges,
    pub size: usize,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn new(templates: Vec<usize>, samples_per_class: usize, size: usize, seed: u64) -> Self {
        Self {
            templates,
            samples_per_class,
            affine: AffineRanges::identity(),
            corruption: CorruptionRanges::none(),
            size,
            seed,
        }
    }

    pub fn with_affine(mut self, affine: AffineRanges) -> Self {
        self.affine = affine;
        self
    }

    pub fn with_corruption(mut self, corruption: CorruptionRanges) -> Self {
        self.corruption = corruption;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.templates.is_empty() {
            return Err(Error::EmptyTemplateSet);
        }
        if self.size < 16 {
            return Err(Error::InvalidParameter(format!("image size {} below 16", self.size)));
        }
        let a = &self.affine;
        let c = &self.corruption;
        for r in [
            a.scale_x, a.scale_y, a.shear_x, a.shear_y, a.rotation, a.shift_x, a.shift_y, c.f1, c.f2, c.a1,
            c.a2,
        ] {
            Range::new(r.lo, r.hi)?;
        }
        if c.a1.lo < 0.0 || c.a2.lo < 0.0 || c.salt_radius < 0.0 {
            return Err(Error::InvalidParameter("negative corruption amplitude".into()));
        }
        if c.salt_count.0 > c.salt_count.1 {
            return Err(Error::InvalidParameter("salt count range is not ordered".into()));
        }
        Ok(())
    }
}

/// One generated image with its label and the parameters that made it.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub image: Image,
    /// Class index (position in the template list).
    pub label: usize,
    pub template: usize,
    pub index: usize,
    pub seed: u64,
    pub affine: AffineParams,
    pub corruption: CorruptionParams,
}

impl Sample {
    pub fn measure(&self) -> Result<DiscreteMeasure2D> {
        image_to_measure(&self.image, DEFAULT_HALF_WIDTH)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub spec: DatasetSpec,
    /// Clean templates, one per class.
    pub templates: Vec<Image>,
    /// Class-major samples.
    pub samples: Vec<Sample>,
}

impl Dataset {
    pub fn classes(&self) -> usize {
        self.templates.len()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.label).collect()
    }
}

/// Generates one sample: non-affine deformation, then the affine warp, then
/// salt noise.
pub fn generate_sample(template: &Image, spec: &DatasetSpec, label: usize, index: usize) -> Result<Sample> {
    let seed = derive_seed(spec.seed, label as u64, index as u64);
    let mut rng = rng_for(seed, GEOMETRY_STREAM);
    let affine = spec.affine.sample(&mut rng);
    let sinusoid = spec.corruption.sample_sinusoid(&mut rng);
    let mut salt_rng = rng_for(seed, SALT_STREAM);
    let salt = spec.corruption.sample_salt(&mut salt_rng);
    let deformed = warp_sinusoidal(template, &sinusoid);
    let warped = warp_affine(&deformed, &affine)?;
    let image = add_salt(&warped, &salt, &mut salt_rng);
    Ok(Sample {
        image,
        label,
        template: spec.templates[label],
        index,
        seed,
        affine,
        corruption: CorruptionParams { sinusoid, salt },
    })
}

/// Builds the full dataset in parallel; output is independent of the
/// thread count.
pub fn build_dataset(spec: &DatasetSpec) -> Result<Dataset> {
    spec.validate()?;
    let templates =
        spec.templates.iter().map(|&id| render_template(id, spec.size)).collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> =
        (0..templates.len()).flat_map(|c| (0..spec.samples_per_class).map(move |i| (c, i))).collect();
    let samples = jobs
        .par_iter()
        .map(|&(c, i)| generate_sample(&templates[c], spec, c, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset { spec: spec.clone(), templates, samples })
}
