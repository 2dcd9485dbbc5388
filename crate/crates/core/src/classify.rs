//! Feature pipelines, nearest-template and k-NN classifiers, a perceptron
//! separability probe, and accuracy bookkeeping.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::cdt::rcdt;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::measure::{image_to_measure, ReferenceMeasure, DEFAULT_HALF_WIDTH};
use crate::nrcdt::{
    max_nrcdt, mean_nrcdt, normalize_field_with_guard, FeatureKind, FeatureVector, STD_GUARD,
};
use crate::radon::{sinogram, AngleGrid};

/// Discretization of the transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureConfig {
    pub angles: usize,
    pub radii: usize,
    pub points: usize,
    pub half_width: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self { angles: 128, radii: 850, points: 64, half_width: DEFAULT_HALF_WIDTH }
    }
}

impl FeatureConfig {
    pub fn new(angles: usize, radii: usize, points: usize) -> Self {
        Self { angles, radii, points, ..Self::default() }
    }

    /// Degeneracy threshold for binned columns: one radial bin width.
    ///
    /// Splatting spreads a point mass over two neighbouring bins, leaving it
    /// with a std of up to half a bin, so anything narrower than a bin is a
    /// point at this resolution.
    pub fn std_guard(&self) -> f64 {
        if self.radii < 2 {
            return STD_GUARD;
        }
        STD_GUARD.max(2.0 / (self.radii - 1) as f64)
    }
}

/// Computes every requested representation of one image, sharing the
/// sinogram and field between them.
pub fn extract_all(img: &Image, kinds: &[FeatureKind], cfg: &FeatureConfig) -> Result<Vec<FeatureVector>> {
    let needs_field = kinds.iter().any(|k| *k != FeatureKind::EuclideanFlat);
    let field = if needs_field {
        let mu = image_to_measure(img, cfg.half_width)?;
        let sino = sinogram(&mu, &AngleGrid::new(cfg.angles)?, cfg.radii)?;
        Some(rcdt(&sino, &ReferenceMeasure::uniform(cfg.points)?))
    } else {
        None
    };
    let needs_norm = kinds.iter().any(|k| matches!(k, FeatureKind::MaxNrcdt | FeatureKind::MeanNrcdt));
    let normalized = match (&field, needs_norm) {
        (Some(f), true) => Some(normalize_field_with_guard(f, cfg.std_guard())?),
        _ => None,
    };
    Ok(kinds
        .iter()
        .map(|kind| match kind {
            FeatureKind::EuclideanFlat => FeatureVector::new(img.data().to_vec(), *kind),
            FeatureKind::RcdtFlat => FeatureVector::new(field.as_ref().unwrap().as_slice().to_vec(), *kind),
            FeatureKind::MaxNrcdt => max_nrcdt(normalized.as_ref().unwrap()),
            FeatureKind::MeanNrcdt => mean_nrcdt(normalized.as_ref().unwrap()),
        })
        .collect())
}

/// One representation of one image.
///
/// Takes the raster rather than its measure since the Euclidean baseline
/// works on pixel values.
pub fn extract_features(img: &Image, kind: FeatureKind, cfg: &FeatureConfig) -> Result<FeatureVector> {
    Ok(extract_all(img, &[kind], cfg)?.pop().unwrap())
}

/// Distance used to compare feature vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Metric {
    #[default]
    L2,
    LInf,
}

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Metric::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Metric::LInf => diffs.fold(0.0, f64::max),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::L2 => "l2",
            Metric::LInf => "linf",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l2" => Ok(Metric::L2),
            "linf" | "inf" => Ok(Metric::LInf),
            other => Err(Error::InvalidParameter(format!("unknown metric '{other}'"))),
        }
    }
}

/// Labeled feature vectors of a single representation.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    pub vectors: Vec<FeatureVector>,
    pub labels: Vec<usize>,
    pub metric: Metric,
    pub config_hash: String,
}

impl FeatureSet {
    pub fn new(vectors: Vec<FeatureVector>, labels: Vec<usize>, metric: Metric) -> Result<Self> {
        if vectors.len() != labels.len() {
            return Err(Error::LengthMismatch(vectors.len(), labels.len()));
        }
        if let Some(first) = vectors.first() {
            for v in &vectors {
                if v.len() != first.len() {
                    return Err(Error::LengthMismatch(v.len(), first.len()));
                }
                if v.kind != first.kind {
                    return Err(Error::InvalidParameter("mixed feature kinds in one set".into()));
                }
            }
        }
        Ok(Self { vectors, labels, metric, config_hash: String::new() })
    }

    pub fn with_config_hash(mut self, hash: impl Into<String>) -> Self {
        self.config_hash = hash.into();
        self
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn check_query(&self, q: &FeatureVector) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyTemplateSet);
        }
        if q.len() != self.vectors[0].len() {
            return Err(Error::LengthMismatch(q.len(), self.vectors[0].len()));
        }
        Ok(())
    }
}

/// Label of the closest template; ties go to the lowest label.
pub fn nearest_template(query: &FeatureVector, templates: &FeatureSet) -> Result<usize> {
    templates.check_query(query)?;
    let mut best = (f64::INFINITY, usize::MAX);
    for (v, &label) in templates.vectors.iter().zip(&templates.labels) {
        let d = templates.metric.distance(&query.values, &v.values);
        if d < best.0 || (d == best.0 && label < best.1) {
            best = (d, label);
        }
    }
    Ok(best.1)
}

/// Majority vote among the `k` nearest references. Neighbours are ordered by
/// distance then index; vote ties go to the lowest label.
pub fn knn(query: &FeatureVector, refs: &FeatureSet, k: usize) -> Result<usize> {
    refs.check_query(query)?;
    if k == 0 || k > refs.len() {
        return Err(Error::KTooLarge { k, available: refs.len() });
    }
    let mut order: Vec<(f64, usize)> = refs
        .vectors
        .iter()
        .enumerate()
        .map(|(i, v)| (refs.metric.distance(&query.values, &v.values), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let classes = refs.labels.iter().max().unwrap() + 1;
    let mut votes = vec![0usize; classes];
    for &(_, i) in &order[..k] {
        votes[refs.labels[i]] += 1;
    }
    let top = *votes.iter().max().unwrap();
    Ok(votes.iter().position(|&v| v == top).unwrap())
}

/// Outcome of the perceptron probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub separable: bool,
    /// Smallest signed distance to the hyperplane; positive iff separable.
    pub margin: f64,
    pub epochs: usize,
    pub weights: Vec<f64>,
    pub bias: f64,
}

/// Perceptron with bias between point sets `a` (label +1) and `b` (-1).
pub fn linear_probe(a: &[Vec<f64>], b: &[Vec<f64>], max_epochs: usize) -> Result<ProbeResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyTemplateSet);
    }
    let dim = a[0].len();
    if let Some(v) = a.iter().chain(b).find(|v| v.len() != dim) {
        return Err(Error::LengthMismatch(v.len(), dim));
    }
    let points: Vec<(&[f64], f64)> =
        a.iter().map(|v| (v.as_slice(), 1.0)).chain(b.iter().map(|v| (v.as_slice(), -1.0))).collect();
    // centring and a bias coordinate of the data's scale keep the iteration
    // count reasonable
    let mut centre = vec![0.0; dim];
    for (x, _) in &points {
        centre.iter_mut().zip(*x).for_each(|(c, v)| *c += v);
    }
    centre.iter_mut().for_each(|c| *c /= points.len() as f64);
    let scale = points
        .iter()
        .map(|(x, _)| x.iter().zip(&centre).map(|(v, c)| (v - c).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut w = vec![0.0; dim];
    let mut wb = 0.0;
    let score = |w: &[f64], wb: f64, x: &[f64]| -> f64 {
        w.iter().zip(x).zip(&centre).map(|((wi, xi), ci)| wi * (xi - ci)).sum::<f64>() + wb * scale
    };
    let mut epochs = 0;
    let mut converged = false;
    while epochs < max_epochs {
        epochs += 1;
        let mut mistakes = 0;
        for (x, y) in &points {
            if y * score(&w, wb, x) <= 0.0 {
                mistakes += 1;
                w.iter_mut().zip(*x).zip(&centre).for_each(|((wi, xi), ci)| *wi += y * (xi - ci));
                wb += y * scale;
            }
        }
        if mistakes == 0 {
            converged = true;
            break;
        }
    }
    let norm = (w.iter().map(|v| v * v).sum::<f64>() + wb * wb).sqrt();
    let margin = if norm > 0.0 {
        points.iter().map(|(x, y)| y * score(&w, wb, x) / norm).fold(f64::INFINITY, f64::min)
    } else {
        0.0
    };
    let bias = wb * scale - w.iter().zip(&centre).map(|(wi, ci)| wi * ci).sum::<f64>();
    Ok(ProbeResult { separable: converged && margin > 0.0, margin, epochs, weights: w, bias })
}

/// Accuracy and confusion matrix of one classification run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    /// `confusion[truth][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    pub seed: u64,
    pub runtime_s: f64,
}

impl EvalReport {
    pub fn total(&self) -> usize {
        self.confusion.iter().flatten().sum()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        self.confusion.iter().map(|row| row.iter().sum()).collect()
    }
}

pub fn evaluate(predictions: &[usize], truth: &[usize]) -> Result<EvalReport> {
    if predictions.len() != truth.len() || truth.is_empty() {
        return Err(Error::LengthMismatch(predictions.len(), truth.len()));
    }
    let classes = predictions.iter().chain(truth).max().unwrap() + 1;
    let mut confusion = vec![vec![0usize; classes]; classes];
    for (&p, &t) in predictions.iter().zip(truth) {
        confusion[t][p] += 1;
    }
    let correct: usize = (0..classes).map(|c| confusion[c][c]).sum();
    Ok(EvalReport { accuracy: correct as f64 / truth.len() as f64, confusion, seed: 0, runtime_s: 0.0 })
}

/// Nearest-template predictions for a batch of queries.
pub fn classify_nt(queries: &[FeatureVector], templates: &FeatureSet) -> Result<Vec<usize>> {
    queries.par_iter().map(|q| nearest_template(q, templates)).collect()
}

/// k-NN predictions for a batch of queries.
pub fn classify_knn(queries: &[FeatureVector], refs: &FeatureSet, k: usize) -> Result<Vec<usize>> {
    queries.par_iter().map(|q| knn(q, refs, k)).collect()
}
