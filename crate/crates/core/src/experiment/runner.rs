use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{Classifier, ExperimentConfig};
use super::formats::ResultRow;
use crate::classify::{
    classify_knn, classify_nt, evaluate, extract_all, linear_probe, FeatureConfig, FeatureSet, Metric,
};
use crate::datagen::{build_dataset, derive_seed, Dataset, DatasetSpec};
use crate::error::Result;
use crate::image::Image;
use crate::nrcdt::{FeatureKind, FeatureVector};

/// Seed of repetition `r`; the first repetition uses the master seed itself.
pub fn repetition_seed(master: u64, r: usize) -> u64 {
    if r == 0 {
        master
    } else {
        derive_seed(master, u64::MAX, r as u64)
    }
}

/// Features of every image, indexed `[image][kind]`.
fn features_of(
    images: &[&Image],
    kinds: &[FeatureKind],
    cfg: &FeatureConfig,
) -> Result<Vec<Vec<FeatureVector>>> {
    images.par_iter().map(|img| extract_all(img, kinds, cfg)).collect()
}

fn column(feats: &[Vec<FeatureVector>], i: usize) -> Vec<FeatureVector> {
    feats.iter().map(|f| f[i].clone()).collect()
}

/// Accuracy of one representation on one dataset.
fn score(
    classifier: Classifier,
    metric: Metric,
    templates: Vec<FeatureVector>,
    samples: Vec<FeatureVector>,
    ds: &Dataset,
) -> Result<f64> {
    let labels = ds.labels();
    match classifier {
        Classifier::Nt => {
            let set = FeatureSet::new(templates, (0..ds.classes()).collect(), metric)?;
            Ok(evaluate(&classify_nt(&samples, &set)?, &labels)?.accuracy)
        }
        Classifier::Knn { k, train_per_class } => {
            let (mut refs, mut ref_labels, mut queries, mut truth) = (vec![], vec![], vec![], vec![]);
            for (fv, s) in samples.into_iter().zip(&ds.samples) {
                if s.index < train_per_class {
                    refs.push(fv);
                    ref_labels.push(s.label);
                } else {
                    queries.push(fv);
                    truth.push(s.label);
                }
            }
            let set = FeatureSet::new(refs, ref_labels, metric)?;
            Ok(evaluate(&classify_knn(&queries, &set, k)?, &truth)?.accuracy)
        }
        Classifier::Probe { max_epochs } => {
            let mut by_class: BTreeMap<usize, Vec<Vec<f64>>> = BTreeMap::new();
            for (fv, s) in samples.into_iter().zip(&ds.samples) {
                by_class.entry(s.label).or_default().push(fv.values);
            }
            let classes: Vec<&Vec<Vec<f64>>> = by_class.values().collect();
            let mut pairs = 0;
            let mut separable = 0;
            for i in 0..classes.len() {
                for j in i + 1..classes.len() {
                    pairs += 1;
                    if linear_probe(classes[i], classes[j], max_epochs)?.separable {
                        separable += 1;
                    }
                }
            }
            Ok(if pairs == 0 { 1.0 } else { separable as f64 / pairs as f64 })
        }
    }
}

/// Accuracies keyed by `(kind, metric)` for one dataset at one angle count.
fn accuracies(
    cfg: &ExperimentConfig,
    ds: &Dataset,
    angles: usize,
    template_feats: Option<&[Vec<FeatureVector>]>,
) -> Result<BTreeMap<(FeatureKind, Metric), f64>> {
    let fc = FeatureConfig::new(angles, cfg.radii, cfg.points);
    let kinds = &cfg.representations;
    let owned;
    let tf = match template_feats {
        Some(t) => t,
        None => {
            owned = features_of(&ds.templates.iter().collect::<Vec<_>>(), kinds, &fc)?;
            &owned
        }
    };
    let sf = features_of(&ds.samples.iter().map(|s| &s.image).collect::<Vec<_>>(), kinds, &fc)?;
    let mut out = BTreeMap::new();
    for (i, &kind) in kinds.iter().enumerate() {
        for &metric in &cfg.metrics {
            let acc = score(cfg.classifier, metric, column(tf, i), column(&sf, i), ds)?;
            out.insert((kind, metric), acc);
        }
    }
    Ok(out)
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Runs every (angle count, representation, metric) combination over the
/// configured repetitions and returns one row per combination.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let hash = cfg.hash();
    let datasets: Vec<Dataset> = (0..cfg.repetitions)
        .map(|r| {
            let mut spec = cfg.dataset.clone();
            spec.seed = repetition_seed(cfg.seed(), r);
            build_dataset(&spec)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &angles in &cfg.angles {
        let start = Instant::now();
        let mut per_rep = Vec::with_capacity(cfg.repetitions);
        for ds in &datasets {
            per_rep.push(accuracies(cfg, ds, angles, None)?);
        }
        let runtime = if cfg.timing { start.elapsed().as_secs_f64() } else { 0.0 };
        for &kind in &cfg.representations {
            for &metric in &cfg.metrics {
                let accs: Vec<f64> = per_rep.iter().map(|m| m[&(kind, metric)]).collect();
                let (mean, std) = mean_std(&accs);
                rows.push(ResultRow {
                    config_hash: hash.clone(),
                    setting: cfg.setting.clone(),
                    angles,
                    radii: cfg.radii,
                    points: cfg.points,
                    representation: kind.to_string(),
                    metric: metric.to_string(),
                    accuracy_mean: mean,
                    accuracy_std: std,
                    seed: cfg.seed(),
                    runtime_s: runtime,
                });
            }
        }
    }
    Ok(rows)
}

/// Accuracy heatmaps over a salt-noise grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseResult {
    pub config_hash: String,
    pub seed: u64,
    pub angles: usize,
    pub strengths: Vec<f64>,
    pub counts: Vec<usize>,
    /// `accuracy[kind][count index][strength index]`, repetition means.
    pub accuracy: BTreeMap<FeatureKind, Vec<Vec<f64>>>,
}

impl PhaseResult {
    pub fn matrix(&self, kind: FeatureKind) -> Option<&Vec<Vec<f64>>> {
        self.accuracy.get(&kind)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("config_hash,angles,representation,strength,count,accuracy,seed\n");
        for (kind, m) in &self.accuracy {
            for (ci, row) in m.iter().enumerate() {
                for (si, acc) in row.iter().enumerate() {
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        self.config_hash,
                        self.angles,
                        kind,
                        self.strengths[si],
                        self.counts[ci],
                        acc,
                        self.seed
                    ));
                }
            }
        }
        s
    }
}

/// Salt-noise phase transition: one dataset per grid cell with disc count
/// and radius fixed, geometry shared across cells through the common seed.
/// Uses the first configured angle count and metric.
pub fn run_phase_transition(cfg: &ExperimentConfig) -> Result<PhaseResult> {
    cfg.validate()?;
    let grid = cfg
        .phase
        .clone()
        .ok_or_else(|| crate::error::Error::InvalidParameter("phase run needs a [phase] section".into()))?;
    let angles = cfg.angles[0];
    let metric = cfg.metrics[0];
    let fc = FeatureConfig::new(angles, cfg.radii, cfg.points);
    let clean = build_dataset(&DatasetSpec { samples_per_class: 0, ..cfg.dataset.clone() })?;
    let tf = features_of(&clean.templates.iter().collect::<Vec<_>>(), &cfg.representations, &fc)?;
    let sub = ExperimentConfig { metrics: vec![metric], ..cfg.clone() };
    let mut accuracy: BTreeMap<FeatureKind, Vec<Vec<f64>>> = cfg
        .representations
        .iter()
        .map(|&k| (k, vec![vec![0.0; grid.strengths.len()]; grid.counts.len()]))
        .collect();
    for (ci, &count) in grid.counts.iter().enumerate() {
        for (si, &strength) in grid.strengths.iter().enumerate() {
            let mut sums: BTreeMap<FeatureKind, f64> = BTreeMap::new();
            for r in 0..cfg.repetitions {
                let mut spec = cfg.dataset.clone();
                spec.seed = repetition_seed(cfg.seed(), r);
                spec.corruption.salt_count = (count, count);
                spec.corruption.salt_radius = strength;
                let ds = build_dataset(&spec)?;
                for ((kind, _), acc) in accuracies(&sub, &ds, angles, Some(&tf))? {
                    *sums.entry(kind).or_default() += acc;
                }
            }
            for (kind, total) in sums {
                accuracy.get_mut(&kind).unwrap()[ci][si] = total / cfg.repetitions as f64;
            }
        }
    }
    Ok(PhaseResult {
        config_hash: cfg.hash(),
        seed: cfg.seed(),
        angles,
        strengths: grid.strengths,
        counts: grid.counts,
        accuracy,
    })
}
