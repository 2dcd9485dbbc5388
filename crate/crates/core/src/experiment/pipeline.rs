//! File-to-file steps behind the command-line subcommands.

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::formats::{read_dataset, write_dataset, StoredImage};
use crate::cdt::{read_matrix, write_matrix, FIELD_MAGIC};
use crate::classify::{classify_nt, evaluate, extract_all, EvalReport, FeatureConfig, FeatureSet};
use crate::datagen::build_dataset;
use crate::error::{Error, Result};
use crate::nrcdt::{FeatureKind, FeatureVector, FEATURE_MAGIC};

/// Generates the configured dataset into `dir`; returns the sample count.
pub fn generate_to_dir(cfg: &ExperimentConfig, dir: &Path) -> Result<usize> {
    let ds = build_dataset(&cfg.dataset)?;
    write_dataset(&ds, dir, &cfg.hash())?;
    Ok(ds.samples.len())
}

fn write_vector(path: &Path, fv: &FeatureVector, cfg: &FeatureConfig) -> Result<()> {
    let mut f = fs::File::create(path)?;
    match fv.kind {
        FeatureKind::RcdtFlat => write_matrix(&mut f, FIELD_MAGIC, cfg.points, cfg.angles, &fv.values),
        _ => write_matrix(&mut f, FEATURE_MAGIC, fv.len(), 1, &fv.values),
    }
}

fn read_vector(path: &Path, kind: FeatureKind) -> Result<FeatureVector> {
    let mut f = fs::File::open(path)?;
    let magic = if kind == FeatureKind::RcdtFlat { FIELD_MAGIC } else { FEATURE_MAGIC };
    let (_, _, values) = read_matrix(&mut f, magic)?;
    Ok(FeatureVector::new(values, kind))
}

/// Extracts every configured representation (first angle count) for the
/// images of a dataset directory and writes binary dumps plus a manifest.
pub fn features_to_dir(cfg: &ExperimentConfig, input: &Path, out: &Path) -> Result<usize> {
    let images = read_dataset(input)?;
    let fc = FeatureConfig::new(cfg.angles[0], cfg.radii, cfg.points);
    let kinds = &cfg.representations;
    let feats = images
        .par_iter()
        .map(|s: &StoredImage| extract_all(&s.image, kinds, &fc))
        .collect::<Result<Vec<_>>>()?;
    fs::create_dir_all(out)?;
    let mut manifest = String::from("file,role,class,representation\n");
    for (img, fvs) in images.iter().zip(&feats) {
        let stem = img.file.file_stem().and_then(|s| s.to_str()).unwrap_or("image");
        for fv in fvs {
            let name = format!("{stem}.{}.bin", fv.kind);
            write_vector(&out.join(&name), fv, &fc)?;
            let role = if img.is_template { "template" } else { "sample" };
            manifest.push_str(&format!("{name},{role},{},{}\n", img.class, fv.kind));
        }
    }
    fs::write(out.join("features.csv"), manifest)?;
    Ok(images.len())
}

/// Nearest-template evaluation of one representation from a features
/// directory.
pub fn classify_dir(cfg: &ExperimentConfig, input: &Path, kind: FeatureKind) -> Result<EvalReport> {
    let manifest_path = input.join("features.csv");
    let text = fs::read_to_string(&manifest_path)?;
    let (mut templates, mut t_labels, mut queries, mut truth) = (vec![], vec![], vec![], vec![]);
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(Error::Format { path: manifest_path.clone(), message: format!("bad row '{line}'") });
        }
        if f[3].parse::<FeatureKind>()? != kind {
            continue;
        }
        let class: usize = f[2].parse().map_err(|_| Error::Format {
            path: manifest_path.clone(),
            message: format!("bad class '{}'", f[2]),
        })?;
        let fv = read_vector(&input.join(f[0]), kind)?;
        if f[1] == "template" {
            templates.push(fv);
            t_labels.push(class);
        } else {
            queries.push(fv);
            truth.push(class);
        }
    }
    let set = FeatureSet::new(templates, t_labels, cfg.metrics[0])?.with_config_hash(cfg.hash());
    let mut report = evaluate(&classify_nt(&queries, &set)?, &truth)?;
    report.seed = cfg.seed();
    Ok(report)
}

/// Confusion matrix as CSV with the accuracy, seed and config hash.
pub fn report_csv(report: &EvalReport, kind: FeatureKind, config_hash: &str) -> String {
    let mut s = format!(
        "config_hash,representation,accuracy,seed\n{config_hash},{kind},{},{}\n\ntruth\\predicted",
        report.accuracy, report.seed
    );
    for c in 0..report.confusion.len() {
        s.push_str(&format!(",{c}"));
    }
    s.push('\n');
    for (t, row) in report.confusion.iter().enumerate() {
        s.push_str(&t.to_string());
        for v in row {
            s.push_str(&format!(",{v}"));
        }
        s.push('\n');
    }
    s
}
