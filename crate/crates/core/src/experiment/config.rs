//! Flat `key = value` experiment configuration with `[section]` headers.
//!
//! ```text
//! [dataset]
//! templates = 1, 2, 3
//! samples_per_class = 10
//! rotation = 0, 360
//! shift_x = -20, 20
//!
//! [discretization]
//! angles = 4, 16, 64
//!
//! [run]
//! representations = mnrcdt, anrcdt
//! classifier = nt
//! seed = 7
//! ```
//!
//! Ranges are written `lo, hi` or as a single fixed value. Unknown keys are
//! rejected with their line number.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::classify::Metric;
use crate::datagen::{AffineRanges, CorruptionRanges, DatasetSpec, Range};
use crate::error::{Error, Result};
use crate::nrcdt::FeatureKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classifier {
    /// Nearest clean template.
    Nt,
    /// k-NN against the first `train_per_class` samples of every class.
    Knn { k: usize, train_per_class: usize },
    /// Pairwise perceptron probes; "accuracy" is the separable fraction.
    Probe { max_epochs: usize },
}

/// Salt-noise grid swept by the phase-transition runner.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    /// Disc radii in pixels (columns of the heatmap).
    pub strengths: Vec<f64>,
    /// Disc counts (rows of the heatmap).
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub angles: Vec<usize>,
    pub radii: usize,
    pub points: usize,
    pub representations: Vec<FeatureKind>,
    pub metrics: Vec<Metric>,
    pub classifier: Classifier,
    pub repetitions: usize,
    pub setting: String,
    /// Record wall-clock runtimes (makes output non-reproducible).
    pub timing: bool,
    pub phase: Option<PhaseGrid>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetSpec::new((1..=12).collect(), 10, 256, 0),
            angles: vec![128],
            radii: 850,
            points: 64,
            representations: FeatureKind::ALL.to_vec(),
            metrics: vec![Metric::L2],
            classifier: Classifier::Nt,
            repetitions: 1,
            setting: "default".into(),
            timing: false,
            phase: None,
        }
    }
}

fn fmt_range(r: &Range) -> String {
    if r.is_fixed() {
        format!("{}", r.lo)
    } else {
        format!("{}, {}", r.lo, r.hi)
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl ExperimentConfig {
    pub fn seed(&self) -> u64 {
        self.dataset.seed
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        self.dataset.validate()?;
        if self.angles.is_empty() || self.angles.contains(&0) {
            return bad("angles must be positive");
        }
        if self.radii < 2 || self.points < 2 {
            return bad("radii and points must be at least 2");
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1");
        }
        if self.representations.is_empty() || self.metrics.is_empty() {
            return bad("need at least one representation and metric");
        }
        if let Classifier::Knn { k, train_per_class } = self.classifier {
            if train_per_class >= self.dataset.samples_per_class {
                return bad("train_per_class leaves no queries");
            }
            if k == 0 || k > train_per_class * self.dataset.templates.len() {
                return Err(Error::KTooLarge {
                    k,
                    available: train_per_class * self.dataset.templates.len(),
                });
            }
        }
        if let Some(p) = &self.phase {
            if p.strengths.is_empty() || p.counts.is_empty() {
                return bad("phase grid is empty");
            }
        }
        Ok(())
    }

    /// Canonical text form; [`parse_config`] inverts it exactly.
    pub fn to_text(&self) -> String {
        let d = &self.dataset;
        let a = &d.affine;
        let c = &d.corruption;
        let mut s = String::new();
        let _ = writeln!(s, "[dataset]");
        let _ = writeln!(s, "templates = {}", join(&d.templates));
        let _ = writeln!(s, "samples_per_class = {}", d.samples_per_class);
        let _ = writeln!(s, "size = {}", d.size);
        for (k, r) in [
            ("scale_x", &a.scale_x),
            ("scale_y", &a.scale_y),
            ("shear_x", &a.shear_x),
            ("shear_y", &a.shear_y),
            ("rotation", &a.rotation),
            ("shift_x", &a.shift_x),
            ("shift_y", &a.shift_y),
            ("sin_f1", &c.f1),
            ("sin_f2", &c.f2),
            ("sin_a1", &c.a1),
            ("sin_a2", &c.a2),
        ] {
            let _ = writeln!(s, "{k} = {}", fmt_range(r));
        }
        let _ = writeln!(s, "salt_count = {}, {}", c.salt_count.0, c.salt_count.1);
        let _ = writeln!(s, "salt_radius = {}", c.salt_radius);
        let _ = writeln!(s, "\n[discretization]");
        let _ = writeln!(s, "angles = {}", join(&self.angles));
        let _ = writeln!(s, "radii = {}", self.radii);
        let _ = writeln!(s, "points = {}", self.points);
        let _ = writeln!(s, "\n[run]");
        let _ = writeln!(s, "setting = {}", self.setting);
        let _ = writeln!(s, "representations = {}", join(&self.representations));
        let _ = writeln!(s, "metrics = {}", join(&self.metrics));
        match self.classifier {
            Classifier::Nt => {
                let _ = writeln!(s, "classifier = nt");
            }
            Classifier::Knn { k, train_per_class } => {
                let _ = writeln!(s, "classifier = knn\nk = {k}\ntrain_per_class = {train_per_class}");
            }
            Classifier::Probe { max_epochs } => {
                let _ = writeln!(s, "classifier = probe\nprobe_epochs = {max_epochs}");
            }
        }
        let _ = writeln!(s, "repetitions = {}", self.repetitions);
        let _ = writeln!(s, "seed = {}", d.seed);
        let _ = writeln!(s, "timing = {}", self.timing);
        if let Some(p) = &self.phase {
            let _ = writeln!(s, "\n[phase]");
            let _ = writeln!(s, "strengths = {}", join(&p.strengths));
            let _ = writeln!(s, "counts = {}", join(&p.counts));
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

fn parse_list<T: std::str::FromStr>(v: &str, line: usize) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Config { line, message: format!("cannot parse '{s}'") }))
        .collect()
}

fn parse_one<T: std::str::FromStr>(v: &str, line: usize) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Config { line, message: format!("cannot parse '{v}'") })
}

fn parse_range(v: &str, line: usize) -> Result<Range> {
    let xs: Vec<f64> = parse_list(v, line)?;
    let r = match xs.as_slice() {
        [x] => Range::fixed(*x),
        [lo, hi] => Range { lo: *lo, hi: *hi },
        _ => return Err(Error::Config { line, message: "expected 'lo, hi' or a single value".into() }),
    };
    Range::new(r.lo, r.hi).map_err(|e| Error::Config { line, message: e.to_string() })
}

/// Parses the text form; omitted keys keep their defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut affine = AffineRanges::identity();
    let mut corruption = CorruptionRanges::none();
    let mut section = String::new();
    let mut classifier = "nt".to_string();
    let (mut k, mut train, mut epochs) = (1usize, 1usize, 1000usize);
    let mut strengths: Option<Vec<f64>> = None;
    let mut counts: Option<Vec<usize>> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = name.trim().to_string();
            if !matches!(section.as_str(), "dataset" | "discretization" | "run" | "phase") {
                return Err(Error::Config { line, message: format!("unknown section [{section}]") });
            }
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or(Error::Config { line, message: "expected 'key = value'".into() })?;
        let (key, value) = (key.trim(), value.trim());
        let unknown = || Error::Config { line, message: format!("unknown key '{key}' in [{section}]") };
        match section.as_str() {
            "dataset" => match key {
                "templates" => cfg.dataset.templates = parse_list(value, line)?,
                "samples_per_class" => cfg.dataset.samples_per_class = parse_one(value, line)?,
                "size" => cfg.dataset.size = parse_one(value, line)?,
                "scale_x" => affine.scale_x = parse_range(value, line)?,
                "scale_y" => affine.scale_y = parse_range(value, line)?,
                "shear_x" => affine.shear_x = parse_range(value, line)?,
                "shear_y" => affine.shear_y = parse_range(value, line)?,
                "rotation" => affine.rotation = parse_range(value, line)?,
                "shift_x" => affine.shift_x = parse_range(value, line)?,
                "shift_y" => affine.shift_y = parse_range(value, line)?,
                "sin_f1" => corruption.f1 = parse_range(value, line)?,
                "sin_f2" => corruption.f2 = parse_range(value, line)?,
                "sin_a1" => corruption.a1 = parse_range(value, line)?,
                "sin_a2" => corruption.a2 = parse_range(value, line)?,
                "salt_count" => {
                    let xs: Vec<usize> = parse_list(value, line)?;
                    corruption.salt_count = match xs.as_slice() {
                        [n] => (*n, *n),
                        [lo, hi] if lo <= hi => (*lo, *hi),
                        _ => return Err(Error::Config { line, message: "bad salt_count".into() }),
                    };
                }
                "salt_radius" => corruption.salt_radius = parse_one(value, line)?,
                _ => return Err(unknown()),
            },
            "discretization" => match key {
                "angles" => cfg.angles = parse_list(value, line)?,
                "radii" => cfg.radii = parse_one(value, line)?,
                "points" => cfg.points = parse_one(value, line)?,
                _ => return Err(unknown()),
            },
            "run" => match key {
                "setting" => cfg.setting = value.to_string(),
                "representations" => cfg.representations = parse_list(value, line)?,
                "metrics" => cfg.metrics = parse_list(value, line)?,
                "classifier" => classifier = value.to_ascii_lowercase(),
                "k" => k = parse_one(value, line)?,
                "train_per_class" => train = parse_one(value, line)?,
                "probe_epochs" => epochs = parse_one(value, line)?,
                "repetitions" => cfg.repetitions = parse_one(value, line)?,
                "seed" => cfg.dataset.seed = parse_one(value, line)?,
                "timing" => cfg.timing = parse_one(value, line)?,
                _ => return Err(unknown()),
            },
            "phase" => match key {
                "strengths" => strengths = Some(parse_list(value, line)?),
                "counts" => counts = Some(parse_list(value, line)?),
                _ => return Err(unknown()),
            },
            _ => return Err(Error::Config { line, message: "key outside any section".into() }),
        }
    }
    cfg.classifier = match classifier.as_str() {
        "nt" => Classifier::Nt,
        "knn" => Classifier::Knn { k, train_per_class: train },
        "probe" => Classifier::Probe { max_epochs: epochs },
        other => return Err(Error::Config { line: 0, message: format!("unknown classifier '{other}'") }),
    };
    cfg.phase = match (strengths, counts) {
        (Some(strengths), Some(counts)) => Some(PhaseGrid { strengths, counts }),
        (None, None) => None,
        _ => return Err(Error::Config { line: 0, message: "[phase] needs strengths and counts".into() }),
    };
    cfg.dataset.affine = affine;
    cfg.dataset.corruption = corruption;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_config(&text)
}
