//! Normalized Radon-CDT.
//!
//! Every angle's quantile profile is standardized against the reference
//! (mean zero, std one). Aggregating the standardized columns by pointwise
//! maximum gives the max-normalized feature, by uniform average the
//! mean-normalized one. Affine maps act on the field only by reparametrizing
//! the angle, so the max-feature is affine invariant and the mean-feature
//! moves by at most the anisotropy of the map.
//!
//! The module also evaluates the perturbation radii that bound how far the
//! features move when the input measure is displaced in `W_inf` or `W_2`.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::cdt::{read_matrix, write_matrix, QuantileField};
use crate::error::{Error, Result};
use crate::measure::{rho_moments, rho_norm, ReferenceMeasure};
use crate::radon::AngleGrid;

/// Smallest per-angle std accepted before a direction counts as degenerate.
pub const STD_GUARD: f64 = 1e-12;

/// Magic bytes of the binary feature-vector dump.
pub const FEATURE_MAGIC: &[u8; 4] = b"NRCF";

/// Standardized field with the raw per-angle moments kept alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedField {
    values: Vec<f64>,
    means: Vec<f64>,
    stds: Vec<f64>,
    angles: AngleGrid,
    reference: ReferenceMeasure,
}

impl NormalizedField {
    pub fn points(&self) -> usize {
        self.reference.len()
    }

    pub fn angle_count(&self) -> usize {
        self.angles.len()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        let l = self.points();
        &self.values[j * l..(j + 1) * l]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.points())
    }

    /// Per-angle reference mean of the raw field.
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Per-angle reference std of the raw field.
    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// `rho x u_S1` norm of the standardized field (one up to rounding).
    pub fn norm(&self) -> f64 {
        rho_norm(&self.values)
    }
}

/// Standardizes every column of `field`.
pub fn normalize_field(field: &QuantileField) -> Result<NormalizedField> {
    normalize_field_with_guard(field, STD_GUARD)
}

/// [`normalize_field`] with an explicit degeneracy threshold.
pub fn normalize_field_with_guard(field: &QuantileField, guard: f64) -> Result<NormalizedField> {
    let mut values = Vec::with_capacity(field.as_slice().len());
    let mut means = Vec::with_capacity(field.angle_count());
    let mut stds = Vec::with_capacity(field.angle_count());
    for (j, col) in field.columns().enumerate() {
        let (mean, std) = rho_moments(col);
        if std < guard || std == 0.0 {
            return Err(Error::DegenerateDirection(j));
        }
        values.extend(col.iter().map(|v| (v - mean) / std));
        means.push(mean);
        stds.push(std);
    }
    Ok(NormalizedField { values, means, stds, angles: field.angles().clone(), reference: *field.reference() })
}

/// Zero-mean quantile profile of column `j`: the first normalization step.
pub fn zero_mean_column(field: &QuantileField, j: usize) -> Vec<f64> {
    let col = field.column(j);
    let (mean, _) = rho_moments(col);
    col.iter().map(|v| v - mean).collect()
}

/// Minimum over angles of the raw per-angle std.
pub fn min_std(field: &QuantileField) -> f64 {
    field.columns().map(|c| rho_moments(c).1).fold(f64::INFINITY, f64::min)
}

/// Which representation a feature vector holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureKind {
    /// Pointwise max over angles of the normalized field.
    MaxNrcdt,
    /// Uniform average over angles of the normalized field.
    MeanNrcdt,
    /// Raw R-CDT field, flattened column by column.
    RcdtFlat,
    /// Raw pixel values.
    EuclideanFlat,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 4] = [Self::EuclideanFlat, Self::RcdtFlat, Self::MaxNrcdt, Self::MeanNrcdt];

    pub fn name(self) -> &'static str {
        match self {
            Self::MaxNrcdt => "mnrcdt",
            Self::MeanNrcdt => "anrcdt",
            Self::RcdtFlat => "rcdt",
            Self::EuclideanFlat => "euclidean",
        }
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeatureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mnrcdt" | "max" => Ok(Self::MaxNrcdt),
            "anrcdt" | "mean" => Ok(Self::MeanNrcdt),
            "rcdt" => Ok(Self::RcdtFlat),
            "euclidean" | "eucl" => Ok(Self::EuclideanFlat),
            other => Err(Error::InvalidParameter(format!("unknown representation '{other}'"))),
        }
    }
}

/// Where a feature vector came from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub sample_id: Option<String>,
    pub config_hash: Option<String>,
}

/// Feature profile of one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub kind: FeatureKind,
    pub provenance: Provenance,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>, kind: FeatureKind) -> Self {
        Self { values, kind, provenance: Provenance::default() }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `v_k = max_j n_kj`.
pub fn max_nrcdt(n: &NormalizedField) -> FeatureVector {
    let mut out = vec![f64::NEG_INFINITY; n.points()];
    for col in n.columns() {
        for (o, v) in out.iter_mut().zip(col) {
            *o = o.max(*v);
        }
    }
    FeatureVector::new(out, FeatureKind::MaxNrcdt)
}

/// `v_k = (1/M) sum_j n_kj`.
pub fn mean_nrcdt(n: &NormalizedField) -> FeatureVector {
    let mut out = vec![0.0; n.points()];
    for col in n.columns() {
        for (o, v) in out.iter_mut().zip(col) {
            *o += v;
        }
    }
    let m = n.angle_count() as f64;
    out.iter_mut().for_each(|v| *v /= m);
    FeatureVector::new(out, FeatureKind::MeanNrcdt)
}

/// Writes a feature vector in the `NRCF` layout (`L x 1` matrix).
pub fn write_feature(out: &mut impl Write, fv: &FeatureVector) -> Result<()> {
    write_matrix(out, FEATURE_MAGIC, fv.len(), 1, &fv.values)
}

/// Reads an `NRCF` dump; the representation tag is supplied by the caller.
pub fn read_feature(input: &mut impl Read, kind: FeatureKind) -> Result<FeatureVector> {
    let (rows, cols, values) = read_matrix(input, FEATURE_MAGIC)?;
    if cols != 1 && rows != 0 {
        // flattened multi-column payloads are accepted as one long vector
        debug_assert_eq!(values.len(), rows * cols);
    }
    Ok(FeatureVector::new(values, kind))
}

/// Inputs of the perturbation radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustnessBudget {
    /// Perturbation size in `W_inf` (max-feature) or `W_2` (mean-feature).
    pub eps: f64,
    /// Minimum per-angle std of the template field.
    pub c0: f64,
    /// Diameter of the template support.
    pub diam: f64,
}

impl RobustnessBudget {
    pub fn new(eps: f64, c0: f64, diam: f64) -> Self {
        Self { eps, c0, diam }
    }

    fn check(&self) -> Result<()> {
        if !(2.0 * self.eps < self.c0) {
            return Err(Error::BudgetExceeded { eps: self.eps, c0: self.c0 });
        }
        Ok(())
    }
}

/// Sup-norm radius of the max-feature under a `W_inf` perturbation of size
/// `eps`: `4 eps (diam + 2 eps) / (c0 (c0 - 2 eps))`.
pub fn winf_radius(b: &RobustnessBudget) -> Result<f64> {
    b.check()?;
    Ok(4.0 * b.eps * (b.diam + 2.0 * b.eps) / (b.c0 * (b.c0 - 2.0 * b.eps)))
}

/// Reference-norm radius of the mean-feature under a `W_2` perturbation of
/// size `eps`: `4 eps / c0`.
pub fn w2_radius(b: &RobustnessBudget) -> Result<f64> {
    b.check()?;
    Ok(4.0 * b.eps / b.c0)
}

/// Singular values `(sigma_min, sigma_max)` of a 2x2 matrix.
pub fn singular_values(a: [[f64; 2]; 2]) -> (f64, f64) {
    let fro = a.iter().flatten().map(|v| v * v).sum::<f64>();
    let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).abs();
    let disc = (fro * fro - 4.0 * det * det).max(0.0).sqrt();
    let smax = ((fro + disc) / 2.0).sqrt();
    let smin = if smax > 0.0 { det / smax } else { 0.0 };
    (smin, smax)
}

/// `(sigma_max - sigma_min) / sigma_min`, the quantity that bounds how far
/// the mean-feature moves under `x -> A x + y`.
pub fn anisotropy(a: [[f64; 2]; 2]) -> f64 {
    let (smin, smax) = singular_values(a);
    (smax - smin) / smin
}

/// Membership test of a matrix in the admissible set for mean-feature
/// separation of two templates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    /// `(sigma_max - sigma_min) / sigma_min` of the matrix.
    pub anisotropy: f64,
    /// `c * |aNR[mu0] - aNR[nu0]| / max(C_mu, C_nu)`.
    pub bound: f64,
}

impl Admissibility {
    pub fn admissible(&self) -> bool {
        self.anisotropy <= self.bound
    }
}

/// Evaluates the admissibility bound for `a` given the separation constant
/// `c` in `(0, 1/2)`, the mean-feature gap of the two templates and their
/// normalized-field norms.
pub fn admissibility(
    a: [[f64; 2]; 2],
    c: f64,
    feature_gap: f64,
    field_norm_mu: f64,
    field_norm_nu: f64,
) -> Result<Admissibility> {
    if !(c > 0.0 && c < 0.5) {
        return Err(Error::InvalidParameter(format!("separation constant {c} outside (0, 1/2)")));
    }
    Ok(Admissibility { anisotropy: anisotropy(a), bound: c * feature_gap / field_norm_mu.max(field_norm_nu) })
}

/// Largest `W_2` perturbation under which two mean-feature classes built
/// from admissible matrices remain separable, for constants `c < c' < 1/2`.
pub fn w2_separation_eps(
    c: f64,
    c_prime: f64,
    feature_gap: f64,
    c_mu: f64,
    c_nu: f64,
    field_norm_mu: f64,
    field_norm_nu: f64,
) -> Result<f64> {
    if !(c > 0.0 && c < c_prime && c_prime < 0.5) {
        return Err(Error::InvalidParameter("need 0 < c < c' < 1/2".into()));
    }
    let big = field_norm_mu.max(field_norm_nu);
    let small = c_mu.min(c_nu);
    let eps = (c_prime - c) / 4.0 * small * feature_gap * big / (c * feature_gap + big);
    Ok(eps.min(small / 2.0))
}

/// Largest `W_inf` perturbation satisfying the max-feature separation
/// condition, found by bisection on the sum of both radii.
pub fn winf_separation_eps(feature_gap: f64, mu: (f64, f64), nu: (f64, f64)) -> f64 {
    let (c_mu, diam_mu) = mu;
    let (c_nu, diam_nu) = nu;
    let limit = c_mu.min(c_nu) / 2.0;
    let total = |eps: f64| {
        4.0 * eps
            * ((diam_mu + 2.0 * eps) / (c_mu * (c_mu - 2.0 * eps))
                + (diam_nu + 2.0 * eps) / (c_nu * (c_nu - 2.0 * eps)))
    };
    let (mut lo, mut hi) = (0.0, limit);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) < feature_gap {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdt::rcdt_exact;
    use crate::measure::DiscreteMeasure2D;

    fn field_from(cols: Vec<Vec<f64>>) -> QuantileField {
        let m = cols.len();
        let l = cols[0].len();
        QuantileField::from_columns(cols, AngleGrid::new(m).unwrap(), ReferenceMeasure::uniform(l).unwrap())
            .unwrap()
    }

    #[test]
    fn collinear_atoms_are_degenerate() {
        let m = DiscreteMeasure2D::uniform(vec![[-0.5, 0.0], [0.5, 0.0]]).unwrap();
        let f = rcdt_exact(&m, &AngleGrid::new(4).unwrap(), &ReferenceMeasure::uniform(16).unwrap()).unwrap();
        assert!(matches!(normalize_field(&f), Err(Error::DegenerateDirection(1))));
        assert!(min_std(&f) < 1e-12);
    }

    #[test]
    fn affine_column_maps_to_same_normalized_column() {
        let base: Vec<f64> = (0..16).map(|k| (k as f64 * 0.37).sin() + k as f64 * 0.1).collect();
        let scaled: Vec<f64> = base.iter().map(|v| 2.5 * v - 0.7).collect();
        let n = normalize_field(&field_from(vec![base, scaled])).unwrap();
        for (a, b) in n.column(0).iter().zip(n.column(1)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn single_angle_aggregates_equal_the_column() {
        let col: Vec<f64> = (0..10).map(|k| (k * k) as f64).collect();
        let n = normalize_field(&field_from(vec![col])).unwrap();
        assert_eq!(max_nrcdt(&n).values, n.column(0));
        assert_eq!(mean_nrcdt(&n).values, n.column(0));
    }

    #[test]
    fn radius_formulas() {
        assert_eq!(winf_radius(&RobustnessBudget::new(0.0, 0.5, 1.0)).unwrap(), 0.0);
        let r = winf_radius(&RobustnessBudget::new(0.1, 0.5, 1.0)).unwrap();
        assert!((r - 3.2).abs() < 1e-12);
        assert!(matches!(
            winf_radius(&RobustnessBudget::new(0.25, 0.5, 1.0)),
            Err(Error::BudgetExceeded { .. })
        ));
        assert_eq!(w2_radius(&RobustnessBudget::new(0.0, 0.5, 1.0)).unwrap(), 0.0);
        let r = w2_radius(&RobustnessBudget::new(0.1, 0.5, 1.0)).unwrap();
        assert!((r - 0.8).abs() < 1e-12);
        assert!(w2_radius(&RobustnessBudget::new(0.3, 0.5, 1.0)).is_err());
    }

    #[test]
    fn isotropic_matrices_are_always_admissible() {
        let a = [[0.7, 0.0], [0.0, 0.7]];
        let adm = admissibility(a, 0.25, 1e-6, 1.0, 1.0).unwrap();
        assert_eq!(adm.anisotropy, 0.0);
        assert!(adm.admissible());
    }

    #[test]
    fn singular_values_of_shear() {
        let (smin, smax) = singular_values([[1.0, 1.0], [0.0, 1.0]]);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((smax - golden).abs() < 1e-12);
        assert!((smin - 1.0 / golden).abs() < 1e-12);
    }

    #[test]
    fn winf_separation_eps_meets_condition() {
        let eps = winf_separation_eps(0.5, (0.2, 1.0), (0.3, 1.2));
        assert!(eps > 0.0 && eps < 0.1);
        let total = 4.0
            * eps
            * ((1.0 + 2.0 * eps) / (0.2 * (0.2 - 2.0 * eps)) + (1.2 + 2.0 * eps) / (0.3 * (0.3 - 2.0 * eps)));
        assert!(total < 0.5 && total > 0.499);
    }
}
