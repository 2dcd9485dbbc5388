//! Discrete probability measures on the line and in the plane.
//!
//! Images become atomic measures with one atom per nonzero pixel, placed at
//! the pixel center. One-dimensional measures keep their atoms sorted and
//! merged so that CDF and quantile evaluation reduce to binary searches over
//! the prefix sums.

use crate::error::{Error, Result};
use crate::image::Image;

/// Half width of the square image domain, `1/sqrt(2)`, so that the whole
/// frame fits inside the closed unit disc.
pub const DEFAULT_HALF_WIDTH: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Finite collection of weighted points in the plane with total mass one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure2D {
    points: Vec<[f64; 2]>,
    masses: Vec<f64>,
}

impl DiscreteMeasure2D {
    /// Builds a probability measure, rescaling the masses to sum to one.
    pub fn new(points: Vec<[f64; 2]>, masses: Vec<f64>) -> Result<Self> {
        if points.len() != masses.len() {
            return Err(Error::LengthMismatch(points.len(), masses.len()));
        }
        if points.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite atom position".into()));
        }
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidMeasure("negative or non-finite mass".into()));
        }
        let total: f64 = masses.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidMeasure("zero total mass".into()));
        }
        let masses = masses.into_iter().map(|m| m / total).collect();
        Ok(Self { points, masses })
    }

    /// Equal mass on every point.
    pub fn uniform(points: Vec<[f64; 2]>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0; n])
    }

    pub fn dirac(point: [f64; 2]) -> Self {
        Self { points: vec![point], masses: vec![1.0] }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Image measure under `map`; masses travel with their atoms.
    pub fn push_forward(&self, map: impl Fn([f64; 2]) -> [f64; 2]) -> Self {
        Self { points: self.points.iter().map(|&p| map(p)).collect(), masses: self.masses.clone() }
    }

    /// Push-forward under `x -> A x + y` with `a` given row-major.
    pub fn affine(&self, a: [[f64; 2]; 2], y: [f64; 2]) -> Self {
        self.push_forward(|p| {
            [a[0][0] * p[0] + a[0][1] * p[1] + y[0], a[1][0] * p[0] + a[1][1] * p[1] + y[1]]
        })
    }

    /// Largest distance of an atom from the origin.
    pub fn max_radius(&self) -> f64 {
        self.points.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max)
    }
}

/// Converts a nonnegative raster into a pixel-atom probability measure on
/// `[-half_width, half_width]^2` (row 0 at the top, `y` pointing up).
pub fn image_to_measure(img: &Image, half_width: f64) -> Result<DiscreteMeasure2D> {
    let (rows, cols) = (img.rows(), img.cols());
    let mut total = 0.0;
    for r in 0..rows {
        for c in 0..cols {
            let v = img.get(r, c);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::NegativePixel { row: r, col: c, value: v });
            }
            total += v;
        }
    }
    if total <= 0.0 {
        return Err(Error::AllZeroImage);
    }
    let dx = 2.0 * half_width / cols as f64;
    let dy = 2.0 * half_width / rows as f64;
    let mut points = Vec::new();
    let mut masses = Vec::new();
    for r in 0..rows {
        let y = (rows as f64 / 2.0 - r as f64 - 0.5) * dy;
        for c in 0..cols {
            let v = img.get(r, c);
            if v > 0.0 {
                points.push([(c as f64 + 0.5 - cols as f64 / 2.0) * dx, y]);
                masses.push(v / total);
            }
        }
    }
    Ok(DiscreteMeasure2D { points, masses })
}

/// Exact diameter of the support: the largest pairwise distance between
/// atoms, evaluated over the convex hull vertices.
pub fn diameter(m: &DiscreteMeasure2D) -> f64 {
    let hull = convex_hull(m.points());
    let mut best = 0.0f64;
    for (i, p) in hull.iter().enumerate() {
        for q in &hull[i + 1..] {
            best = best.max((p[0] - q[0]).hypot(p[1] - q[1]));
        }
    }
    best
}

// Andrew's monotone chain; collinear points are dropped.
fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross =
        |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Probability measure on the real line with sorted, merged atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure1D {
    positions: Vec<f64>,
    masses: Vec<f64>,
    cumulative: Vec<f64>,
}

impl DiscreteMeasure1D {
    /// Sorts the atoms, merges exact duplicates, drops zero masses and
    /// rescales to unit total mass.
    pub fn from_atoms(positions: &[f64], masses: &[f64]) -> Result<Self> {
        if positions.len() != masses.len() {
            return Err(Error::LengthMismatch(positions.len(), masses.len()));
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite atom position".into()));
        }
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidMeasure("negative or non-finite mass".into()));
        }
        let mut atoms: Vec<(f64, f64)> =
            positions.iter().zip(masses).filter(|(_, &m)| m > 0.0).map(|(&p, &m)| (p, m)).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("zero total mass".into()));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (p, m) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += m,
                _ => merged.push((p, m)),
            }
        }
        Ok(Self::from_sorted_unchecked(merged))
    }

    // Atoms must be strictly increasing with positive masses.
    pub(crate) fn from_sorted_unchecked(atoms: Vec<(f64, f64)>) -> Self {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        Self::from_sorted_with_total(atoms, total)
    }

    // As above, dividing every mass by a caller-supplied total.
    pub(crate) fn from_sorted_with_total(atoms: Vec<(f64, f64)>, total: f64) -> Self {
        let mut positions = Vec::with_capacity(atoms.len());
        let mut masses = Vec::with_capacity(atoms.len());
        let mut cumulative = Vec::with_capacity(atoms.len());
        let mut acc = 0.0;
        for (p, m) in atoms {
            let m = m / total;
            acc += m;
            positions.push(p);
            masses.push(m);
            cumulative.push(acc);
        }
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Self { positions, masses, cumulative }
    }

    pub fn dirac(c: f64) -> Self {
        Self { positions: vec![c], masses: vec![1.0], cumulative: vec![1.0] }
    }

    /// Equal mass on each given position.
    pub fn uniform(positions: &[f64]) -> Result<Self> {
        Self::from_atoms(positions, &vec![1.0; positions.len()])
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.positions.iter().zip(&self.masses).map(|(p, m)| p * m).sum()
    }

    /// `F(s) = mu((-inf, s])`.
    pub fn cdf(&self, s: f64) -> f64 {
        match self.positions.partition_point(|&x| x <= s) {
            0 => 0.0,
            i => self.cumulative[i - 1],
        }
    }

    /// Right-continuous quantile `inf { s : F(s) > t }` for `t` in `(0, 1)`.
    pub fn quantile(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::ArgOutOfRange(t));
        }
        Ok(self.quantile_unchecked(t))
    }

    #[inline]
    pub(crate) fn quantile_unchecked(&self, t: f64) -> f64 {
        let i = self.cumulative.partition_point(|&c| c <= t);
        self.positions[i.min(self.positions.len() - 1)]
    }

    /// Left-continuous quantile `inf { s : F(s) >= t }` for `t` in `(0, 1]`.
    pub fn lower_quantile(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::ArgOutOfRange(t));
        }
        let i = self.cumulative.partition_point(|&c| c < t);
        Ok(self.positions[i.min(self.positions.len() - 1)])
    }

    /// Push-forward under `s -> a s + b` with `a > 0`.
    pub fn map_increasing(&self, a: f64, b: f64) -> Self {
        assert!(a > 0.0, "scale must be positive");
        Self {
            positions: self.positions.iter().map(|p| a * p + b).collect(),
            masses: self.masses.clone(),
            cumulative: self.cumulative.clone(),
        }
    }
}

/// Uniform reference law on `[0, 1]`, sampled at the midpoints
/// `t_k = (k - 0.5) / L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReferenceMeasure {
    len: usize,
}

impl ReferenceMeasure {
    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParameter("reference grid needs at least one point".into()));
        }
        Ok(Self { len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn point(&self, k: usize) -> f64 {
        (k as f64 + 0.5) / self.len as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.point(k)).collect()
    }
}

/// Mean and standard deviation of grid values against the uniform reference
/// (midpoint quadrature with weights `1/L`).
pub fn rho_moments(g: &[f64]) -> (f64, f64) {
    assert!(!g.is_empty(), "empty grid");
    if g.iter().all(|&v| v == g[0]) {
        return (g[0], 0.0);
    }
    let n = g.len() as f64;
    let mean = g.iter().sum::<f64>() / n;
    let var = g.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// `sqrt((1/L) sum g_k^2)`, the reference-weighted L2 norm on the grid.
pub fn rho_norm(g: &[f64]) -> f64 {
    (g.iter().map(|v| v * v).sum::<f64>() / g.len() as f64).sqrt()
}
