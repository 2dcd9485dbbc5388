//! Measure-valued Radon transform.
//!
//! The restricted transform in direction `theta` is the push-forward of a
//! planar measure under the slicing map `x -> <x, theta>`. For atomic
//! measures this is exact. The [`sinogram`] additionally bins every slice onto
//! an equispaced radial grid in `[-1, 1]` by splatting each projected atom
//! linearly onto its two nearest bin centers, which keeps the per-angle mass
//! exactly one.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure1D, DiscreteMeasure2D};

const UNIT_TOL: f64 = 1e-12;

/// Equispaced angles `2 pi j / M` on the full circle with uniform weights.
///
/// For even `M` the second half of the directions are the exact negations of
/// the first half, so reflected slices agree bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    directions: Vec<[f64; 2]>,
}

impl AngleGrid {
    pub fn new(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter("angle grid needs at least one angle".into()));
        }
        let mut directions: Vec<[f64; 2]> = Vec::with_capacity(count);
        for j in 0..count {
            if count.is_multiple_of(2) && j >= count / 2 {
                let [c, s] = directions[j - count / 2];
                directions.push([-c, -s]);
            } else {
                let phi = std::f64::consts::TAU * j as f64 / count as f64;
                directions.push([phi.cos(), phi.sin()]);
            }
        }
        Ok(Self { directions })
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn angle(&self, j: usize) -> f64 {
        std::f64::consts::TAU * j as f64 / self.len() as f64
    }

    pub fn direction(&self, j: usize) -> [f64; 2] {
        self.directions[j]
    }

    pub fn directions(&self) -> &[[f64; 2]] {
        &self.directions
    }

    /// Weight of each angle in the discrete uniform measure on the circle.
    pub fn weight(&self) -> f64 {
        1.0 / self.len() as f64
    }
}

/// `R` equispaced bin centers covering `[-1, 1]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RadialGrid {
    count: usize,
}

impl RadialGrid {
    pub fn new(count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParameter("radial grid needs at least two bins".into()));
        }
        Ok(Self { count })
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 / (self.count - 1) as f64
    }

    pub fn center(&self, r: usize) -> f64 {
        -1.0 + r as f64 * self.spacing()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.count).map(|r| self.center(r)).collect()
    }

    /// Linear interpolation of grid values `h` at `s in [-1, 1]`.
    pub fn interpolate(&self, h: &[f64], s: f64) -> Result<f64> {
        if h.len() != self.count {
            return Err(Error::GridMismatch(format!(
                "{} values on a {}-bin radial grid",
                h.len(),
                self.count
            )));
        }
        if !(-1.0..=1.0).contains(&s) {
            return Err(Error::QueryOutsideGrid(s));
        }
        let f = (s + 1.0) / self.spacing();
        let lo = (f.floor() as usize).min(self.count - 2);
        let w = f - lo as f64;
        Ok((1.0 - w) * h[lo] + w * h[lo + 1])
    }
}

/// Binned Radon transform: one radial measure per angle.
#[derive(Debug, Clone)]
pub struct Sinogram {
    radial: RadialGrid,
    angles: AngleGrid,
    slices: Vec<DiscreteMeasure1D>,
}

impl Sinogram {
    pub fn radial(&self) -> RadialGrid {
        self.radial
    }

    pub fn angles(&self) -> &AngleGrid {
        &self.angles
    }

    pub fn slices(&self) -> &[DiscreteMeasure1D] {
        &self.slices
    }

    pub fn slice(&self, j: usize) -> &DiscreteMeasure1D {
        &self.slices[j]
    }

    /// Dense bin masses of slice `j` on the radial grid.
    pub fn bin_masses(&self, j: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.radial.len()];
        let h = self.radial.spacing();
        let s = &self.slices[j];
        for (p, m) in s.positions().iter().zip(s.masses()) {
            let r = ((p + 1.0) / h).round() as usize;
            out[r] += m;
        }
        out
    }
}

fn check_unit(theta: [f64; 2]) -> Result<()> {
    if ((theta[0] * theta[0] + theta[1] * theta[1]).sqrt() - 1.0).abs() > UNIT_TOL {
        return Err(Error::NonUnitDirection(theta[0], theta[1]));
    }
    Ok(())
}

#[inline]
fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Exact push-forward `(S_theta)_# m` with `S_theta(x) = <x, theta>`.
pub fn restricted_slice(m: &DiscreteMeasure2D, theta: [f64; 2]) -> Result<DiscreteMeasure1D> {
    check_unit(theta)?;
    let positions: Vec<f64> = m.points().iter().map(|&p| dot(p, theta)).collect();
    DiscreteMeasure1D::from_atoms(&positions, m.masses())
}

/// Binned Radon transform over `grid` with `radial_bins` bins in `[-1, 1]`.
pub fn sinogram(m: &DiscreteMeasure2D, grid: &AngleGrid, radial_bins: usize) -> Result<Sinogram> {
    let radial = RadialGrid::new(radial_bins)?;
    let slices = grid
        .directions()
        .par_iter()
        .map(|&theta| binned_slice(m, theta, radial))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sinogram { radial, angles: grid.clone(), slices })
}

fn binned_slice(m: &DiscreteMeasure2D, theta: [f64; 2], radial: RadialGrid) -> Result<DiscreteMeasure1D> {
    let r = radial.len();
    let top = (r - 1) as f64;
    let mut bins = vec![0.0; r];
    // splat |s| and mirror the bin index for negative s, so the slices at
    // theta and -theta are exact reflections of each other
    let mirror = |i: usize, neg: bool| if neg { r - 1 - i } else { i };
    for (&p, &w) in m.points().iter().zip(m.masses()) {
        let s = dot(p, theta);
        let neg = s < 0.0;
        let f = (s.abs() + 1.0) * top / 2.0;
        if !(f <= top + 0.5) {
            return Err(Error::SupportOutsideDisc(s));
        }
        if f >= top {
            bins[mirror(r - 1, neg)] += w;
        } else {
            let lo = f.floor();
            let frac = f - lo;
            let lo = lo as usize;
            bins[mirror(lo, neg)] += (1.0 - frac) * w;
            bins[mirror(lo + 1, neg)] += frac * w;
        }
    }
    // summed in mirrored pairs so the total does not depend on the sign of theta
    let total: f64 = (0..r / 2).map(|i| bins[i] + bins[r - 1 - i]).sum::<f64>()
        + if r % 2 == 1 { bins[r / 2] } else { 0.0 };
    let atoms: Vec<(f64, f64)> =
        bins.iter().enumerate().filter(|(_, &w)| w > 0.0).map(|(i, &w)| (radial.center(i), w)).collect();
    Ok(DiscreteMeasure1D::from_sorted_with_total(atoms, total))
}

/// Restricted back projection `h(<x, theta>)` of radial grid values.
pub fn back_project(h: &[f64], radial: RadialGrid, theta: [f64; 2], points: &[[f64; 2]]) -> Result<Vec<f64>> {
    check_unit(theta)?;
    points.iter().map(|&x| radial.interpolate(h, dot(x, theta))).collect()
}

/// Slice of `(A . + y)_# m` obtained from a slice of `m` itself:
/// `(|A^T theta| . + <y, theta>)_# R_{A^T theta / |A^T theta|}[m]`.
pub fn affine_pushforward_slice(
    m: &DiscreteMeasure2D,
    a: [[f64; 2]; 2],
    y: [f64; 2],
    theta: [f64; 2],
) -> Result<DiscreteMeasure1D> {
    check_unit(theta)?;
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det == 0.0 || !det.is_finite() {
        return Err(Error::SingularMatrix(det));
    }
    let at = [a[0][0] * theta[0] + a[1][0] * theta[1], a[0][1] * theta[0] + a[1][1] * theta[1]];
    let norm = at[0].hypot(at[1]);
    let base = restricted_slice(m, [at[0] / norm, at[1] / norm])?;
    Ok(base.map_increasing(norm, dot(y, theta)))
}
