//! Cumulative distribution transform against the uniform reference on
//! `[0, 1]`, the Radon-CDT field over an angle grid, and its binary dump.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure1D, DiscreteMeasure2D, ReferenceMeasure};
use crate::radon::{restricted_slice, AngleGrid, Sinogram};

/// Magic bytes of the binary R-CDT field dump.
pub const FIELD_MAGIC: &[u8; 4] = b"RCDT";

/// Quantile profile `F^[-1](t_k)` of a 1-D measure on the reference grid.
pub fn cdt_1d(m: &DiscreteMeasure1D, reference: &ReferenceMeasure) -> Vec<f64> {
    (0..reference.len()).map(|k| m.quantile_unchecked(reference.point(k))).collect()
}

/// Exact reference-weighted L2 distance between the CDTs of two measures.
///
/// Both quantile functions are step functions of `t`; the squared gap is
/// integrated piece by piece over the union of their cumulative breakpoints.
pub fn cdt_distance_exact(a: &DiscreteMeasure1D, b: &DiscreteMeasure1D) -> f64 {
    let (ca, cb) = (a.cumulative(), b.cumulative());
    let (pa, pb) = (a.positions(), b.positions());
    let (mut i, mut j) = (0, 0);
    let mut t = 0.0;
    let mut acc = 0.0;
    while i < ca.len() && j < cb.len() {
        let next = ca[i].min(cb[j]);
        let gap = pa[i] - pb[j];
        acc += (next - t) * gap * gap;
        t = next;
        if ca[i] <= next {
            i += 1;
        }
        if cb[j] <= next {
            j += 1;
        }
    }
    acc.sqrt()
}

/// Radon-CDT sampled on the `L x M` grid, stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileField {
    values: Vec<f64>,
    angles: AngleGrid,
    reference: ReferenceMeasure,
}

impl QuantileField {
    /// Assembles a field from per-angle columns of equal length.
    pub fn from_columns(
        columns: Vec<Vec<f64>>,
        angles: AngleGrid,
        reference: ReferenceMeasure,
    ) -> Result<Self> {
        if columns.len() != angles.len() {
            return Err(Error::GridMismatch(format!(
                "{} columns for {} angles",
                columns.len(),
                angles.len()
            )));
        }
        if columns.iter().any(|c| c.len() != reference.len()) {
            return Err(Error::GridMismatch("column length differs from reference grid".into()));
        }
        Ok(Self { values: columns.concat(), angles, reference })
    }

    pub fn points(&self) -> usize {
        self.reference.len()
    }

    pub fn angle_count(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &AngleGrid {
        &self.angles
    }

    pub fn reference(&self) -> &ReferenceMeasure {
        &self.reference
    }

    pub fn column(&self, j: usize) -> &[f64] {
        let l = self.points();
        &self.values[j * l..(j + 1) * l]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.points())
    }

    /// Column-major flattening, `L * M` values.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.points() != other.points() || self.angle_count() != other.angle_count() {
            return Err(Error::GridMismatch(format!(
                "{}x{} vs {}x{}",
                self.points(),
                self.angle_count(),
                other.points(),
                other.angle_count()
            )));
        }
        Ok(())
    }
}

/// Column-wise CDT of a binned sinogram.
pub fn rcdt(sino: &Sinogram, reference: &ReferenceMeasure) -> QuantileField {
    let columns = sino.slices().par_iter().map(|s| cdt_1d(s, reference)).collect();
    QuantileField::from_columns(columns, sino.angles().clone(), *reference)
        .expect("sinogram and reference sizes agree by construction")
}

/// Radon-CDT from exact (unbinned) slices of an atomic measure.
pub fn rcdt_exact(
    m: &DiscreteMeasure2D,
    angles: &AngleGrid,
    reference: &ReferenceMeasure,
) -> Result<QuantileField> {
    let columns = angles
        .directions()
        .par_iter()
        .map(|&theta| restricted_slice(m, theta).map(|s| cdt_1d(&s, reference)))
        .collect::<Result<Vec<_>>>()?;
    QuantileField::from_columns(columns, angles.clone(), *reference)
}

/// Sliced Wasserstein-2 distance between two fields, i.e. the
/// `rho x u_S1` norm of their difference on the grid.
pub fn sliced_w2(f: &QuantileField, g: &QuantileField) -> Result<f64> {
    f.check_same_grid(g)?;
    let n = f.values.len() as f64;
    let ss: f64 = f.values.iter().zip(&g.values).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((ss / n).sqrt())
}

/// Writes a column-major `L x M` matrix: magic, `u32` L, `u32` M, then
/// little-endian `f64` payload.
pub fn write_matrix(
    out: &mut impl Write,
    magic: &[u8; 4],
    rows: usize,
    cols: usize,
    values: &[f64],
) -> Result<()> {
    if values.len() != rows * cols {
        return Err(Error::LengthMismatch(values.len(), rows * cols));
    }
    let to_u32 = |v: usize| {
        u32::try_from(v).map_err(|_| Error::InvalidParameter(format!("dimension {v} exceeds u32")))
    };
    out.write_all(magic)?;
    out.write_all(&to_u32(rows)?.to_le_bytes())?;
    out.write_all(&to_u32(cols)?.to_le_bytes())?;
    for v in values {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a matrix written by [`write_matrix`], returning `(rows, cols, values)`.
pub fn read_matrix(input: &mut impl Read, magic: &[u8; 4]) -> Result<(usize, usize, Vec<f64>)> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() < 12 {
        return Err(Error::TruncatedFile { expected: 12, found: bytes.len() });
    }
    if &bytes[..4] != magic {
        let found = u32::from_be_bytes(bytes[..4].try_into().unwrap());
        return Err(Error::BadMagic(found));
    }
    let rows = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let expected = 12 + 8 * rows * cols;
    if bytes.len() < expected {
        return Err(Error::TruncatedFile { expected, found: bytes.len() });
    }
    let values =
        bytes[12..expected].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok((rows, cols, values))
}

/// Dumps a field in the `RCDT` layout.
pub fn write_field(out: &mut impl Write, field: &QuantileField) -> Result<()> {
    write_matrix(out, FIELD_MAGIC, field.points(), field.angle_count(), &field.values)
}

/// Reads an `RCDT` dump back into a field on the matching uniform grids.
pub fn read_field(input: &mut impl Read) -> Result<QuantileField> {
    let (l, m, values) = read_matrix(input, FIELD_MAGIC)?;
    let columns = values.chunks(l.max(1)).map(<[f64]>::to_vec).collect();
    QuantileField::from_columns(columns, AngleGrid::new(m)?, ReferenceMeasure::uniform(l)?)
}
