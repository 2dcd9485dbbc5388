//! Resampling warps with a 3x3 quadratic Lagrange stencil.

use rand::Rng;

use super::rng::Range;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::nrcdt::singular_values;

/// Sample positions this close to a lattice point read that pixel exactly.
const SNAP: f64 = 1e-9;

/// Quadratic Lagrange weights for offsets `-1, 0, 1` at fractional part `d`.
#[inline]
fn weights(d: f64) -> [f64; 3] {
    [0.5 * d * (d - 1.0), 1.0 - d * d, 0.5 * d * (d + 1.0)]
}

/// Bi-quadratic interpolation of `img` at fractional `(row, col)`, zero
/// outside the raster and clamped to be nonnegative.
pub fn sample_biquadratic(img: &Image, row: f64, col: f64) -> f64 {
    let (r0, c0) = (row.round(), col.round());
    let (mut dr, mut dc) = (row - r0, col - c0);
    if dr.abs() < SNAP {
        dr = 0.0;
    }
    if dc.abs() < SNAP {
        dc = 0.0;
    }
    let (ri, ci) = (r0 as isize, c0 as isize);
    if dr == 0.0 && dc == 0.0 {
        return img.get_or_zero(ri, ci).max(0.0);
    }
    let (wr, wc) = (weights(dr), weights(dc));
    let mut acc = 0.0;
    for (a, wa) in wr.iter().enumerate() {
        if *wa == 0.0 {
            continue;
        }
        let mut row_acc = 0.0;
        for (b, wb) in wc.iter().enumerate() {
            if *wb != 0.0 {
                row_acc += wb * img.get_or_zero(ri + a as isize - 1, ci + b as isize - 1);
            }
        }
        acc += wa * row_acc;
    }
    acc.max(0.0)
}

/// Parameters of `x -> A x + y` acting about the image centre.
///
/// `A = Rot * ShearY * ShearX * Scale`; angles in degrees, shift in pixels
/// with `x` to the right and `y` up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineParams {
    pub scale_x: f64,
    pub scale_y: f64,
    pub shear_x: f64,
    pub shear_y: f64,
    pub rotation: f64,
    pub shift_x: f64,
    pub shift_y: f64,
}

impl Default for AffineParams {
    fn default() -> Self {
        Self::identity()
    }
}

type Mat = [[f64; 2]; 2];

fn mul(a: Mat, b: Mat) -> Mat {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

impl AffineParams {
    pub const fn identity() -> Self {
        Self {
            scale_x: 1.0,
            scale_y: 1.0,
            shear_x: 0.0,
            shear_y: 0.0,
            rotation: 0.0,
            shift_x: 0.0,
            shift_y: 0.0,
        }
    }

    pub fn rotation(deg: f64) -> Self {
        Self { rotation: deg, ..Self::identity() }
    }

    pub fn shift(x: f64, y: f64) -> Self {
        Self { shift_x: x, shift_y: y, ..Self::identity() }
    }

    /// Linear part in the `y`-up frame.
    pub fn matrix(&self) -> Mat {
        let scale = [[self.scale_x, 0.0], [0.0, self.scale_y]];
        let shear_x = [[1.0, self.shear_x.to_radians().tan()], [0.0, 1.0]];
        let shear_y = [[1.0, 0.0], [self.shear_y.to_radians().tan(), 1.0]];
        let (s, c) = self.rotation.to_radians().sin_cos();
        let rot = [[c, -s], [s, c]];
        mul(rot, mul(shear_y, mul(shear_x, scale)))
    }

    /// Offset in pixels.
    pub fn offset(&self) -> [f64; 2] {
        [self.shift_x, self.shift_y]
    }

    /// `(sigma_min, sigma_max)` of the linear part.
    pub fn singular_values(&self) -> (f64, f64) {
        singular_values(self.matrix())
    }
}

/// Independent uniform ranges for every affine parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineRanges {
    pub scale_x: Range,
    pub scale_y: Range,
    pub shear_x: Range,
    pub shear_y: Range,
    pub rotation: Range,
    pub shift_x: Range,
    pub shift_y: Range,
}

impl Default for AffineRanges {
    fn default() -> Self {
        Self::identity()
    }
}

impl AffineRanges {
    pub const fn identity() -> Self {
        Self {
            scale_x: Range::fixed(1.0),
            scale_y: Range::fixed(1.0),
            shear_x: Range::fixed(0.0),
            shear_y: Range::fixed(0.0),
            rotation: Range::fixed(0.0),
            shift_x: Range::fixed(0.0),
            shift_y: Range::fixed(0.0),
        }
    }

    /// Full rotation, shifts of up to `shift` pixels, scaling in
    /// `[scale_lo, scale_hi]` and shear within `+-shear` degrees.
    pub fn academic(scale_lo: f64, scale_hi: f64, shear: f64, shift: f64) -> Self {
        let scale = Range { lo: scale_lo, hi: scale_hi };
        let shear = Range { lo: -shear, hi: shear };
        let shift = Range { lo: -shift, hi: shift };
        Self {
            scale_x: scale,
            scale_y: scale,
            shear_x: shear,
            shear_y: shear,
            rotation: Range { lo: 0.0, hi: 360.0 },
            shift_x: shift,
            shift_y: shift,
        }
    }

    /// Scaling `[0.5, 1.25]`, shear `+-45` degrees.
    pub fn strong() -> Self {
        Self::academic(0.5, 1.25, 45.0, 20.0)
    }

    /// Scaling `[0.75, 1.25]`, shear `+-35` degrees.
    pub fn moderate() -> Self {
        Self::academic(0.75, 1.25, 35.0, 20.0)
    }

    /// Scaling `[0.75, 1.0]`, shear `+-15` degrees.
    pub fn mild() -> Self {
        Self::academic(0.75, 1.0, 15.0, 20.0)
    }

    /// Rotation and shift only.
    pub fn rigid() -> Self {
        Self::academic(1.0, 1.0, 0.0, 20.0)
    }

    /// One independent draw per parameter, in declaration order.
    pub fn sample(&self, rng: &mut impl Rng) -> AffineParams {
        AffineParams {
            scale_x: self.scale_x.sample(rng),
            scale_y: self.scale_y.sample(rng),
            shear_x: self.shear_x.sample(rng),
            shear_y: self.shear_y.sample(rng),
            rotation: self.rotation.sample(rng),
            shift_x: self.shift_x.sample(rng),
            shift_y: self.shift_y.sample(rng),
        }
    }
}

/// Applies `p` about the image centre by inverse mapping every output pixel.
pub fn warp_affine(img: &Image, p: &AffineParams) -> Result<Image> {
    let a = p.matrix();
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() < 1e-12 {
        return Err(Error::SingularMatrix(det));
    }
    let inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
    let cx = (img.cols() as f64 - 1.0) / 2.0;
    let cy = (img.rows() as f64 - 1.0) / 2.0;
    let [sx, sy] = p.offset();
    Ok(Image::from_fn(img.rows(), img.cols(), |i, j| {
        let u = j as f64 - cx - sx;
        let v = cy - i as f64 - sy;
        let qu = inv[0][0] * u + inv[0][1] * v;
        let qv = inv[1][0] * u + inv[1][1] * v;
        sample_biquadratic(img, cy - qv, qu + cx)
    }))
}

/// Sinusoidal deformation parameters (frequencies and amplitudes in pixels).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sinusoid {
    pub f1: f64,
    pub f2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Sinusoid {
    /// Source offset `(row, col)` read by output pixel `(j, k)`.
    pub fn displacement(&self, j: usize, k: usize, n: usize) -> (f64, f64) {
        let tau = 2.0 * std::f64::consts::PI / n as f64;
        (self.a1 * (tau * self.f1 * k as f64).sin(), self.a2 * (tau * self.f2 * j as f64).cos())
    }

    /// Upper bound on the per-pixel displacement.
    pub fn max_displacement(&self) -> f64 {
        self.a1.hypot(self.a2)
    }
}

/// Output `(j, k)` takes the interpolated value at
/// `(j + a1 sin(2 pi f1 k / N), k + a2 cos(2 pi f2 j / N))`.
pub fn warp_sinusoidal(img: &Image, s: &Sinusoid) -> Image {
    if s.a1 == 0.0 && s.a2 == 0.0 {
        return img.clone();
    }
    let n = img.rows().max(img.cols());
    Image::from_fn(img.rows(), img.cols(), |j, k| {
        let (dr, dc) = s.displacement(j, k, n);
        sample_biquadratic(img, j as f64 + dr, k as f64 + dc)
    })
}
