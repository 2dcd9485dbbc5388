//! Parametric glyphs: an outlined base shape with an optional topper drawn
//! above it, anti-aliased from signed distances.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::measure::DEFAULT_HALF_WIDTH;

/// Number of distinct templates.
pub const TEMPLATE_COUNT: usize = 12;

const STROKE: f64 = 0.05;
const BASE_RADIUS: f64 = 0.19;
const TOPPER_CENTER: f64 = 0.3;
const TOPPER_HALF: f64 = 0.075;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Disc,
    Square,
    Triangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topper {
    None,
    Bar,
    Plus,
    Saltire,
}

/// Splits a template id `1..=12` into its base and topper.
pub fn template_parts(id: usize) -> Result<(Base, Topper)> {
    if !(1..=TEMPLATE_COUNT).contains(&id) {
        return Err(Error::BadTemplateId(id));
    }
    let base = [Base::Disc, Base::Square, Base::Triangle][(id - 1) / 4];
    let topper = [Topper::None, Topper::Bar, Topper::Plus, Topper::Saltire][(id - 1) % 4];
    Ok((base, topper))
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

fn base_distance(base: Base, p: [f64; 2]) -> f64 {
    match base {
        Base::Disc => (p[0].hypot(p[1]) - BASE_RADIUS).abs(),
        Base::Square => {
            let h = BASE_RADIUS * 0.85;
            let qx = p[0].abs() - h;
            let qy = p[1].abs() - h;
            let outside = qx.max(0.0).hypot(qy.max(0.0));
            (outside + qx.max(qy).min(0.0)).abs()
        }
        Base::Triangle => {
            let r = BASE_RADIUS * 1.15;
            let v: Vec<[f64; 2]> = (0..3)
                .map(|i| {
                    let a = std::f64::consts::FRAC_PI_2 + i as f64 * 2.0 * std::f64::consts::PI / 3.0;
                    [r * a.cos(), r * a.sin() - 0.02]
                })
                .collect();
            (0..3).map(|i| segment_distance(p, v[i], v[(i + 1) % 3])).fold(f64::INFINITY, f64::min)
        }
    }
}

fn topper_distance(topper: Topper, p: [f64; 2]) -> f64 {
    let c = [0.0, TOPPER_CENTER];
    let h = TOPPER_HALF;
    let bar = || segment_distance(p, [c[0] - h, c[1]], [c[0] + h, c[1]]);
    match topper {
        Topper::None => f64::INFINITY,
        Topper::Bar => bar(),
        Topper::Plus => bar().min(segment_distance(p, [c[0], c[1] - h], [c[0], c[1] + h])),
        Topper::Saltire => {
            let d = h * std::f64::consts::FRAC_1_SQRT_2;
            segment_distance(p, [c[0] - d, c[1] - d], [c[0] + d, c[1] + d]).min(segment_distance(
                p,
                [c[0] - d, c[1] + d],
                [c[0] + d, c[1] - d],
            ))
        }
    }
}

/// Renders template `id` on an `n x n` raster covering
/// `[-1/sqrt2, 1/sqrt2]^2`, gray values in `[0, 1]`.
pub fn render_template(id: usize, n: usize) -> Result<Image> {
    let (base, topper) = template_parts(id)?;
    if n < 16 {
        return Err(Error::InvalidParameter(format!("template size {n} below 16")));
    }
    let hw = DEFAULT_HALF_WIDTH;
    let px = 2.0 * hw / n as f64;
    let half = STROKE / 2.0;
    let half_n = n as f64 / 2.0;
    Ok(Image::from_fn(n, n, |r, c| {
        let p = [(c as f64 + 0.5 - half_n) * px, (half_n - r as f64 - 0.5) * px];
        let d = base_distance(base, p).min(topper_distance(topper, p)) - half;
        (0.5 - d / px).clamp(0.0, 1.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_validated() {
        assert!(matches!(render_template(0, 64), Err(Error::BadTemplateId(0))));
        assert!(matches!(render_template(13, 64), Err(Error::BadTemplateId(13))));
        assert_eq!(template_parts(1).unwrap(), (Base::Disc, Topper::None));
        assert_eq!(template_parts(12).unwrap(), (Base::Triangle, Topper::Saltire));
    }

    #[test]
    fn disc_is_quarter_turn_symmetric() {
        let img = render_template(1, 96).unwrap();
        assert_eq!(img.rotate90(), img);
    }

    #[test]
    fn values_in_unit_interval() {
        for id in 1..=TEMPLATE_COUNT {
            let img = render_template(id, 64).unwrap();
            assert!(img.data().iter().all(|v| (0.0..=1.0).contains(v)));
            assert!(img.sum() > 0.0);
        }
    }
}
