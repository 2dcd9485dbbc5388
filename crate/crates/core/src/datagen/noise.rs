use rand::Rng;

use crate::image::Image;

/// Salt noise: `count` discs of `radius` pixels painted at the image max.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Salt {
    pub count: usize,
    pub radius: f64,
}

/// Disc centres `(row, col)` drawn uniformly from the disc of radius
/// `N/2 - radius` about the image centre.
pub fn salt_centers(rows: usize, cols: usize, salt: &Salt, rng: &mut impl Rng) -> Vec<(f64, f64)> {
    let cy = (rows as f64 - 1.0) / 2.0;
    let cx = (cols as f64 - 1.0) / 2.0;
    let reach = (rows.min(cols) as f64 / 2.0 - salt.radius).max(0.0);
    (0..salt.count)
        .map(|_| {
            let r = reach * rng.gen::<f64>().sqrt();
            let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            (cy - r * phi.sin(), cx + r * phi.cos())
        })
        .collect()
}

/// Sets every pixel whose centre lies within `radius` of a drawn centre to
/// the maximum of the input image.
pub fn add_salt(img: &Image, salt: &Salt, rng: &mut impl Rng) -> Image {
    let mut out = img.clone();
    if salt.count == 0 {
        return out;
    }
    let peak = img.max().max(0.0);
    let r2 = salt.radius * salt.radius;
    for (y, x) in salt_centers(img.rows(), img.cols(), salt, rng) {
        let r0 = (y - salt.radius).floor().max(0.0) as usize;
        let r1 = ((y + salt.radius).ceil() as usize).min(img.rows() - 1);
        let c0 = (x - salt.radius).floor().max(0.0) as usize;
        let c1 = ((x + salt.radius).ceil() as usize).min(img.cols() - 1);
        for r in r0..=r1 {
            for c in c0..=c1 {
                if (r as f64 - y).powi(2) + (c as f64 - x).powi(2) <= r2 {
                    out.set(r, c, peak);
                }
            }
        }
    }
    out
}
