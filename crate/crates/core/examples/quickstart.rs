//! Features of one template and of a rotated, shifted copy.
//!
//! cargo run --release --example quickstart

use nrcdt::classify::{extract_features, FeatureConfig};
use nrcdt::datagen::{render_template, warp_affine, AffineParams};
use nrcdt::nrcdt::FeatureKind;

fn main() -> nrcdt::Result<()> {
    let img = render_template(7, 128)?;
    let moved = warp_affine(
        &img,
        &AffineParams { rotation: 63.0, shift_x: 9.0, shift_y: -4.0, ..AffineParams::identity() },
    )?;
    let cfg = FeatureConfig::new(128, 425, 32);
    for kind in [FeatureKind::MaxNrcdt, FeatureKind::MeanNrcdt, FeatureKind::RcdtFlat] {
        let a = extract_features(&img, kind, &cfg)?;
        let b = extract_features(&moved, kind, &cfg)?;
        let gap = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        println!("{kind:>9}: {} values, sup gap after rotation+shift {gap:.4}", a.len());
    }
    Ok(())
}
