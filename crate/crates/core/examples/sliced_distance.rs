//! Sliced Wasserstein-2 distances between templates through their R-CDTs.
//!
//! cargo run --release --example sliced_distance

use nrcdt::prelude::*;

fn main() -> nrcdt::Result<()> {
    let grid = AngleGrid::new(64)?;
    let reference = ReferenceMeasure::uniform(64)?;
    let fields: Vec<QuantileField> = (1..=6)
        .map(|id| {
            let mu = image_to_measure(&nrcdt::datagen::render_template(id, 128)?, DEFAULT_HALF_WIDTH)?;
            Ok(rcdt(&sinogram(&mu, &grid, 301)?, &reference))
        })
        .collect::<nrcdt::Result<_>>()?;
    for f in &fields {
        let row: Vec<String> =
            fields.iter().map(|g| Ok(format!("{:.4}", sliced_w2(f, g)?))).collect::<nrcdt::Result<_>>()?;
        println!("{}", row.join(" "));
    }
    Ok(())
}
