//! Binned sinogram of a template, written as a PGM (rows: radii, cols: angles).
//!
//! cargo run --release --example sinogram -- [template] [out.pgm]

use nrcdt::datagen::render_template;
use nrcdt::experiment::write_pgm;
use nrcdt::measure::{image_to_measure, DEFAULT_HALF_WIDTH};
use nrcdt::radon::{sinogram, AngleGrid};

fn main() -> nrcdt::Result<()> {
    let mut args = std::env::args().skip(1);
    let id = args.next().and_then(|a| a.parse().ok()).unwrap_or(4);
    let out = args.next().unwrap_or_else(|| "sinogram.pgm".into());
    let mu = image_to_measure(&render_template(id, 128)?, DEFAULT_HALF_WIDTH)?;
    let sino = sinogram(&mu, &AngleGrid::new(180)?, 181)?;
    let cols: Vec<Vec<f64>> = (0..180).map(|j| sino.bin_masses(j)).collect();
    let peak = cols.iter().flatten().copied().fold(0.0, f64::max);
    let rows: Vec<Vec<f64>> = (0..181).map(|r| cols.iter().map(|c| c[r] / peak).collect()).collect();
    write_pgm(&rows, &out, 1, &format!("template {id}"))?;
    println!("wrote {out}");
    Ok(())
}
