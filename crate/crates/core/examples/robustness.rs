//! Perturbation radii next to the feature change from moving one atom.
//!
//! cargo run --example robustness -- [delta]

use nrcdt::cdt::rcdt_exact;
use nrcdt::measure::{diameter, rho_norm, DiscreteMeasure2D, ReferenceMeasure};
use nrcdt::nrcdt::{
    max_nrcdt, mean_nrcdt, min_std, normalize_field, w2_radius, winf_radius, RobustnessBudget,
};
use nrcdt::radon::AngleGrid;

fn main() -> nrcdt::Result<()> {
    let delta: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.02);
    let pts = vec![
        [0.3, 0.0],
        [0.1, 0.35],
        [-0.25, 0.2],
        [-0.3, -0.15],
        [0.0, -0.4],
        [0.35, -0.3],
        [0.05, 0.05],
        [-0.1, 0.45],
    ];
    let grid = AngleGrid::new(64)?;
    let r = ReferenceMeasure::uniform(64)?;
    let mu = DiscreteMeasure2D::uniform(pts.clone())?;
    let mut moved = pts;
    moved[0][0] += delta;
    let f = rcdt_exact(&mu, &grid, &r)?;
    let g = rcdt_exact(&DiscreteMeasure2D::uniform(moved)?, &grid, &r)?;
    let (c0, diam) = (min_std(&f), diameter(&mu));
    let (nf, ng) = (normalize_field(&f)?, normalize_field(&g)?);
    let sup = max_nrcdt(&nf)
        .values
        .iter()
        .zip(&max_nrcdt(&ng).values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let d2: Vec<f64> =
        mean_nrcdt(&nf).values.iter().zip(&mean_nrcdt(&ng).values).map(|(a, b)| a - b).collect();
    println!("c0 {c0:.4} diam {diam:.4}");
    println!("max:  change {sup:.5}  radius {:.5}", winf_radius(&RobustnessBudget::new(delta, c0, diam))?);
    println!(
        "mean: change {:.5}  radius {:.5}",
        rho_norm(&d2),
        w2_radius(&RobustnessBudget::new(delta / 8f64.sqrt(), c0, diam))?
    );
    Ok(())
}
