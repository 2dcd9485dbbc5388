//! Exact transport between small point clouds and their 1-D slices.
//!
//! cargo run --example transport_oracle

use nrcdt::measure::{DiscreteMeasure1D, DiscreteMeasure2D};
use nrcdt::ot::{monotone_plan, w_1d, w_2d_assignment, Order};
use nrcdt::radon::{restricted_slice, AngleGrid};

fn main() -> nrcdt::Result<()> {
    let a = DiscreteMeasure1D::from_atoms(&[0.0, 1.0, 3.0], &[0.2, 0.5, 0.3])?;
    let b = DiscreteMeasure1D::uniform(&[0.5, 2.0])?;
    let plan = monotone_plan(&a, &b);
    println!("monotone plan: {plan:?}");
    println!("W2 {:.6}  Winf {:.6}", w_1d(&a, &b, Order::Two), w_1d(&a, &b, Order::Inf));

    let mu = DiscreteMeasure2D::uniform(vec![[0.0, 0.0], [0.4, 0.1], [-0.2, 0.3], [0.1, -0.4]])?;
    let nu = DiscreteMeasure2D::uniform(vec![[0.3, 0.3], [-0.1, 0.0], [0.2, -0.2], [-0.3, -0.1]])?;
    let w2 = w_2d_assignment(&mu, &nu, Order::Two)?;
    println!("2-D W2 {w2:.6}");
    for (j, &theta) in AngleGrid::new(8)?.directions().iter().enumerate() {
        let s = w_1d(&restricted_slice(&mu, theta)?, &restricted_slice(&nu, theta)?, Order::Two);
        println!("  angle {j}: slice W2 {s:.6}");
    }
    Ok(())
}
