use nrcdt::cdt::{cdt_1d, cdt_distance_exact, rcdt, rcdt_exact, sliced_w2, QuantileField};
use nrcdt::measure::{rho_norm, DiscreteMeasure1D, DiscreteMeasure2D, ReferenceMeasure};
use nrcdt::ot::{w_1d, Order};
use nrcdt::radon::{restricted_slice, sinogram, AngleGrid};
use nrcdt::Error;
use proptest::prelude::*;

fn measure_1d(max: usize) -> impl Strategy<Value = DiscreteMeasure1D> {
    prop::collection::vec((-1.0f64..1.0, 0.05f64..1.0), 1..=max).prop_map(|atoms| {
        let (p, m): (Vec<f64>, Vec<f64>) = atoms.into_iter().unzip();
        DiscreteMeasure1D::from_atoms(&p, &m).unwrap()
    })
}

fn measure_2d(max: usize) -> impl Strategy<Value = DiscreteMeasure2D> {
    prop::collection::vec((-0.6f64..0.6, -0.6f64..0.6, 0.05f64..1.0), 2..=max).prop_map(|v| {
        DiscreteMeasure2D::new(v.iter().map(|t| [t.0, t.1]).collect(), v.iter().map(|t| t.2).collect())
            .unwrap()
    })
}

fn grid_distance(a: &DiscreteMeasure1D, b: &DiscreteMeasure1D, l: usize) -> f64 {
    let r = ReferenceMeasure::uniform(l).unwrap();
    let d: Vec<f64> = cdt_1d(a, &r).iter().zip(cdt_1d(b, &r)).map(|(x, y)| x - y).collect();
    rho_norm(&d)
}

#[test]
fn sinogram_of_centered_dirac_is_flat() {
    let grid = AngleGrid::new(16).unwrap();
    let sino = sinogram(&DiscreteMeasure2D::dirac([0.0, 0.0]), &grid, 101).unwrap();
    let f = rcdt(&sino, &ReferenceMeasure::uniform(32).unwrap());
    let half_bin = 1.0 / 100.0;
    assert!(f.as_slice().iter().all(|v| v.abs() <= half_bin));
}

#[test]
fn diracs_sliced_distance() {
    let (x, y) = ([0.3, -0.2], [-0.1, 0.4]);
    let r = ReferenceMeasure::uniform(8).unwrap();
    for m in [64, 128, 7] {
        let grid = AngleGrid::new(m).unwrap();
        let f = rcdt_exact(&DiscreteMeasure2D::dirac(x), &grid, &r).unwrap();
        let g = rcdt_exact(&DiscreteMeasure2D::dirac(y), &grid, &r).unwrap();
        let expected = (x[0] - y[0]).hypot(x[1] - y[1]) / 2f64.sqrt();
        assert!((sliced_w2(&f, &g).unwrap() - expected).abs() <= 0.01);
    }
}

#[test]
fn mismatched_columns_rejected() {
    let grid = AngleGrid::new(3).unwrap();
    let r = ReferenceMeasure::uniform(4).unwrap();
    assert!(matches!(
        QuantileField::from_columns(vec![vec![0.0; 4]; 2], grid.clone(), r),
        Err(Error::GridMismatch(_))
    ));
    assert!(matches!(
        QuantileField::from_columns(vec![vec![0.0; 5]; 3], grid, r),
        Err(Error::GridMismatch(_))
    ));
}

proptest! {
    #[test]
    fn exact_isometry(a in measure_1d(8), b in measure_1d(8)) {
        prop_assert!((cdt_distance_exact(&a, &b) - w_1d(&a, &b, Order::Two)).abs() <= 1e-10);
    }

    #[test]
    fn grid_isometry_converges(a in measure_1d(8), b in measure_1d(8)) {
        let w = w_1d(&a, &b, Order::Two);
        prop_assume!(w > 1e-3);
        prop_assert!((grid_distance(&a, &b, 4096) - w).abs() <= 0.01 * w);
    }

    #[test]
    fn cdt_is_monotone_and_equivariant(m in measure_1d(10), a in 0.1f64..3.0, b in -1.0f64..1.0) {
        let r = ReferenceMeasure::uniform(64).unwrap();
        let v = cdt_1d(&m, &r);
        prop_assert!(v.windows(2).all(|w| w[0] <= w[1]));
        let moved = cdt_1d(&m.map_increasing(a, b), &r);
        for (x, y) in v.iter().zip(&moved) {
            prop_assert!((a * x + b - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn grid_rotation_shifts_columns(m in measure_2d(12), k in 0usize..32) {
        let count = 32;
        let grid = AngleGrid::new(count).unwrap();
        let r = ReferenceMeasure::uniform(16).unwrap();
        let f = rcdt_exact(&m, &grid, &r).unwrap();
        let (s, c) = grid.angle(k).sin_cos();
        let g = rcdt_exact(&m.affine([[c, -s], [s, c]], [0.0, 0.0]), &grid, &r).unwrap();
        for j in 0..count {
            let src = f.column((j + count - k) % count);
            for (x, y) in g.column(j).iter().zip(src) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn column_norm_tracks_slice_distance(mu in measure_2d(8), nu in measure_2d(8)) {
        // midpoint rule on a step function: every breakpoint cell is off by at most D^2 / L
        let grid = AngleGrid::new(8).unwrap();
        let l = 64;
        let r = ReferenceMeasure::uniform(l).unwrap();
        let f = rcdt_exact(&mu, &grid, &r).unwrap();
        let g = rcdt_exact(&nu, &grid, &r).unwrap();
        for j in 0..grid.len() {
            let theta = grid.direction(j);
            let (a, b) = (restricted_slice(&mu, theta).unwrap(), restricted_slice(&nu, theta).unwrap());
            let w = w_1d(&a, &b, Order::Two);
            let d: Vec<f64> = f.column(j).iter().zip(g.column(j)).map(|(x, y)| x - y).collect();
            let gap = d.iter().fold(0.0f64, |m, v| m.max(v.abs()))
                .max((a.positions()[0] - b.positions()[b.len() - 1]).abs())
                .max((b.positions()[0] - a.positions()[a.len() - 1]).abs());
            let breaks = (a.len() + b.len()) as f64;
            prop_assert!((rho_norm(&d).powi(2) - w * w).abs() <= breaks / l as f64 * gap * gap + 1e-12);
        }
    }

    #[test]
    fn column_norm_is_within_two_over_l_for_aligned_masses(pts_a in prop::collection::vec((-0.6f64..0.6, -0.6f64..0.6), 8), pts_b in prop::collection::vec((-0.6f64..0.6, -0.6f64..0.6), 4)) {
        let mu = DiscreteMeasure2D::uniform(pts_a.iter().map(|p| [p.0, p.1]).collect()).unwrap();
        let nu = DiscreteMeasure2D::uniform(pts_b.iter().map(|p| [p.0, p.1]).collect()).unwrap();
        let grid = AngleGrid::new(8).unwrap();
        let l = 64;
        let r = ReferenceMeasure::uniform(l).unwrap();
        let f = rcdt_exact(&mu, &grid, &r).unwrap();
        let g = rcdt_exact(&nu, &grid, &r).unwrap();
        for j in 0..grid.len() {
            let theta = grid.direction(j);
            let w = w_1d(&restricted_slice(&mu, theta).unwrap(), &restricted_slice(&nu, theta).unwrap(), Order::Two);
            let d: Vec<f64> = f.column(j).iter().zip(g.column(j)).map(|(x, y)| x - y).collect();
            prop_assert!((rho_norm(&d) - w).abs() <= 2.0 / l as f64 * w + 1e-12);
        }
    }

    #[test]
    fn sliced_w2_is_a_pseudometric(a in measure_2d(6), b in measure_2d(6), c in measure_2d(6)) {
        let grid = AngleGrid::new(16).unwrap();
        let r = ReferenceMeasure::uniform(32).unwrap();
        let (fa, fb, fc) = (
            rcdt_exact(&a, &grid, &r).unwrap(),
            rcdt_exact(&b, &grid, &r).unwrap(),
            rcdt_exact(&c, &grid, &r).unwrap(),
        );
        let ab = sliced_w2(&fa, &fb).unwrap();
        prop_assert_eq!(ab, sliced_w2(&fb, &fa).unwrap());
        prop_assert!(ab <= sliced_w2(&fa, &fc).unwrap() + sliced_w2(&fc, &fb).unwrap() + 1e-12);
    }
}
