use nrcdt::cdt::{rcdt, rcdt_exact, QuantileField};
use nrcdt::datagen::{render_template, rng_for, AffineRanges};
use nrcdt::measure::{
    diameter, image_to_measure, rho_moments, rho_norm, DiscreteMeasure2D, ReferenceMeasure,
    DEFAULT_HALF_WIDTH,
};
use nrcdt::nrcdt::{
    admissibility, anisotropy, max_nrcdt, mean_nrcdt, min_std, normalize_field, normalize_field_with_guard,
    read_feature, singular_values, w2_radius, winf_radius, write_feature, zero_mean_column, FeatureKind,
    RobustnessBudget,
};
use nrcdt::radon::{sinogram, AngleGrid};
use nrcdt::Error;
use proptest::prelude::*;
use rand::Rng;

fn measure_2d(max: usize) -> impl Strategy<Value = DiscreteMeasure2D> {
    prop::collection::vec((-0.6f64..0.6, -0.6f64..0.6, 0.05f64..1.0), 3..=max).prop_map(|v| {
        DiscreteMeasure2D::new(v.iter().map(|t| [t.0, t.1]).collect(), v.iter().map(|t| t.2).collect())
            .unwrap()
    })
}

fn eight_atoms() -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec((-0.5f64..0.5, -0.5f64..0.5), 8)
        .prop_map(|v| v.into_iter().map(|(x, y)| [x, y]).collect())
}

fn sup_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn rotation(deg: f64) -> [[f64; 2]; 2] {
    let (s, c) = deg.to_radians().sin_cos();
    [[c, -s], [s, c]]
}

fn template_features(m: &DiscreteMeasure2D) -> (Vec<f64>, Vec<f64>) {
    let grid = AngleGrid::new(128).unwrap();
    let r = ReferenceMeasure::uniform(64).unwrap();
    let n = normalize_field(&rcdt(&sinogram(m, &grid, 850).unwrap(), &r)).unwrap();
    (max_nrcdt(&n).values, mean_nrcdt(&n).values)
}

#[test]
fn radius_examples() {
    let b = RobustnessBudget::new(0.01, 0.2, 1.0);
    assert!((winf_radius(&b).unwrap() - 0.0408 / 0.036).abs() < 1e-12);
    assert!((w2_radius(&b).unwrap() - 0.2).abs() < 1e-12);
    let over = RobustnessBudget::new(0.1, 0.2, 1.0);
    assert!(matches!(winf_radius(&over), Err(Error::BudgetExceeded { .. })));
    assert!(matches!(w2_radius(&over), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn singular_value_examples() {
    assert_eq!(singular_values([[2.0, 0.0], [0.0, 0.5]]), (0.5, 2.0));
    let (lo, hi) = singular_values(rotation(37.0));
    assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    assert!((anisotropy([[2.0, 0.0], [0.0, 0.5]]) - 3.0).abs() < 1e-12);
    let shear = [[1.0, 1.0], [0.0, 1.0]];
    let (lo, hi) = singular_values(shear);
    assert!((lo * hi - 1.0).abs() < 1e-12);
    assert!((hi - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
}

#[test]
fn admissibility_examples() {
    let a = admissibility([[1.1, 0.0], [0.0, 1.0]], 0.25, 0.8, 1.0, 1.0).unwrap();
    assert!((a.bound - 0.2).abs() < 1e-12);
    assert!(a.admissible());
    assert!(!admissibility([[2.0, 0.0], [0.0, 1.0]], 0.25, 0.8, 1.0, 1.0).unwrap().admissible());
    assert!(matches!(admissibility(rotation(0.0), 0.5, 1.0, 1.0, 1.0), Err(Error::InvalidParameter(_))));
}

#[test]
fn collinear_support_is_degenerate() {
    let m = DiscreteMeasure2D::uniform(vec![[-0.4, 0.0], [0.1, 0.0], [0.3, 0.0]]).unwrap();
    let f = rcdt_exact(&m, &AngleGrid::new(8).unwrap(), &ReferenceMeasure::uniform(16).unwrap()).unwrap();
    assert!(matches!(normalize_field(&f), Err(Error::DegenerateDirection(2))));
}

#[test]
fn zero_guard_accepts_tiny_spread() {
    let grid = AngleGrid::new(4).unwrap();
    let r = ReferenceMeasure::uniform(4).unwrap();
    let cols = vec![
        vec![0.0, 1e-14, 2e-14, 3e-14],
        vec![0.0, 1.0, 2.0, 3.0],
        vec![1.0, 2.0, 3.0, 5.0],
        vec![0.0, 0.0, 0.0, 1.0],
    ];
    let f = QuantileField::from_columns(cols, grid, r).unwrap();
    assert!(matches!(normalize_field(&f), Err(Error::DegenerateDirection(0))));
    assert!(normalize_field_with_guard(&f, 0.0).is_ok());
}

#[test]
fn quarter_turn_of_an_image_leaves_features_unchanged() {
    let img = render_template(7, 128).unwrap();
    let a = template_features(&image_to_measure(&img, DEFAULT_HALF_WIDTH).unwrap());
    let b = template_features(&image_to_measure(&img.rotate90(), DEFAULT_HALF_WIDTH).unwrap());
    assert!(sup_gap(&a.0, &b.0) <= 1e-9);
    assert!(sup_gap(&a.1, &b.1) <= 1e-9);
}

#[test]
fn affine_maps_move_max_feature_by_less_than_tolerance() {
    let m = image_to_measure(&render_template(9, 256).unwrap(), DEFAULT_HALF_WIDTH).unwrap();
    let (base, _) = template_features(&m);
    let mut rng = rng_for(21, 0);
    let pixel = 2.0 * DEFAULT_HALF_WIDTH / 256.0;
    for fam in [AffineRanges::strong(), AffineRanges::moderate(), AffineRanges::mild(), AffineRanges::rigid()]
    {
        for _ in 0..4 {
            let p = fam.sample(&mut rng);
            let moved = m.affine(p.matrix(), [p.shift_x * pixel, p.shift_y * pixel]);
            let (v, _) = template_features(&moved);
            assert!(sup_gap(&v, &base) <= 0.15);
        }
    }
}

#[test]
fn mean_feature_deviation_is_bounded_by_anisotropy() {
    let m = image_to_measure(&render_template(6, 64).unwrap(), DEFAULT_HALF_WIDTH).unwrap();
    let grid = AngleGrid::new(128).unwrap();
    let r = ReferenceMeasure::uniform(64).unwrap();
    let n = normalize_field(&rcdt_exact(&m, &grid, &r).unwrap()).unwrap();
    let base = mean_nrcdt(&n).values;
    let mut rng = rng_for(8, 0);
    for _ in 0..20 {
        let beta: f64 = rng.gen_range(0.0..0.6);
        let s2 = rng.gen_range(0.6..1.2);
        let s1 = s2 * (1.0 + rng.gen_range(0.0..=beta));
        let (r1, r2) = (rotation(rng.gen_range(0.0..360.0)), rotation(rng.gen_range(0.0..360.0)));
        let d = [[s1, 0.0], [0.0, s2]];
        let mul = |a: [[f64; 2]; 2], b: [[f64; 2]; 2]| {
            [
                [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
                [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
            ]
        };
        let a = mul(r1, mul(d, r2));
        assert!(anisotropy(a) <= beta + 1e-12);
        let moved = m.affine(a, [rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)]);
        let v = mean_nrcdt(&normalize_field(&rcdt_exact(&moved, &grid, &r).unwrap()).unwrap()).values;
        assert!(rho_norm(&diff(&v, &base)) <= beta * n.norm() + 0.05);
    }
}

#[test]
fn feature_dump_round_trip() {
    let m = DiscreteMeasure2D::uniform(vec![[0.1, 0.0], [0.0, 0.3], [-0.2, -0.1]]).unwrap();
    let f = rcdt_exact(&m, &AngleGrid::new(8).unwrap(), &ReferenceMeasure::uniform(16).unwrap()).unwrap();
    let v = max_nrcdt(&normalize_field(&f).unwrap());
    let mut buf = Vec::new();
    write_feature(&mut buf, &v).unwrap();
    assert_eq!(&buf[..4], b"NRCF");
    let back = read_feature(&mut buf.as_slice(), FeatureKind::MaxNrcdt).unwrap();
    assert_eq!(back.values, v.values);
    assert!(matches!(read_feature(&mut &buf[..10], FeatureKind::MaxNrcdt), Err(Error::TruncatedFile { .. })));
}

proptest! {
    #[test]
    fn normalized_columns_are_standard(m in measure_2d(12), count in 3usize..40) {
        let f = rcdt_exact(&m, &AngleGrid::new(count).unwrap(), &ReferenceMeasure::uniform(64).unwrap()).unwrap();
        let n = normalize_field(&f).unwrap();
        for col in n.columns() {
            let (mean, std) = rho_moments(col);
            prop_assert!(mean.abs() <= 1e-10);
            prop_assert!((std - 1.0).abs() <= 1e-10);
        }
        prop_assert!((n.norm() - 1.0).abs() <= 1e-10);
        prop_assert!(min_std(&f) > 0.0);
    }

    #[test]
    fn normalization_forgets_translation_and_scale(m in measure_2d(10), s in 0.3f64..1.5, y in (-0.2f64..0.2, -0.2f64..0.2)) {
        let grid = AngleGrid::new(16).unwrap();
        let r = ReferenceMeasure::uniform(32).unwrap();
        let a = normalize_field(&rcdt_exact(&m, &grid, &r).unwrap()).unwrap();
        let b = normalize_field(&rcdt_exact(&m.affine([[s, 0.0], [0.0, s]], [y.0, y.1]), &grid, &r).unwrap()).unwrap();
        prop_assert!(sup_gap(a.as_slice(), b.as_slice()) <= 1e-9);
    }

    #[test]
    fn perturbation_radii_hold(pts in eight_atoms(), which in 0usize..8, dir in 0.0f64..std::f64::consts::TAU, frac in 0.01f64..0.45) {
        let grid = AngleGrid::new(32).unwrap();
        let r = ReferenceMeasure::uniform(64).unwrap();
        let mu = DiscreteMeasure2D::uniform(pts.clone()).unwrap();
        let f = rcdt_exact(&mu, &grid, &r).unwrap();
        let c0 = min_std(&f);
        prop_assume!(c0 > 1e-3);
        let delta = frac * c0;
        let mut moved = pts.clone();
        moved[which] = [pts[which][0] + delta * dir.cos(), pts[which][1] + delta * dir.sin()];
        let g = rcdt_exact(&DiscreteMeasure2D::uniform(moved).unwrap(), &grid, &r).unwrap();
        let (nf, ng) = (normalize_field(&f).unwrap(), normalize_field(&g).unwrap());
        let diam = diameter(&mu);
        let winf = winf_radius(&RobustnessBudget::new(delta, c0, diam)).unwrap();
        prop_assert!(sup_gap(&max_nrcdt(&nf).values, &max_nrcdt(&ng).values) <= winf);
        let w2 = w2_radius(&RobustnessBudget::new(delta / 8f64.sqrt(), c0, diam)).unwrap();
        prop_assert!(rho_norm(&diff(&mean_nrcdt(&nf).values, &mean_nrcdt(&ng).values)) <= w2);
        for j in 0..grid.len() {
            let zd = diff(&zero_mean_column(&f, j), &zero_mean_column(&g, j));
            prop_assert!(sup_gap(&zd, &vec![0.0; zd.len()]) <= 2.0 * delta + 1e-12);
            prop_assert!(rho_norm(&zd) <= 2.0 * delta / 8f64.sqrt() + 1e-12);
        }
    }
}
