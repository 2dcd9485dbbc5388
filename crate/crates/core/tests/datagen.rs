use nrcdt::cdt::{rcdt_exact, sliced_w2};
use nrcdt::datagen::noise::salt_centers;
use nrcdt::datagen::{
    add_salt, build_dataset, derive_seed, encode_idx, parse_idx, read_idx, render_template, rng_for,
    warp_affine, warp_sinusoidal, write_idx, AffineParams, AffineRanges, CorruptionRanges, DatasetSpec,
    IdxData, Range, Salt, Sinusoid, TEMPLATE_COUNT,
};
use nrcdt::measure::{image_to_measure, ReferenceMeasure, DEFAULT_HALF_WIDTH};
use nrcdt::radon::AngleGrid;
use nrcdt::{Error, Image};
use proptest::prelude::*;
use rand::RngCore;
use std::collections::HashSet;

#[test]
fn templates_are_distinct_and_fit_the_disc() {
    let n = 128;
    let imgs: Vec<Image> = (1..=TEMPLATE_COUNT).map(|id| render_template(id, n).unwrap()).collect();
    for i in 0..imgs.len() {
        for j in i + 1..imgs.len() {
            assert_ne!(imgs[i], imgs[j], "templates {} and {}", i + 1, j + 1);
        }
        let m = image_to_measure(&imgs[i], DEFAULT_HALF_WIDTH).unwrap();
        assert!(m.max_radius() <= 1.0 - 2.0 / n as f64);
    }
}

#[test]
fn integer_shift_keeps_in_frame_mass() {
    let img = render_template(4, 64).unwrap();
    let w = warp_affine(&img, &AffineParams::shift(5.0, 0.0)).unwrap();
    assert!((w.sum() - img.sum()).abs() <= 1e-10);
    assert_eq!(w.get(20, 30), img.get(20, 25));
}

#[test]
fn warps_keep_pixels_nonnegative() {
    let img = render_template(11, 64).unwrap();
    let mut rng = rng_for(2, 0);
    for _ in 0..10 {
        let w = warp_affine(&img, &AffineRanges::strong().sample(&mut rng)).unwrap();
        assert!(w.data().iter().all(|&v| v >= 0.0));
    }
    let s = warp_sinusoidal(&img, &Sinusoid { f1: 2.0, f2: 3.0, a1: 64.0, a2: 64.0 });
    assert!(s.data().iter().all(|&v| v >= 0.0));
}

#[test]
fn inverse_mapping_scales_mass_by_the_determinant() {
    let img = render_template(8, 128).unwrap();
    let mut rng = rng_for(6, 0);
    for _ in 0..10 {
        let p = AffineRanges::strong().sample(&mut rng);
        let a = p.matrix();
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let w = warp_affine(&img, &p).unwrap();
        assert!((w.sum() - det * img.sum()).abs() <= 0.05 * det * img.sum());
    }
}

#[test]
fn hard_affine_dataset_scan() {
    let spec = DatasetSpec::new((1..=12).collect(), 10, 128, 1).with_affine(AffineRanges::strong());
    let ds = build_dataset(&spec).unwrap();
    assert_eq!(ds.samples.len(), 120);
    for s in &ds.samples {
        let m = s.measure().unwrap();
        assert!((m.total_mass() - 1.0).abs() <= 1e-12);
        assert!(m.max_radius() <= 1.0);
    }
}

#[test]
fn rigid_warp_preserves_mass_roughly() {
    let img = render_template(8, 128).unwrap();
    let mut rng = rng_for(3, 0);
    for _ in 0..10 {
        let w = warp_affine(&img, &AffineRanges::rigid().sample(&mut rng)).unwrap();
        assert!((w.sum() - img.sum()).abs() <= 0.05 * img.sum());
    }
}

#[test]
fn warped_image_matches_pushed_measure() {
    let n = 128;
    let img = render_template(10, n).unwrap();
    let grid = AngleGrid::new(64).unwrap();
    let r = ReferenceMeasure::uniform(64).unwrap();
    let px = 2.0 * DEFAULT_HALF_WIDTH / n as f64;
    let m = image_to_measure(&img, DEFAULT_HALF_WIDTH).unwrap();
    let mut rng = rng_for(4, 0);
    for fam in [AffineRanges::strong(), AffineRanges::mild(), AffineRanges::rigid()] {
        for _ in 0..3 {
            let p = fam.sample(&mut rng);
            let warped = image_to_measure(&warp_affine(&img, &p).unwrap(), DEFAULT_HALF_WIDTH).unwrap();
            let pushed = m.affine(p.matrix(), [p.shift_x * px, p.shift_y * px]);
            let d =
                sliced_w2(&rcdt_exact(&warped, &grid, &r).unwrap(), &rcdt_exact(&pushed, &grid, &r).unwrap())
                    .unwrap();
            assert!(d <= 0.05, "{d}");
        }
    }
}

#[test]
fn salt_area_accounting() {
    let img = render_template(2, 256).unwrap();
    let salt = Salt { count: 4, radius: 9.0 };
    let rng = rng_for(17, 1);
    let centers = salt_centers(256, 256, &salt, &mut rng.clone());
    let out = add_salt(&img, &salt, &mut rng.clone());
    let peak = img.max();
    let mut covered = 0usize;
    let mut expected = 0.0;
    for r in 0..256 {
        for c in 0..256 {
            let hit = centers.iter().any(|&(y, x)| (r as f64 - y).powi(2) + (c as f64 - x).powi(2) <= 81.0);
            if hit {
                covered += 1;
                expected += peak - img.get(r, c);
                assert_eq!(out.get(r, c), peak);
            } else {
                assert_eq!(out.get(r, c), img.get(r, c));
            }
        }
    }
    assert!(((out.sum() - img.sum()) - expected).abs() <= 1e-9);
    let disc = std::f64::consts::PI * 81.0;
    let lattice_slack = 2.0 * std::f64::consts::PI * 9.0;
    assert!(covered as f64 <= 4.0 * (disc + lattice_slack));
    let reach = 128.0 - 9.0;
    for &(y, x) in &centers {
        assert!((y - 127.5).hypot(x - 127.5) <= reach);
    }
}

#[test]
fn dataset_shape_and_labels() {
    let spec = DatasetSpec::new(vec![3, 7, 12], 4, 64, 5).with_affine(AffineRanges::moderate());
    let ds = build_dataset(&spec).unwrap();
    assert_eq!(ds.classes(), 3);
    assert_eq!(ds.samples.len(), 12);
    for (i, s) in ds.samples.iter().enumerate() {
        assert_eq!(s.label, i / 4);
        assert_eq!(s.index, i % 4);
        assert_eq!(s.template, spec.templates[s.label]);
        assert_eq!(s.seed, derive_seed(5, s.label as u64, s.index as u64));
        assert!(s.image.data().iter().all(|&v| v >= 0.0));
    }
    assert_eq!(ds.labels(), vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2]);
}

#[test]
fn dataset_does_not_depend_on_thread_count() {
    let spec = DatasetSpec::new(vec![1, 2, 9], 5, 64, 77)
        .with_affine(AffineRanges::strong())
        .with_corruption(CorruptionRanges {
            f1: Range::new(1.0, 3.0).unwrap(),
            f2: Range::new(1.0, 3.0).unwrap(),
            a1: Range::new(0.0, 2.0).unwrap(),
            a2: Range::new(0.0, 2.0).unwrap(),
            salt_count: (1, 3),
            salt_radius: 2.0,
        });
    let build = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| build_dataset(&spec).unwrap())
    };
    assert_eq!(build(1), build(4));
}

#[test]
fn salt_settings_do_not_move_the_geometry() {
    let plain = DatasetSpec::new(vec![5, 6], 3, 64, 12).with_affine(AffineRanges::strong());
    let noisy = plain.clone().with_corruption(CorruptionRanges {
        salt_count: (2, 6),
        salt_radius: 3.0,
        ..CorruptionRanges::none()
    });
    let (a, b) = (build_dataset(&plain).unwrap(), build_dataset(&noisy).unwrap());
    for (x, y) in a.samples.iter().zip(&b.samples) {
        assert_eq!(x.affine, y.affine);
        assert!(y.corruption.salt.count >= 2);
    }
}

#[test]
fn invalid_specs() {
    assert!(matches!(build_dataset(&DatasetSpec::new(vec![], 1, 64, 0)), Err(Error::EmptyTemplateSet)));
    assert!(matches!(build_dataset(&DatasetSpec::new(vec![13], 1, 64, 0)), Err(Error::BadTemplateId(13))));
    let bad = DatasetSpec::new(vec![1], 1, 64, 0)
        .with_corruption(CorruptionRanges { salt_count: (3, 1), ..CorruptionRanges::none() });
    assert!(matches!(bad.validate(), Err(Error::InvalidParameter(_))));
}

#[test]
fn fixed_ranges_consume_one_draw() {
    let (mut a, mut b) = (rng_for(9, 0), rng_for(9, 0));
    assert_eq!(Range::fixed(2.5).sample(&mut a), 2.5);
    Range::new(0.0, 1.0).unwrap().sample(&mut b);
    assert_eq!(a.next_u64(), b.next_u64());
}

#[test]
fn derived_seeds_do_not_collide() {
    let seeds: HashSet<u64> = (0..50).flat_map(|c| (0..200).map(move |i| derive_seed(1, c, i))).collect();
    assert_eq!(seeds.len(), 50 * 200);
    assert_ne!(derive_seed(1, 0, 0), derive_seed(2, 0, 0));
}

#[test]
fn idx_file_round_trip_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("imgs.idx");
    let data = IdxData::Images { count: 3, rows: 4, cols: 5, pixels: (0..60).collect() };
    write_idx(&path, &data).unwrap();
    assert_eq!(read_idx(&path).unwrap(), data);
    assert_eq!(data.image(1).unwrap(), &(20..40).collect::<Vec<u8>>()[..]);
    let bytes = encode_idx(&data);
    assert_eq!(&bytes[..4], &[0, 0, 8, 3]);
    assert!(matches!(parse_idx(&bytes[..30]), Err(Error::TruncatedFile { .. })));
    assert!(matches!(parse_idx(&[0, 0, 9, 9, 0, 0, 0, 0]), Err(Error::BadMagic(0x0909))));
    assert!(matches!(read_idx(dir.path().join("missing")), Err(Error::Io(_))));
}

proptest! {
    #[test]
    fn idx_round_trip(count in 0usize..5, rows in 1usize..6, cols in 1usize..6, seed in any::<u64>(), labels in prop::collection::vec(any::<u8>(), 0..40)) {
        let mut rng = rng_for(seed, 0);
        let pixels: Vec<u8> = (0..count * rows * cols).map(|_| rng.next_u32() as u8).collect();
        let data = IdxData::Images { count, rows, cols, pixels };
        prop_assert_eq!(parse_idx(&encode_idx(&data)).unwrap(), data);
        let l = IdxData::Labels(labels);
        prop_assert_eq!(parse_idx(&encode_idx(&l)).unwrap(), l);
    }

    #[test]
    fn sinusoid_displacement_is_bounded(f1 in 0.0f64..8.0, f2 in 0.0f64..8.0, a1 in 0.0f64..10.0, a2 in 0.0f64..10.0, j in 0usize..256, k in 0usize..256) {
        let s = Sinusoid { f1, f2, a1, a2 };
        let (dr, dc) = s.displacement(j, k, 256);
        prop_assert!(dr.hypot(dc) <= s.max_displacement() + 1e-12);
        prop_assert!(dr.abs() <= a1 && dc.abs() <= a2);
    }

    #[test]
    fn zero_amplitude_is_identity(f1 in 0.0f64..8.0, f2 in 0.0f64..8.0, id in 1usize..=12) {
        let img = render_template(id, 32).unwrap();
        prop_assert_eq!(warp_sinusoidal(&img, &Sinusoid { f1, f2, a1: 0.0, a2: 0.0 }), img);
    }

    #[test]
    fn full_turns_are_identity(k in -3i32..4, id in 1usize..=12) {
        let img = render_template(id, 32).unwrap();
        let w = warp_affine(&img, &AffineParams::rotation(90.0 * k as f64)).unwrap();
        let mut expect = img.clone();
        for _ in 0..k.rem_euclid(4) {
            expect = expect.rotate90();
        }
        prop_assert_eq!(w, expect);
    }
}
