//! Reduced-size invariant suites runnable from the command line.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cdt::{cdt_distance_exact, rcdt_exact};
use crate::datagen::{build_dataset, rng_for, AffineRanges, DatasetSpec};
use crate::error::Error;
use crate::measure::{
    diameter, rho_moments, rho_norm, DiscreteMeasure1D, DiscreteMeasure2D, ReferenceMeasure,
};
use crate::nrcdt::{
    max_nrcdt, mean_nrcdt, min_std, normalize_field_with_guard, w2_radius, winf_radius, RobustnessBudget,
    STD_GUARD,
};
use crate::ot::{w_1d, w_2d_assignment, Order};
use crate::radon::{back_project, restricted_slice, AngleGrid, RadialGrid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Degeneracy threshold handed to the normalization; lowering it to zero
    /// is the negative control for the normalization suite.
    pub std_guard: f64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self { seed: 2024, std_guard: STD_GUARD }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

fn disc_points(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            let a = std::f64::consts::TAU * rng.gen::<f64>();
            [r * a.cos(), r * a.sin()]
        })
        .collect()
}

fn measure_1d(rng: &mut ChaCha8Rng) -> DiscreteMeasure1D {
    let n = rng.gen_range(1..=8);
    let pos: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mass: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    DiscreteMeasure1D::from_atoms(&pos, &mass).unwrap()
}

fn isometry(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, b) = (measure_1d(rng), measure_1d(rng));
        worst = worst.max((cdt_distance_exact(&a, &b) - w_1d(&a, &b, Order::Two)).abs());
    }
    (worst <= 1e-10, format!("max |exact - oracle| = {worst:.2e}"))
}

fn contraction(rng: &mut ChaCha8Rng) -> (bool, String) {
    let grid = AngleGrid::new(8).unwrap();
    let mut violations = 0;
    for _ in 0..20 {
        let n = rng.gen_range(2..=6);
        let a = DiscreteMeasure2D::uniform(disc_points(rng, n, 1.0)).unwrap();
        let b = DiscreteMeasure2D::uniform(disc_points(rng, n, 1.0)).unwrap();
        for p in [Order::Two, Order::Inf] {
            let full = w_2d_assignment(&a, &b, p).unwrap();
            for &theta in grid.directions() {
                let sa = restricted_slice(&a, theta).unwrap();
                let sb = restricted_slice(&b, theta).unwrap();
                if w_1d(&sa, &sb, p) > full + 1e-12 {
                    violations += 1;
                }
            }
        }
    }
    (violations == 0, format!("{violations} violations"))
}

fn adjointness(rng: &mut ChaCha8Rng) -> (bool, String) {
    let radial = RadialGrid::new(33).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let pts = disc_points(rng, 12, 0.9);
        let masses: Vec<f64> = (0..12).map(|_| rng.gen_range(0.1..1.0)).collect();
        let m = DiscreteMeasure2D::new(pts, masses).unwrap();
        let h: Vec<f64> = (0..33).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let theta = [phi.cos(), phi.sin()];
        let slice = restricted_slice(&m, theta).unwrap();
        let lhs: f64 = slice
            .positions()
            .iter()
            .zip(slice.masses())
            .map(|(&s, &w)| w * radial.interpolate(&h, s).unwrap())
            .sum();
        let back = back_project(&h, radial, theta, m.points()).unwrap();
        let rhs: f64 = back.iter().zip(m.masses()).map(|(v, w)| v * w).sum();
        worst = worst.max((lhs - rhs).abs());
    }
    (worst <= 1e-10, format!("max pairing gap = {worst:.2e}"))
}

fn normalization(rng: &mut ChaCha8Rng, guard: f64) -> (bool, String) {
    let grid = AngleGrid::new(16).unwrap();
    let reference = ReferenceMeasure::uniform(64).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let m = DiscreteMeasure2D::uniform(disc_points(rng, 20, 0.8)).unwrap();
        let f = rcdt_exact(&m, &grid, &reference).unwrap();
        let n = match normalize_field_with_guard(&f, guard) {
            Ok(n) => n,
            Err(e) => return (false, format!("unexpected error {e}")),
        };
        for col in n.columns() {
            let (mean, std) = rho_moments(col);
            worst = worst.max(mean.abs()).max((std - 1.0).abs());
        }
    }
    // points on the x-axis up to a 1e-14 wobble: the vertical direction is
    // numerically degenerate and must be refused
    let flat: Vec<[f64; 2]> = (0..6).map(|i| [i as f64 * 0.1 - 0.25, 1e-14 * (i % 2) as f64]).collect();
    let m = DiscreteMeasure2D::uniform(flat).unwrap();
    let f = rcdt_exact(&m, &AngleGrid::new(4).unwrap(), &reference).unwrap();
    let guarded = matches!(normalize_field_with_guard(&f, guard), Err(Error::DegenerateDirection(_)));
    (
        worst <= 1e-10 && guarded,
        format!("max moment error = {worst:.2e}, degenerate input refused: {guarded}"),
    )
}

fn bounds(rng: &mut ChaCha8Rng) -> (bool, String) {
    let grid = AngleGrid::new(16).unwrap();
    let reference = ReferenceMeasure::uniform(64).unwrap();
    let mut checked = 0;
    let mut violations = 0;
    while checked < 10 {
        let pts = disc_points(rng, 8, 0.8);
        let mu0 = DiscreteMeasure2D::uniform(pts.clone()).unwrap();
        let f0 = rcdt_exact(&mu0, &grid, &reference).unwrap();
        let c0 = min_std(&f0);
        let delta = rng.gen_range(0.0..0.45) * c0;
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let mut moved = pts;
        moved[0] = [moved[0][0] + delta * phi.cos(), moved[0][1] + delta * phi.sin()];
        let mue = DiscreteMeasure2D::uniform(moved).unwrap();
        let fe = rcdt_exact(&mue, &grid, &reference).unwrap();
        let (Ok(n0), Ok(ne)) =
            (normalize_field_with_guard(&f0, STD_GUARD), normalize_field_with_guard(&fe, STD_GUARD))
        else {
            continue;
        };
        checked += 1;
        let diam = diameter(&mu0);
        let rinf = winf_radius(&RobustnessBudget::new(delta, c0, diam)).unwrap();
        let (m0, me) = (max_nrcdt(&n0), max_nrcdt(&ne));
        let dinf = m0.values.iter().zip(&me.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let eps2 = delta / 8f64.sqrt();
        let r2 = w2_radius(&RobustnessBudget::new(eps2, c0, diam)).unwrap();
        let (a0, ae) = (mean_nrcdt(&n0), mean_nrcdt(&ne));
        let diff: Vec<f64> = a0.values.iter().zip(&ae.values).map(|(a, b)| a - b).collect();
        if dinf > rinf || rho_norm(&diff) > r2 {
            violations += 1;
        }
    }
    (violations == 0, format!("{violations} violations in {checked} constructions"))
}

fn determinism(seed: u64) -> (bool, String) {
    let spec = DatasetSpec::new(vec![1, 5, 12], 2, 64, seed).with_affine(AffineRanges::strong());
    let a = build_dataset(&spec);
    let b = build_dataset(&spec);
    match (a, b) {
        (Ok(a), Ok(b)) => (a == b, "two builds compared".into()),
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    }
}

/// Runs every suite and reports each outcome; never panics on a failure.
pub fn selftest(opts: &SelftestOptions) -> SelftestReport {
    let mut rng = rng_for(opts.seed, 7);
    let mut suites = Vec::new();
    let mut push = |name, (passed, detail): (bool, String)| suites.push(SuiteResult { name, passed, detail });
    push("isometry", isometry(&mut rng));
    push("contraction", contraction(&mut rng));
    push("adjointness", adjointness(&mut rng));
    push("normalization", normalization(&mut rng, opts.std_guard));
    push("bounds", bounds(&mut rng));
    push("determinism", determinism(opts.seed));
    SelftestReport { suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let report = selftest(&SelftestOptions::default());
        for s in &report.suites {
            assert!(s.passed, "{}: {}", s.name, s.detail);
        }
    }

    #[test]
    fn zero_guard_fails_normalization() {
        let report = selftest(&SelftestOptions { std_guard: 0.0, ..Default::default() });
        assert!(!report.suite("normalization").unwrap().passed);
        assert!(report.suite("isometry").unwrap().passed);
    }
}
