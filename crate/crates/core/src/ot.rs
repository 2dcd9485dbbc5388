//! Brute-force Wasserstein distances, kept deliberately simple so they can
//! serve as ground truth for the transform code.

use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure1D, DiscreteMeasure2D};

/// Mass below which a coupling entry is ignored for `W_inf`.
const MASS_EPS: f64 = 1e-12;

/// Largest atom count accepted by [`w_2d_assignment`].
pub const MAX_ASSIGNMENT_ATOMS: usize = 8;

/// Exponent of a Wasserstein distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Two,
    Inf,
}

/// Sparse coupling between a source and a target atom set.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    /// `(source index, target index, mass)`.
    pub entries: Vec<(usize, usize, f64)>,
    pub source_len: usize,
    pub target_len: usize,
}

impl TransportPlan {
    /// Row sums of the plan.
    pub fn source_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.source_len];
        for &(i, _, w) in &self.entries {
            out[i] += w;
        }
        out
    }

    /// Column sums of the plan.
    pub fn target_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.target_len];
        for &(_, j, w) in &self.entries {
            out[j] += w;
        }
        out
    }
}

/// North-west corner coupling of two sorted 1-D measures, which is the
/// monotone (and therefore optimal) plan on the line.
pub fn monotone_plan(a: &DiscreteMeasure1D, b: &DiscreteMeasure1D) -> TransportPlan {
    let (ma, mb) = (a.masses(), b.masses());
    let mut ra = ma[0];
    let mut rb = mb[0];
    let (mut i, mut j) = (0, 0);
    let mut entries = Vec::with_capacity(ma.len() + mb.len());
    loop {
        let w = ra.min(rb);
        if w > 0.0 {
            entries.push((i, j, w));
        }
        ra -= w;
        rb -= w;
        // whichever side ran out (or both) advances; rounding leftovers are
        // pushed onto the last atom
        let adv_i = ra <= rb && i + 1 < ma.len();
        let adv_j = rb <= ra && j + 1 < mb.len();
        if !adv_i && !adv_j {
            break;
        }
        if adv_i {
            i += 1;
            ra += ma[i];
        }
        if adv_j {
            j += 1;
            rb += mb[j];
        }
    }
    TransportPlan { entries, source_len: ma.len(), target_len: mb.len() }
}

/// 1-D Wasserstein distance from the monotone coupling.
pub fn w_1d(a: &DiscreteMeasure1D, b: &DiscreteMeasure1D, p: Order) -> f64 {
    let plan = monotone_plan(a, b);
    let (pa, pb) = (a.positions(), b.positions());
    match p {
        Order::Two => plan.entries.iter().map(|&(i, j, w)| w * (pa[i] - pb[j]).powi(2)).sum::<f64>().sqrt(),
        Order::Inf => plan
            .entries
            .iter()
            .filter(|e| e.2 > MASS_EPS)
            .map(|&(i, j, _)| (pa[i] - pb[j]).abs())
            .fold(0.0, f64::max),
    }
}

fn check_uniform(m: &DiscreteMeasure2D) -> Result<()> {
    let w = 1.0 / m.len() as f64;
    if m.masses().iter().any(|&x| (x - w).abs() > 1e-12) {
        return Err(Error::NonUniform);
    }
    Ok(())
}

/// 2-D Wasserstein distance between two uniform measures with the same
/// number of atoms, by enumerating every permutation.
pub fn w_2d_assignment(a: &DiscreteMeasure2D, b: &DiscreteMeasure2D, p: Order) -> Result<f64> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::LengthMismatch(n, b.len()));
    }
    if n > MAX_ASSIGNMENT_ATOMS {
        return Err(Error::TooManyAtoms(n));
    }
    check_uniform(a)?;
    check_uniform(b)?;
    let mut cost = vec![0.0; n * n];
    for (i, x) in a.points().iter().enumerate() {
        for (j, y) in b.points().iter().enumerate() {
            let d = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
            cost[i * n + j] = match p {
                Order::Two => d * d,
                Order::Inf => d,
            };
        }
    }
    let eval = |perm: &[usize]| -> f64 {
        let it = perm.iter().enumerate().map(|(i, &j)| cost[i * n + j]);
        match p {
            Order::Two => it.sum(),
            Order::Inf => it.fold(0.0, f64::max),
        }
    };
    let mut best = f64::INFINITY;
    for_each_permutation(n, |perm| best = best.min(eval(perm)));
    Ok(match p {
        Order::Two => (best / n as f64).sqrt(),
        Order::Inf => best,
    })
}

/// Heap's algorithm.
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u1(p: &[f64]) -> DiscreteMeasure1D {
        DiscreteMeasure1D::uniform(p).unwrap()
    }

    #[test]
    fn diracs() {
        let (a, b) = (DiscreteMeasure1D::dirac(0.25), DiscreteMeasure1D::dirac(-1.0));
        assert_eq!(w_1d(&a, &b, Order::Two), 1.25);
        assert_eq!(w_1d(&a, &b, Order::Inf), 1.25);
    }

    #[test]
    fn two_point_example() {
        let (a, b) = (u1(&[0.0, 1.0]), u1(&[0.0, 2.0]));
        // coupling 0->0, 1->2 carries half the mass a distance 1
        assert!((w_1d(&a, &b, Order::Two) - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(w_1d(&a, &b, Order::Inf), 1.0);
    }

    #[test]
    fn plan_marginals() {
        let a = DiscreteMeasure1D::from_atoms(&[0.0, 1.0, 3.0], &[0.2, 0.3, 0.5]).unwrap();
        let b = DiscreteMeasure1D::from_atoms(&[-1.0, 2.0], &[0.65, 0.35]).unwrap();
        let plan = monotone_plan(&a, &b);
        for (x, y) in plan.source_marginal().iter().zip(a.masses()) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in plan.target_marginal().iter().zip(b.masses()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn square_example() {
        let a = DiscreteMeasure2D::uniform(vec![[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let b = DiscreteMeasure2D::uniform(vec![[0.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!((w_2d_assignment(&a, &b, Order::Two).unwrap() - 1.0).abs() < 1e-15);
        assert!((w_2d_assignment(&a, &b, Order::Inf).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn permutation_count() {
        let mut count = 0;
        for_each_permutation(5, |_| count += 1);
        assert_eq!(count, 120);
    }

    #[test]
    fn guards() {
        let pts: Vec<[f64; 2]> = (0..9).map(|i| [i as f64, 0.0]).collect();
        let a = DiscreteMeasure2D::uniform(pts.clone()).unwrap();
        assert!(matches!(w_2d_assignment(&a, &a, Order::Two), Err(Error::TooManyAtoms(9))));
        let b = DiscreteMeasure2D::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![0.3, 0.7]).unwrap();
        let c = DiscreteMeasure2D::uniform(vec![[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(w_2d_assignment(&b, &c, Order::Two), Err(Error::NonUniform)));
    }
}
