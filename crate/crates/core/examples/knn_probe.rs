//! k-NN accuracy and pairwise linear separability of max-normalized features.
//!
//! cargo run --release --example knn_probe

use nrcdt::classify::{
    classify_knn, evaluate, extract_features, linear_probe, FeatureConfig, FeatureSet, Metric,
};
use nrcdt::datagen::{build_dataset, AffineRanges, DatasetSpec};
use nrcdt::nrcdt::FeatureKind;

fn main() -> nrcdt::Result<()> {
    let ds =
        build_dataset(&DatasetSpec::new(vec![2, 6, 10], 16, 128, 21).with_affine(AffineRanges::moderate()))?;
    let cfg = FeatureConfig::new(64, 425, 64);
    let feats = ds
        .samples
        .iter()
        .map(|s| extract_features(&s.image, FeatureKind::MaxNrcdt, &cfg))
        .collect::<nrcdt::Result<Vec<_>>>()?;
    let (mut refs, mut ref_labels, mut queries, mut truth) = (vec![], vec![], vec![], vec![]);
    for (s, f) in ds.samples.iter().zip(feats) {
        if s.index < 8 {
            refs.push(f);
            ref_labels.push(s.label);
        } else {
            queries.push(f);
            truth.push(s.label);
        }
    }
    let set = FeatureSet::new(refs, ref_labels, Metric::L2)?;
    let report = evaluate(&classify_knn(&queries, &set, 3)?, &truth)?;
    println!("3-NN accuracy {:.3}", report.accuracy);
    for row in &report.confusion {
        println!("  {row:?}");
    }
    for a in 0..3 {
        for b in a + 1..3 {
            let pick = |l| {
                set.vectors
                    .iter()
                    .zip(&set.labels)
                    .filter(|(_, &x)| x == l)
                    .map(|(v, _)| v.values.clone())
                    .collect::<Vec<_>>()
            };
            let p = linear_probe(&pick(a), &pick(b), 5000)?;
            println!("classes {a}/{b}: separable {} margin {:.4}", p.separable, p.margin);
        }
    }
    Ok(())
}
