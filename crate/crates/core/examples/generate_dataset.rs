//! Writes a seeded dataset (templates, warped and salted samples) as PGM files.
//!
//! cargo run --release --example generate_dataset -- [out_dir] [seed]

use nrcdt::datagen::{build_dataset, AffineRanges, CorruptionRanges, DatasetSpec, Range};
use nrcdt::experiment::write_dataset;

fn main() -> nrcdt::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "dataset".into());
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(5);
    let corruption = CorruptionRanges { salt_count: (0, 3), salt_radius: 2.0, ..CorruptionRanges::default() };
    let spec = DatasetSpec::new(vec![1, 4, 9, 12], 5, 128, seed)
        .with_affine(AffineRanges { rotation: Range::new(0.0, 90.0)?, ..AffineRanges::moderate() })
        .with_corruption(corruption);
    let ds = build_dataset(&spec)?;
    write_dataset(&ds, &out, "example")?;
    for s in ds.samples.iter().take(4) {
        println!("class {} sample {} seed {:#018x} {:?}", s.label, s.index, s.seed, s.affine);
    }
    println!("{} samples in {out}", ds.samples.len());
    Ok(())
}
