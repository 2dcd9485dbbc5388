//! Salt-noise phase transition for templates 1, 5 and 12 under rotations
//! and shifts. Writes CSV and one PGM heatmap per representation.
//!
//! cargo run --release --example phase_transition -- [angles] [out_dir]

use nrcdt::datagen::AffineRanges;
use nrcdt::experiment::{run_phase_transition, write_pgm, ExperimentConfig, PhaseGrid};
use nrcdt::nrcdt::FeatureKind;

fn main() -> nrcdt::Result<()> {
    let mut args = std::env::args().skip(1);
    let angles = args.next().and_then(|a| a.parse().ok()).unwrap_or(64);
    let out = args.next();
    let mut cfg = ExperimentConfig::default();
    cfg.dataset.templates = vec![1, 5, 12];
    cfg.dataset.affine = AffineRanges::rigid();
    cfg.dataset.seed = 3;
    cfg.angles = vec![angles];
    cfg.representations = vec![FeatureKind::MaxNrcdt, FeatureKind::MeanNrcdt];
    cfg.phase = Some(PhaseGrid { strengths: vec![1.0, 2.0, 3.0, 4.0, 5.0], counts: vec![1, 2, 4, 6, 8] });
    let res = run_phase_transition(&cfg)?;
    for (kind, m) in &res.accuracy {
        println!("{kind} (rows: counts {:?}, cols: strengths {:?})", res.counts, res.strengths);
        for row in m {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.3}")).collect();
            println!("  {}", cells.join(" "));
        }
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        std::fs::write(format!("{dir}/phase.csv"), res.to_csv())?;
        for kind in [FeatureKind::MaxNrcdt, FeatureKind::MeanNrcdt] {
            let comment = format!("seed={} config={}", res.seed, res.config_hash);
            write_pgm(res.matrix(kind).unwrap(), format!("{dir}/phase_{kind}.pgm"), 16, &comment)?;
        }
    }
    Ok(())
}
