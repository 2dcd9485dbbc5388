//! Nearest-template accuracies under random affine transformations.
//!
//! cargo run --release --example affine_table -- [strong|moderate|mild|rigid] [angles...]

use nrcdt::classify::Metric;
use nrcdt::datagen::AffineRanges;
use nrcdt::experiment::{encode_csv, run_experiment, ExperimentConfig};

fn main() -> nrcdt::Result<()> {
    let mut args = std::env::args().skip(1);
    let setting = args.next().unwrap_or_else(|| "rigid".into());
    let affine = match setting.as_str() {
        "strong" => AffineRanges::strong(),
        "moderate" => AffineRanges::moderate(),
        "mild" => AffineRanges::mild(),
        _ => AffineRanges::rigid(),
    };
    let angles: Vec<usize> = args.filter_map(|a| a.parse().ok()).collect();
    let mut cfg = ExperimentConfig::default();
    cfg.dataset.affine = affine;
    cfg.dataset.seed = 1;
    cfg.setting = setting;
    cfg.metrics = vec![Metric::LInf, Metric::L2];
    if !angles.is_empty() {
        cfg.angles = angles;
    }
    print!("{}", encode_csv(&run_experiment(&cfg)?));
    Ok(())
}
