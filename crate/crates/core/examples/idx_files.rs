//! Encodes templates as an IDX image/label pair and reads them back, or
//! summarizes existing IDX files.
//!
//! cargo run --example idx_files -- [images.idx labels.idx]

use nrcdt::datagen::{encode_idx, parse_idx, read_idx, render_template, IdxData};

fn main() -> nrcdt::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let [images, labels] = args.as_slice() {
        let (images, labels) = (read_idx(images)?, read_idx(labels)?);
        println!("{} images, {} labels", images.len(), labels.len());
        return Ok(());
    }
    let mut pixels = Vec::new();
    for id in 1..=12 {
        let img = render_template(id, 28)?;
        let peak = img.max();
        pixels.extend(img.data().iter().map(|v| (v / peak * 255.0).round() as u8));
    }
    let images = IdxData::Images { count: 12, rows: 28, cols: 28, pixels };
    let labels = IdxData::Labels((0..12).collect());
    let bytes = encode_idx(&images);
    println!("{} bytes, header {:02x?}", bytes.len(), &bytes[..16]);
    assert_eq!(parse_idx(&bytes)?, images);
    assert_eq!(parse_idx(&encode_idx(&labels))?, labels);
    println!("round trip ok");
    Ok(())
}
