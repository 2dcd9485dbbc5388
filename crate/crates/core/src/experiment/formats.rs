//! On-disk formats: result CSV, 8-bit PGM heatmaps, and dataset
//! directories of 16-bit PGM images with a manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::datagen::Dataset;
use crate::error::{Error, Result};
use crate::image::Image;

pub const CSV_HEADER: &str =
    "config_hash,setting,angles,radii,points,representation,metric,accuracy_mean,accuracy_std,seed,runtime_s";

/// One line of the result table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub config_hash: String,
    pub setting: String,
    pub angles: usize,
    pub radii: usize,
    pub points: usize,
    pub representation: String,
    pub metric: String,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub seed: u64,
    pub runtime_s: f64,
}

impl ResultRow {
    fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.config_hash,
            self.setting,
            self.angles,
            self.radii,
            self.points,
            self.representation,
            self.metric,
            self.accuracy_mean,
            self.accuracy_std,
            self.seed,
            self.runtime_s
        )
    }
}

pub fn encode_csv(rows: &[ResultRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_line());
        s.push('\n');
    }
    s
}

pub fn write_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_csv(rows))?;
    Ok(())
}

pub fn parse_csv(text: &str, path: &Path) -> Result<Vec<ResultRow>> {
    let fail = |message: String| Error::Format { path: path.to_path_buf(), message };
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(fail("missing or unexpected header".into()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 11 {
                return Err(fail(format!("row {} has {} fields", i + 1, f.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| fail(format!("bad number '{s}'")));
            let int = |s: &str| s.parse::<u64>().map_err(|_| fail(format!("bad integer '{s}'")));
            Ok(ResultRow {
                config_hash: f[0].into(),
                setting: f[1].into(),
                angles: int(f[2])? as usize,
                radii: int(f[3])? as usize,
                points: int(f[4])? as usize,
                representation: f[5].into(),
                metric: f[6].into(),
                accuracy_mean: num(f[7])?,
                accuracy_std: num(f[8])?,
                seed: int(f[9])?,
                runtime_s: num(f[10])?,
            })
        })
        .collect()
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    parse_csv(&fs::read_to_string(path)?, path)
}

/// Binary 8-bit PGM of a matrix with values in `[0, 1]`; each cell becomes a
/// `scale x scale` block.
pub fn encode_pgm(matrix: &[Vec<f64>], scale: usize, comment: &str) -> Result<Vec<u8>> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let scale = scale.max(1);
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidParameter("ragged matrix".into()));
    }
    if let Some(v) = matrix.iter().flatten().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::ValueOutOfRange(*v));
    }
    let mut out = format!("P5\n# {comment}\n{} {}\n255\n", cols * scale, rows * scale).into_bytes();
    for row in matrix {
        let line: Vec<u8> =
            row.iter().flat_map(|v| std::iter::repeat_n((v * 255.0).round() as u8, scale)).collect();
        for _ in 0..scale {
            out.extend_from_slice(&line);
        }
    }
    Ok(out)
}

pub fn write_pgm(matrix: &[Vec<f64>], path: impl AsRef<Path>, scale: usize, comment: &str) -> Result<()> {
    fs::write(path, encode_pgm(matrix, scale, comment)?)?;
    Ok(())
}

/// 16-bit PGM of an image scaled by its maximum; returns the bytes.
pub fn encode_pgm16(img: &Image, comment: &str) -> Vec<u8> {
    let peak = img.max().max(f64::MIN_POSITIVE);
    let mut out = format!("P5\n# {comment}\n{} {}\n65535\n", img.cols(), img.rows()).into_bytes();
    for v in img.data() {
        let q = (v / peak * 65535.0).round().clamp(0.0, 65535.0) as u16;
        out.extend_from_slice(&q.to_be_bytes());
    }
    out
}

fn pgm_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
        } else {
            break;
        }
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (start < *pos).then(|| &bytes[start..*pos])
}

/// Reads an 8- or 16-bit binary PGM into gray values in `[0, 1]`.
pub fn read_pgm(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    let fail = |m: &str| Error::Format { path: path.to_path_buf(), message: m.into() };
    let mut pos = 0;
    if pgm_token(&bytes, &mut pos) != Some(b"P5") {
        return Err(fail("not a binary PGM"));
    }
    let mut num = || -> Result<usize> {
        pgm_token(&bytes, &mut pos)
            .and_then(|t| std::str::from_utf8(t).ok()?.parse().ok())
            .ok_or_else(|| fail("bad header"))
    };
    let (cols, rows, maxval) = (num()?, num()?, num()?);
    pos += 1;
    let wide = maxval > 255;
    let need = rows * cols * if wide { 2 } else { 1 };
    let payload = bytes
        .get(pos..pos + need)
        .ok_or(Error::TruncatedFile { expected: pos + need, found: bytes.len() })?;
    let data = if wide {
        payload.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]]) as f64 / maxval as f64).collect()
    } else {
        payload.iter().map(|&b| b as f64 / maxval as f64).collect()
    };
    Ok(Image::from_vec(rows, cols, data))
}

const MANIFEST_HEADER: &str = "file,role,class,template,index,seed,scale_x,scale_y,shear_x,shear_y,rotation,shift_x,shift_y,sin_f1,sin_f2,sin_a1,sin_a2,salt_count,salt_radius";

/// Writes templates and samples as 16-bit PGMs plus `manifest.csv`.
pub fn write_dataset(ds: &Dataset, dir: impl AsRef<Path>, config_hash: &str) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let seed = ds.spec.seed;
    let mut manifest = String::from(MANIFEST_HEADER);
    manifest.push('\n');
    for (c, img) in ds.templates.iter().enumerate() {
        let name = format!("template_{:02}.pgm", c);
        let comment = format!("seed={seed} config={config_hash} template={}", ds.spec.templates[c]);
        fs::write(dir.join(&name), encode_pgm16(img, &comment))?;
        manifest.push_str(&format!(
            "{name},template,{c},{},0,{seed},1,1,0,0,0,0,0,0,0,0,0,0,0\n",
            ds.spec.templates[c]
        ));
    }
    for s in &ds.samples {
        let name = format!("sample_{:02}_{:04}.pgm", s.label, s.index);
        let comment = format!("seed={seed} config={config_hash} sample_seed={}", s.seed);
        fs::write(dir.join(&name), encode_pgm16(&s.image, &comment))?;
        let a = &s.affine;
        let c = &s.corruption;
        manifest.push_str(&format!(
            "{name},sample,{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            s.label,
            s.template,
            s.index,
            s.seed,
            a.scale_x,
            a.scale_y,
            a.shear_x,
            a.shear_y,
            a.rotation,
            a.shift_x,
            a.shift_y,
            c.sinusoid.f1,
            c.sinusoid.f2,
            c.sinusoid.a1,
            c.sinusoid.a2,
            c.salt.count,
            c.salt.radius
        ));
    }
    let mut f = fs::File::create(dir.join("manifest.csv"))?;
    f.write_all(manifest.as_bytes())?;
    Ok(())
}

/// Entry of a dataset directory read back from disk.
#[derive(Debug, Clone)]
pub struct StoredImage {
    pub file: PathBuf,
    pub is_template: bool,
    pub class: usize,
    pub image: Image,
}

/// Reads the images listed in a dataset directory's manifest.
pub fn read_dataset(dir: impl AsRef<Path>) -> Result<Vec<StoredImage>> {
    let dir = dir.as_ref();
    let manifest_path = dir.join("manifest.csv");
    let text = fs::read_to_string(&manifest_path)?;
    let fail = |m: String| Error::Format { path: manifest_path.clone(), message: m };
    let mut lines = text.lines();
    if lines.next() != Some(MANIFEST_HEADER) {
        return Err(fail("unexpected manifest header".into()));
    }
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() < 3 {
                return Err(fail(format!("short manifest row '{line}'")));
            }
            let class = f[2].parse().map_err(|_| fail(format!("bad class in '{line}'")))?;
            let file = dir.join(f[0]);
            Ok(StoredImage { image: read_pgm(&file)?, file, is_template: f[1] == "template", class })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_examples() {
        let bytes = encode_pgm(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1, "x").unwrap();
        assert_eq!(&bytes[bytes.len() - 4..], &[0x00, 0xff, 0xff, 0x00]);
        assert!(bytes.starts_with(b"P5\n# x\n2 2\n255\n"));
        assert!(matches!(encode_pgm(&[vec![1.5]], 1, ""), Err(Error::ValueOutOfRange(_))));
    }

    #[test]
    fn csv_round_trip() {
        let row = ResultRow {
            config_hash: "abc".into(),
            setting: "rigid".into(),
            angles: 64,
            radii: 850,
            points: 64,
            representation: "mnrcdt".into(),
            metric: "l2".into(),
            accuracy_mean: 2.0 / 3.0,
            accuracy_std: 0.1,
            seed: 9,
            runtime_s: 0.0,
        };
        let text = encode_csv(std::slice::from_ref(&row));
        assert_eq!(text.lines().count(), 2);
        assert_eq!(parse_csv(&text, Path::new("t")).unwrap(), vec![row]);
        assert_eq!(encode_csv(&[]), format!("{CSV_HEADER}\n"));
    }
}
